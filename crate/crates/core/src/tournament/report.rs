use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::{exact_match_value, lineup_seed, sampled_match_value};
use super::Agent;
use crate::error::{invalid_input, Result};
use crate::game::ExtensiveFormGame;

/// Scores closer than this (milli-chips) count as tied.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standing {
    pub name: String,
    pub score: f64,
}

/// One instant-runoff round: survivors with their re-averaged scores and the
/// agents eliminated at the end of the round. A final round with nobody
/// eliminated is a tie among all survivors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IroRound {
    pub standings: Vec<Standing>,
    pub eliminated: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TournamentReport {
    pub agents: Vec<String>,
    /// Row agent against the column agent in milli-chips per game, averaged
    /// over every seat the row agent can take. `None` on the diagonal.
    pub cross_table: Vec<Vec<Option<f64>>>,
    /// Standard errors of the entries when they were sampled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_errors: Option<Vec<Vec<Option<f64>>>>,
    pub overall: Vec<f64>,
    pub tbr_ranking: Vec<Standing>,
    pub iro_rounds: Vec<IroRound>,
}

/// Lineups for "row agent in seat s, column agent everywhere else".
fn lineups(n_agents: usize, seats: usize) -> BTreeMap<(usize, usize), Vec<Vec<usize>>> {
    let mut out = BTreeMap::new();
    for i in 0..n_agents {
        for j in (0..n_agents).filter(|&j| j != i) {
            let v = (0..seats)
                .map(|s| (0..seats).map(|p| if p == s { i } else { j }).collect())
                .collect();
            out.insert((i, j), v);
        }
    }
    out
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Round robin with a caller-supplied lineup evaluator returning per-seat
/// (value, standard error) in chips. Distinct lineups are evaluated once, in
/// parallel.
pub fn round_robin_with<F>(game: &ExtensiveFormGame, roster: &[Agent], eval: F) -> Result<TournamentReport>
where
    F: Fn(&[usize], &[&Agent]) -> Result<(Vec<f64>, Option<Vec<f64>>)> + Sync,
{
    if roster.len() < 2 {
        return Err(invalid_input("a round robin needs at least two agents"));
    }
    for agent in roster {
        agent.profile.validate(game)?;
    }
    let seats = game.num_players();
    let plan = lineups(roster.len(), seats);
    let distinct: Vec<Vec<usize>> = plan.values().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let results: Vec<(Vec<f64>, Option<Vec<f64>>)> = distinct
        .par_iter()
        .map(|lineup| {
            let agents: Vec<&Agent> = lineup.iter().map(|&a| &roster[a]).collect();
            eval(lineup, &agents)
        })
        .collect::<Result<_>>()?;
    let value: BTreeMap<&Vec<usize>, &(Vec<f64>, Option<Vec<f64>>)> = distinct.iter().zip(&results).collect();

    let n = roster.len();
    let mut cross = vec![vec![None; n]; n];
    let mut errors = vec![vec![None; n]; n];
    let sampled = results.iter().any(|r| r.1.is_some());
    for (&(i, j), group) in &plan {
        let entry = mean(group.iter().enumerate().map(|(s, l)| value[l].0[s]));
        cross[i][j] = Some(1000.0 * entry);
        if sampled {
            // seat estimates are independent, so variances add
            let var: f64 = group
                .iter()
                .enumerate()
                .map(|(s, l)| value[l].1.as_ref().map_or(0.0, |e| e[s] * e[s]))
                .sum();
            errors[i][j] = Some(1000.0 * var.sqrt() / group.len() as f64);
        }
    }
    let mut report = TournamentReport {
        agents: roster.iter().map(|a| a.name.clone()).collect(),
        overall: cross.iter().map(|row| mean(row.iter().flatten().copied())).collect(),
        cross_table: cross,
        std_errors: sampled.then_some(errors),
        tbr_ranking: Vec::new(),
        iro_rounds: Vec::new(),
    };
    report.tbr_ranking = score_tbr(&report);
    report.iro_rounds = score_iro(&report);
    Ok(report)
}

/// Exact round robin: every pair over every seat assignment, by expectation.
pub fn round_robin(game: &ExtensiveFormGame, roster: &[Agent]) -> Result<TournamentReport> {
    round_robin_with(game, roster, |_, agents| Ok((exact_match_value(game, agents)?, None)))
}

/// Round robin where each lineup is estimated from `games` sampled hands.
pub fn sampled_round_robin(game: &ExtensiveFormGame, roster: &[Agent], games: u64, seed: u64) -> Result<TournamentReport> {
    round_robin_with(game, roster, |lineup, agents| {
        let v = sampled_match_value(game, agents, games, lineup_seed(seed, lineup))?;
        Ok((v.mean, Some(v.std_error)))
    })
}

fn sort_desc(standings: &mut [Standing]) {
    standings.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.name.cmp(&b.name)));
}

/// Total bankroll: agents by descending overall mean.
pub fn score_tbr(report: &TournamentReport) -> Vec<Standing> {
    let mut out: Vec<Standing> = report
        .agents
        .iter()
        .zip(&report.overall)
        .map(|(name, &score)| Standing { name: name.clone(), score })
        .collect();
    sort_desc(&mut out);
    out
}

/// Instant runoff: repeatedly drop every agent tied at the lowest mean over
/// the remaining opponents, until one agent is left or all are tied.
pub fn score_iro(report: &TournamentReport) -> Vec<IroRound> {
    let mut alive: Vec<usize> = (0..report.agents.len()).collect();
    let mut rounds = Vec::new();
    while alive.len() > 1 {
        let scores: Vec<f64> = alive
            .iter()
            .map(|&i| mean(alive.iter().filter(|&&j| j != i).filter_map(|&j| report.cross_table[i][j])))
            .collect();
        let low = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let high = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut standings: Vec<Standing> = alive
            .iter()
            .zip(&scores)
            .map(|(&i, &score)| Standing { name: report.agents[i].clone(), score })
            .collect();
        sort_desc(&mut standings);
        if high - low <= SCORE_TIE_TOLERANCE {
            rounds.push(IroRound { standings, eliminated: Vec::new() });
            break;
        }
        let (out, keep): (Vec<(usize, f64)>, Vec<(usize, f64)>) = alive
            .iter()
            .copied()
            .zip(scores)
            .partition(|&(_, s)| s - low <= SCORE_TIE_TOLERANCE);
        rounds.push(IroRound { standings, eliminated: out.iter().map(|&(i, _)| report.agents[i].clone()).collect() });
        alive = keep.into_iter().map(|(i, _)| i).collect();
    }
    rounds
}

/// Integer milli-chips for display, truncated toward zero.
fn display(x: f64) -> String {
    let t = x.trunc();
    if t == 0.0 {
        "0".into()
    } else {
        format!("{t:.0}")
    }
}

impl TournamentReport {
    /// Agents left standing after the last instant-runoff round.
    pub fn iro_winners(&self) -> Vec<String> {
        match self.iro_rounds.last() {
            Some(last) => last
                .standings
                .iter()
                .filter(|s| !last.eliminated.contains(&s.name))
                .map(|s| s.name.clone())
                .collect(),
            None => self.agents.clone(),
        }
    }

    /// Aligned text table: one row per agent, one column per opponent, and
    /// the overall mean; entries are integer milli-chips per game.
    pub fn to_table(&self) -> String {
        let mut header = vec![String::new()];
        header.extend(self.agents.iter().cloned());
        header.push("Overall".into());
        let mut rows = vec![header];
        for (i, name) in self.agents.iter().enumerate() {
            let mut row = vec![name.clone()];
            row.extend(self.cross_table[i].iter().map(|e| e.map_or("-".into(), display)));
            row.push(display(self.overall[i]));
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (cell, &w))| if c == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}
