use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use regret_core::tournament::{build_kuhn_roster, load_roster, round_robin, sampled_round_robin, TournamentReport};

use crate::config::merge;
use crate::error::{usage, CliError, CliResult};
use crate::output::OutputDir;
use crate::spec::load_game;

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TournamentArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Game to play (default kuhn).
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long)]
    pub tilt: Option<String>,
    /// JSON list of {"name", "path"} or {"name", "builtin": "uniform"}; the
    /// six-agent Kuhn roster is used when omitted on plain Kuhn.
    #[arg(long)]
    pub roster: Option<PathBuf>,
    /// Estimate each lineup from this many sampled hands instead of exactly.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for lineup evaluation.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Cross table rows in milli-chips, full precision, blank on the diagonal.
pub fn cross_table_csv(report: &TournamentReport) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["agent".to_string()];
    header.extend(report.agents.iter().cloned());
    header.push("overall".into());
    let rows = report
        .agents
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut row = vec![name.clone()];
            row.extend(report.cross_table[i].iter().map(|e| e.map_or(String::new(), |v| v.to_string())));
            row.push(report.overall[i].to_string());
            row
        })
        .collect();
    (header, rows)
}

/// Three decimals, without a sign on values that print as zero.
fn score(x: f64) -> String {
    let text = format!("{x:.3}");
    if text == "-0.000" {
        "0.000".into()
    } else {
        text
    }
}

fn summary(report: &TournamentReport) -> String {
    let mut out = report.to_table();
    out.push_str("\ntotal bankroll\n");
    for (k, s) in report.tbr_ranking.iter().enumerate() {
        let _ = writeln!(out, "  {}. {} {}", k + 1, s.name, score(s.score));
    }
    out.push_str("\ninstant runoff\n");
    for (k, round) in report.iro_rounds.iter().enumerate() {
        let scores: Vec<String> = round.standings.iter().map(|s| format!("{} {}", s.name, score(s.score))).collect();
        let verdict = if round.eliminated.is_empty() {
            "tie".to_string()
        } else {
            format!("eliminated {}", round.eliminated.join(", "))
        };
        let _ = writeln!(out, "  round {}: {}; {}", k + 1, scores.join(", "), verdict);
    }
    let _ = writeln!(out, "  winners: {}", report.iro_winners().join(", "));
    out
}

pub fn tournament(args: TournamentArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let spec = cfg.game.clone().unwrap_or_else(|| "kuhn".into());
    let (game, roster) = match &cfg.roster {
        Some(file) => {
            let game = load_game(&spec, cfg.tilt.as_deref())?.extensive("a tournament")?;
            if !file.exists() {
                return Err(CliError::io(file, "no such roster file"));
            }
            let roster = load_roster(&game, file)?;
            (game, roster)
        }
        None if spec == "kuhn" && cfg.tilt.is_none() => build_kuhn_roster(),
        None => return Err(usage("roster: required unless playing the built-in Kuhn roster")),
    };
    if roster.len() < 2 {
        return Err(usage("roster: a tournament needs at least two agents"));
    }
    let run = || match cfg.samples {
        Some(0) => Err(usage("samples: must be positive")),
        Some(n) => Ok(sampled_round_robin(&game, &roster, n, cfg.seed.unwrap_or(0))?),
        None => Ok(round_robin(&game, &roster)?),
    };
    let report = match cfg.jobs {
        Some(0) => return Err(usage("jobs: must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(format!("jobs: {e}")))?
            .install(run)?,
        None => run()?,
    };
    print!("{}", summary(&report));
    if let Some(out) = &cfg.out {
        let mut dir = OutputDir::create(out)?;
        dir.write_json("tournament.json", &report)?;
        let (header, rows) = cross_table_csv(&report);
        dir.write_csv("cross_table.csv", &header, &rows)?;
        dir.write("table.txt", report.to_table().as_bytes())?;
        dir.finish("tournament", &cfg)?;
    }
    Ok(())
}
