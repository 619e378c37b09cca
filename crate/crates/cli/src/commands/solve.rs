use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use regret_core::analysis::{nash_gap, RegretLedger};
use regret_core::game::StrategyProfile;
use regret_core::regret::{
    cfr_iterate_with, external_sampling_iterate_with, DiagnosticCounters, ProfileMode, SolverState,
};
use regret_core::Error;

use super::{parse_action, parse_player};
use crate::config::merge;
use crate::error::{usage, CliResult};
use crate::output::OutputDir;
use crate::spec::{load_game, load_profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Vanilla,
    ExternalSampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileArg {
    Full,
    CurrentOnly,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Game to solve (kuhn, kuhn3, leduc, miniholdem:R:S:ROUNDS:BETS, fig2, file:PATH).
    #[arg(long)]
    pub game: Option<String>,
    /// Payoff tilt such as orange:7 or green:14.
    #[arg(long)]
    pub tilt: Option<String>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,
    /// Keep the average profile (full) or only regrets (current-only).
    #[arg(long, value_enum)]
    pub profile: Option<ProfileArg>,
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Comma-separated checkpoint iterations; defaults to powers of ten plus the last iteration.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<u64>>,
    /// Required for external sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the average profile at checkpoints (default: true in full mode).
    #[arg(long)]
    pub average: Option<bool>,
    /// Count iterations where INFOSET_KEY:ACTION has positive probability.
    #[arg(long)]
    pub track_action: Option<Vec<String>>,
    /// PLAYER=PATH: count iterations whose support contains this strategy's support.
    #[arg(long)]
    pub track_strategy: Option<Vec<String>>,
    /// Record opponent reach mass at this information set key.
    #[arg(long)]
    pub track_reach: Option<Vec<String>>,
}

/// Powers of ten up to the budget, plus the budget itself.
pub fn default_schedule(iterations: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(1u64), |&t| t.checked_mul(10))
        .take_while(|&t| t <= iterations)
        .collect();
    if out.last() != Some(&iterations) {
        out.push(iterations);
    }
    out
}

pub fn solve(args: SolveArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let game_spec = cfg.game.clone().unwrap_or_else(|| "kuhn".into());
    let game = load_game(&game_spec, cfg.tilt.as_deref())?.extensive("solve")?;
    let iterations = cfg.iterations.ok_or_else(|| usage("iterations: required"))?;
    if iterations == 0 {
        return Err(usage("iterations: must be at least 1"));
    }
    let schedule = cfg.checkpoints.clone().unwrap_or_else(|| default_schedule(iterations));
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(usage("checkpoints: must be a strictly increasing list of positive iterations"));
    }
    if schedule.last().is_some_and(|&t| t > iterations) {
        return Err(usage("checkpoints: may not exceed the iteration budget"));
    }
    let solver = cfg.solver.unwrap_or(SolverKind::Vanilla);
    let mode = match cfg.profile.unwrap_or(ProfileArg::Full) {
        ProfileArg::Full => ProfileMode::Full,
        ProfileArg::CurrentOnly => ProfileMode::CurrentOnly,
    };
    let write_average = match (cfg.average, mode) {
        (Some(true), ProfileMode::CurrentOnly) => {
            return Err(Error::UnsupportedMode("average: current-only runs keep no average profile".into()).into())
        }
        (Some(flag), _) => flag,
        (None, m) => m == ProfileMode::Full,
    };
    let out = cfg.out.clone().ok_or_else(|| usage("out: required"))?;

    let mut state = match solver {
        SolverKind::Vanilla => SolverState::new(&game, mode),
        SolverKind::ExternalSampling => {
            let seed = cfg.seed.ok_or_else(|| usage("seed: required for external sampling"))?;
            SolverState::new_sampled(&game, mode, seed)
        }
    };
    let mut counters = DiagnosticCounters::new();
    for text in cfg.track_action.iter().flatten() {
        let (i, a) = parse_action(&game, text)?;
        counters.track_action(&game, i, a)?;
    }
    for text in cfg.track_strategy.iter().flatten() {
        let (player, path) = text
            .split_once('=')
            .ok_or_else(|| usage(format!("track_strategy: {text:?} must look like PLAYER=PATH")))?;
        let player = parse_player(game.num_players(), player)?;
        counters.track_strategy(&game, player, load_profile(&game, Some(path))?)?;
    }
    for key in cfg.track_reach.iter().flatten() {
        let set = game.infoset_by_key(key).ok_or_else(|| usage(format!("track_reach: no information set {key:?}")))?;
        counters.track_reach(&game, set)?;
    }

    let mut dir = OutputDir::create(&out)?;
    let mut ledger = (game.num_players() <= 2).then(|| RegretLedger::new(&game));
    let mut counter_rows = Vec::new();
    let mut gap_rows = Vec::new();
    let mut next = schedule.iter().peekable();
    for t in 1..=iterations {
        let observe = |sigma: &StrategyProfile| {
            if let Some(l) = ledger.as_mut() {
                l.observe(&game, sigma);
            }
        };
        match solver {
            SolverKind::Vanilla => cfr_iterate_with(&game, &mut state, &mut counters, observe)?,
            SolverKind::ExternalSampling => external_sampling_iterate_with(&game, &mut state, &mut counters, observe)?,
        }
        if next.peek() != Some(&&t) {
            continue;
        }
        next.next();
        dir.write_json(&format!("checkpoints/checkpoint-{t}.json"), &state.to_checkpoint(&game))?;
        let current = state.current_profile();
        dir.write_json(&format!("profiles/current-{t}.json"), &current.to_keyed(&game))?;
        let evaluated = match mode {
            ProfileMode::Full => {
                let avg = state.average_profile()?;
                if write_average {
                    dir.write_json(&format!("profiles/average-{t}.json"), &avg.to_keyed(&game))?;
                }
                avg
            }
            ProfileMode::CurrentOnly => current,
        };
        counter_rows.push(counters.csv_row(t));
        if let Some(l) = &ledger {
            let report = nash_gap(&game, &evaluated);
            let bound = report.regret_bound(l.max_average_regret(&game));
            for g in &report.players {
                gap_rows.push(vec![
                    t.to_string(),
                    (g.player + 1).to_string(),
                    g.br_value.to_string(),
                    g.on_policy_value.to_string(),
                    g.gap.to_string(),
                    report.delta.to_string(),
                    bound.to_string(),
                ]);
            }
            println!("iteration {t}: nash gap {:.6} (bound {:.6})", report.max_gap, bound);
        } else {
            println!("iteration {t}: checkpoint written");
        }
    }
    dir.write_csv("counters.csv", &counters.csv_header(&game), &counter_rows)?;
    if ledger.is_some() {
        dir.write_csv("gap.csv", &gap_header(), &gap_rows)?;
    }
    let manifest = dir.finish("solve", &cfg)?;
    println!("wrote {}", manifest.display());
    Ok(())
}

pub fn gap_header() -> Vec<String> {
    ["checkpoint", "player", "br_value", "on_policy_value", "gap", "delta", "bound"].map(String::from).to_vec()
}
