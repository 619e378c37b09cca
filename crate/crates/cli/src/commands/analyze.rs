use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use regret_core::analysis::{self, nash_gap};
use regret_core::dominance::{
    is_coarse_correlated_equilibrium, iterated_action_removal_capped, iterated_strategy_removal, CorrelatedDevice,
    DominanceMode, DominanceReport, DEFAULT_ACTION_CAP,
};
use regret_core::game::{export_game, NormalFormGame};

use crate::config::merge;
use crate::error::{usage, CliError, CliResult};
use crate::output::OutputDir;
use crate::spec::{load_game, load_profile, LoadedGame};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Strict,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    Strategies,
    Actions,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long)]
    pub tilt: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Defaults to actions for extensive-form games and strategies for matrix games.
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// Largest continuation-by-opponent table examined per action.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn removal_rows(report: &DominanceReport) -> (Vec<String>, Vec<Vec<String>>) {
    let header = ["round", "player", "label", "margin", "certificate"].map(String::from).to_vec();
    let rows = report
        .removals
        .iter()
        .map(|r| {
            let cert: Vec<String> = r.certificate.iter().map(|(k, w)| format!("{k}={w}")).collect();
            vec![r.round.to_string(), (r.player + 1).to_string(), r.label.clone(), r.margin.to_string(), cert.join(";")]
        })
        .collect();
    (header, rows)
}

pub fn dominance(args: DominanceArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let game = load_game(cfg.game.as_deref().unwrap_or("kuhn"), cfg.tilt.as_deref())?;
    let mode = match cfg.mode.unwrap_or(ModeArg::Strict) {
        ModeArg::Strict => DominanceMode::Strict,
        ModeArg::Weak => DominanceMode::Weak,
    };
    let target = cfg.target.unwrap_or(match game {
        LoadedGame::Extensive(_) => TargetArg::Actions,
        LoadedGame::Normal(_) => TargetArg::Strategies,
    });
    let report = match target {
        TargetArg::Strategies => iterated_strategy_removal(&game.normal()?, mode)?,
        TargetArg::Actions => {
            let cap = cfg.cap.map_or(DEFAULT_ACTION_CAP, u128::from);
            iterated_action_removal_capped(&game.extensive("action dominance")?, mode, cap)?
        }
    };
    print!("{}", report.to_table());
    if let Some(out) = &cfg.out {
        let mut dir = OutputDir::create(out)?;
        dir.write_json("dominance.json", &report)?;
        let (header, rows) = removal_rows(&report);
        dir.write_csv("dominance.csv", &header, &rows)?;
        dir.finish("dominance", &cfg)?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestResponseArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long)]
    pub tilt: Option<String>,
    /// Profile or checkpoint file; uniform when omitted.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn best_response(args: BestResponseArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let game = load_game(cfg.game.as_deref().unwrap_or("kuhn"), cfg.tilt.as_deref())?.extensive("bestresponse")?;
    let profile = load_profile(&game, cfg.strategy.as_deref())?;
    let report = nash_gap(&game, &profile);
    let mut text = String::new();
    for g in &report.players {
        let _ = writeln!(
            text,
            "player {}: best response {:.9}, on policy {:.9}, gap {:.9}",
            g.player + 1,
            g.br_value,
            g.on_policy_value,
            g.gap
        );
    }
    let _ = writeln!(text, "max gap {:.9}, mean gap {:.9}, delta {}", report.max_gap, report.mean_gap, report.delta);
    print!("{text}");
    if let Some(out) = &cfg.out {
        let mut dir = OutputDir::create(out)?;
        dir.write_json("nash_gap.json", &report)?;
        for p in 0..game.num_players() {
            let br = analysis::best_response(&game, &profile, p);
            let keyed: std::collections::BTreeMap<String, Vec<f64>> = game
                .infosets_of(p)
                .iter()
                .map(|&i| (game.infoset(i).key.clone(), br.profile.get(i).to_vec()))
                .collect();
            dir.write_json(&format!("best_response-{}.json", p + 1), &keyed)?;
        }
        dir.finish("bestresponse", &cfg)?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CceArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Matrix game, or an extensive-form game taken to its normal form (default fig1).
    #[arg(long)]
    pub game: Option<String>,
    /// JSON list of {"weight", "actions": [label per player]} or {"weight", "mixed": [[probabilities] per player]}.
    #[arg(long)]
    pub device: Option<PathBuf>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceEntry {
    weight: f64,
    #[serde(default)]
    actions: Option<Vec<String>>,
    #[serde(default)]
    mixed: Option<Vec<Vec<f64>>>,
}

fn read_device(nf: &NormalFormGame, path: &std::path::Path) -> CliResult<CorrelatedDevice> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entries: Vec<DeviceEntry> =
        serde_json::from_str(&text).map_err(|e| usage(format!("device {}: {e}", path.display())))?;
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for entry in entries {
        let profile = match (entry.actions, entry.mixed) {
            (Some(labels), None) => {
                if labels.len() != nf.num_players() {
                    return Err(usage(format!("device: {} labels for {} players", labels.len(), nf.num_players())));
                }
                labels
                    .iter()
                    .enumerate()
                    .map(|(p, l)| {
                        let k = nf
                            .action_labels(p)
                            .iter()
                            .position(|x| x == l)
                            .ok_or_else(|| usage(format!("device: player {} has no action {l:?}", p + 1)))?;
                        Ok((0..nf.action_counts()[p]).map(|a| if a == k { 1.0 } else { 0.0 }).collect())
                    })
                    .collect::<CliResult<Vec<Vec<f64>>>>()?
            }
            (None, Some(mixed)) => mixed,
            _ => return Err(usage("device: each entry needs exactly one of actions or mixed")),
        };
        support.push(profile);
        weights.push(entry.weight);
    }
    Ok(CorrelatedDevice::new(nf, support, weights)?)
}

#[derive(Serialize)]
struct CceOutput {
    is_cce: bool,
    values: Vec<f64>,
    gains: Vec<f64>,
    tolerance: f64,
}

pub fn cce_check(args: CceArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let nf = load_game(cfg.game.as_deref().unwrap_or("fig1"), None)?.normal()?;
    let device_path = cfg.device.clone().ok_or_else(|| usage("device: required"))?;
    let device = read_device(&nf, &device_path)?;
    let tolerance = cfg.tolerance.unwrap_or(1e-9);
    let check = is_coarse_correlated_equilibrium(&nf, &device, tolerance)?;
    for (p, (v, g)) in check.values.iter().zip(&check.gains).enumerate() {
        println!("player {}: device value {v}, best fixed deviation gains {g}", p + 1);
    }
    println!("coarse correlated equilibrium: {}", if check.is_cce { "yes" } else { "no" });
    if let Some(out) = &cfg.out {
        let mut dir = OutputDir::create(out)?;
        let output = CceOutput { is_cce: check.is_cce, values: check.values, gains: check.gains, tolerance };
        dir.write_json("cce.json", &output)?;
        dir.finish("ccecheck", &cfg)?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportArgs {
    /// JSON config file; flags given here override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long)]
    pub tilt: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn export(args: ExportArgs) -> CliResult<()> {
    let path = args.config.clone();
    let cfg = merge(args, path.as_deref())?;
    let game = load_game(cfg.game.as_deref().unwrap_or("kuhn"), cfg.tilt.as_deref())?.extensive("export-game")?;
    let mut text = export_game(&game)?;
    text.push('\n');
    match &cfg.out {
        Some(file) => std::fs::write(file, text).map_err(|e| CliError::io(file, e))?,
        None => print!("{text}"),
    }
    Ok(())
}
