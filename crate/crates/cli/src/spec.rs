//! Game specifications accepted on the command line.

use std::path::Path;

use regret_core::game::{
    apply_tilt, build_figure1_matrix, build_figure2_game, build_figure3_matrix, build_kuhn3_game, build_kuhn_game,
    build_mini_holdem, import_game, to_normal_form, ExtensiveFormGame, NormalFormGame, StrategyProfile, TiltKind,
    TiltSpec,
};

use crate::error::{usage, CliError, CliResult};

pub const GAME_HELP: &str = "kuhn, kuhn3, leduc, miniholdem:RANKS:SUITS:ROUNDS:BETS, fig1, fig2, fig3, or file:PATH";

pub enum LoadedGame {
    Extensive(ExtensiveFormGame),
    Normal(NormalFormGame),
}

impl LoadedGame {
    pub fn extensive(self, what: &str) -> CliResult<ExtensiveFormGame> {
        match self {
            LoadedGame::Extensive(g) => Ok(g),
            LoadedGame::Normal(g) => Err(usage(format!("{what} needs an extensive-form game, {} is a matrix game", g.name()))),
        }
    }

    pub fn normal(self) -> CliResult<NormalFormGame> {
        match self {
            LoadedGame::Normal(g) => Ok(g),
            LoadedGame::Extensive(g) => Ok(to_normal_form(&g)?),
        }
    }
}

fn numbers(text: &str, count: usize, spec: &str) -> CliResult<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != count {
        return Err(usage(format!("game {spec:?}: expected {count} parameters")));
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| usage(format!("game {spec:?}: {p:?} is not a number"))))
        .collect()
}

pub fn load_game(spec: &str, tilt: Option<&str>) -> CliResult<LoadedGame> {
    let game = match spec {
        "kuhn" => LoadedGame::Extensive(build_kuhn_game()),
        "kuhn3" => LoadedGame::Extensive(build_kuhn3_game()),
        "leduc" => LoadedGame::Extensive(build_mini_holdem(3, 2, 2, 2)?),
        "fig1" => LoadedGame::Normal(build_figure1_matrix()),
        "fig2" => LoadedGame::Extensive(build_figure2_game()),
        "fig3" => LoadedGame::Normal(build_figure3_matrix()),
        other => {
            if let Some(rest) = other.strip_prefix("miniholdem:") {
                let n = numbers(rest, 4, other)?;
                LoadedGame::Extensive(build_mini_holdem(n[0], n[1], n[2], n[3])?)
            } else if let Some(path) = other.strip_prefix("file:") {
                let path = Path::new(path);
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                LoadedGame::Extensive(import_game(&text)?)
            } else {
                return Err(usage(format!("unknown game {other:?}; expected {GAME_HELP}")));
            }
        }
    };
    match tilt {
        None => Ok(game),
        Some(t) => {
            let spec = parse_tilt(t)?;
            Ok(LoadedGame::Extensive(apply_tilt(&game.extensive("a tilt")?, &spec)?))
        }
    }
}

/// `orange:7` or `green:14`.
pub fn parse_tilt(text: &str) -> CliResult<TiltSpec> {
    let (kind, w) = text.split_once(':').ok_or_else(|| usage(format!("tilt {text:?} must look like orange:7")))?;
    let kind: TiltKind = kind.parse()?;
    let w: f64 = w.parse().map_err(|_| usage(format!("tilt percentage {w:?} is not a number")))?;
    Ok(TiltSpec::new(kind, w)?)
}

/// Uniform when no path is given; otherwise a profile or checkpoint file.
pub fn load_profile(game: &ExtensiveFormGame, path: Option<&str>) -> CliResult<StrategyProfile> {
    match path {
        None => Ok(StrategyProfile::uniform(game)),
        Some(p) => {
            let path = Path::new(p);
            if !path.exists() {
                return Err(CliError::io(path, "no such file"));
            }
            Ok(regret_core::tournament::load_strategy(game, path)?)
        }
    }
}
