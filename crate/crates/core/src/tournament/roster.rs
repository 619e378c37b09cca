use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dominance::{iterated_action_removal, DominanceMode};
use crate::error::{invalid_input, Error, Result};
use crate::game::{build_kuhn_game, ExtensiveFormGame, KeyedProfile, StrategyProfile};
use crate::regret::{Checkpoint, ProfileMode, SolverState, CHECKPOINT_FORMAT};

/// A fixed strategy for every seat. In a match, seat p follows the
/// distributions at player p's information sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Agent {
    pub name: String,
    pub profile: StrategyProfile,
}

impl Agent {
    pub fn new(game: &ExtensiveFormGame, name: impl Into<String>, profile: StrategyProfile) -> Result<Self> {
        profile.validate(game)?;
        Ok(Agent { name: name.into(), profile })
    }
}

fn set(game: &ExtensiveFormGame, profile: &mut StrategyProfile, key: &str, dist: [f64; 2]) {
    let id = game.infoset_by_key(key).unwrap_or_else(|| panic!("kuhn has no infoset {key}"));
    profile.set(id, dist.to_vec());
}

/// Uniform everywhere except the given actions, which get probability zero;
/// the rest of each affected set is renormalized uniformly.
fn uniform_without(game: &ExtensiveFormGame, removed: &[(usize, usize)]) -> StrategyProfile {
    let mut profile = StrategyProfile::uniform(game);
    for set in 0..game.infosets().len() {
        let n = game.infoset(set).num_actions();
        let keep: Vec<usize> = (0..n).filter(|&a| !removed.contains(&(set, a))).collect();
        if keep.len() < n {
            let dist = (0..n).map(|a| if keep.contains(&a) { 1.0 / keep.len() as f64 } else { 0.0 }).collect();
            profile.set(set, dist);
        }
    }
    profile
}

/// Kuhn equilibrium where seat 1 bets the King with probability `gamma`.
///
/// Seat 1 bets the Jack with γ/3, never bets the Queen, and calls with the
/// Queen after check-bet with γ/3 + 1/3. Seat 2 calls a bet with the King
/// always and the Queen 1/3; after a check it bets the King always and the
/// Jack 1/3.
pub fn kuhn_equilibrium(game: &ExtensiveFormGame, gamma: f64) -> Result<StrategyProfile> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameters(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    let third = 1.0 / 3.0;
    let q_call = gamma / 3.0 + third;
    let mut p = StrategyProfile::uniform(game);
    let g = game;
    set(g, &mut p, "1:J:", [1.0 - gamma / 3.0, gamma / 3.0]);
    set(g, &mut p, "1:Q:", [1.0, 0.0]);
    set(g, &mut p, "1:K:", [1.0 - gamma, gamma]);
    set(g, &mut p, "1:J:kb", [1.0, 0.0]);
    set(g, &mut p, "1:Q:kb", [1.0 - q_call, q_call]);
    set(g, &mut p, "1:K:kb", [0.0, 1.0]);
    set(g, &mut p, "2:J:b", [1.0, 0.0]);
    set(g, &mut p, "2:Q:b", [1.0 - third, third]);
    set(g, &mut p, "2:K:b", [0.0, 1.0]);
    set(g, &mut p, "2:J:k", [1.0 - third, third]);
    set(g, &mut p, "2:Q:k", [1.0, 0.0]);
    set(g, &mut p, "2:K:k", [0.0, 1.0]);
    p.validate(game)?;
    Ok(p)
}

/// The six-agent Kuhn roster: Uni, ND, NID, NE-0, NE-0.5, NE-1.
///
/// ND drops the actions removed in the first round of weak action removal
/// and NID those of the first two rounds; both are otherwise uniform.
pub fn build_kuhn_roster() -> (ExtensiveFormGame, Vec<Agent>) {
    let game = build_kuhn_game();
    let removal = iterated_action_removal(&game, DominanceMode::Weak).expect("kuhn is small enough");
    let removed_by = |last: usize| -> Vec<(usize, usize)> {
        removal
            .removals
            .iter()
            .filter(|r| r.round <= last)
            .filter_map(|r| Some((r.infoset?, r.action?)))
            .collect()
    };
    let mut agents = vec![
        Agent { name: "Uni".into(), profile: StrategyProfile::uniform(&game) },
        Agent { name: "ND".into(), profile: uniform_without(&game, &removed_by(1)) },
        Agent { name: "NID".into(), profile: uniform_without(&game, &removed_by(2)) },
    ];
    for (name, gamma) in [("NE-0", 0.0), ("NE-0.5", 0.5), ("NE-1", 1.0)] {
        let profile = kuhn_equilibrium(&game, gamma).expect("gamma is in range");
        agents.push(Agent { name: name.into(), profile });
    }
    (game, agents)
}

/// One line of a roster file: a name plus either a strategy file or a
/// built-in strategy (`uniform`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
}

/// Read a strategy from a solver checkpoint (average profile when stored,
/// current profile otherwise) or from a keyed profile file.
pub fn load_strategy(game: &ExtensiveFormGame, path: &Path) -> Result<StrategyProfile> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("format").and_then(|f| f.as_str()) == Some(CHECKPOINT_FORMAT) {
        let cp: Checkpoint = serde_json::from_value(value)?;
        let state = SolverState::from_checkpoint(game, cp)?;
        return match state.mode() {
            ProfileMode::Full => state.average_profile(),
            ProfileMode::CurrentOnly => Ok(state.current_profile()),
        };
    }
    let keyed: KeyedProfile = serde_json::from_value(value)?;
    StrategyProfile::from_keyed(game, &keyed)
}

/// Load a JSON list of [`RosterEntry`]; relative paths resolve against the
/// roster file's directory.
pub fn load_roster(game: &ExtensiveFormGame, path: &Path) -> Result<Vec<Agent>> {
    let entries: Vec<RosterEntry> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    entries
        .into_iter()
        .map(|entry| {
            let profile = match (&entry.path, entry.builtin.as_deref()) {
                (Some(p), None) => load_strategy(game, &base.join(p)).map_err(|e| match e {
                    Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("agent {}: {io}", entry.name))),
                    other => invalid_input(format!("agent {}: {other}", entry.name)),
                })?,
                (None, Some("uniform")) => StrategyProfile::uniform(game),
                _ => return Err(invalid_input(format!("agent {} needs exactly one of path or builtin uniform", entry.name))),
            };
            Agent::new(game, entry.name, profile)
        })
        .collect()
}
