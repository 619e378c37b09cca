mod analyze;
mod solve;
mod tournament;

pub use analyze::{best_response, cce_check, dominance, export, BestResponseArgs, CceArgs, DominanceArgs, ExportArgs};
pub use solve::{solve, SolveArgs};
pub use tournament::{tournament, TournamentArgs};

use regret_core::game::ExtensiveFormGame;

use crate::error::{usage, CliResult};

/// Resolve `KEY:ACTION`, splitting at the last colon since keys contain colons.
pub(crate) fn parse_action(game: &ExtensiveFormGame, text: &str) -> CliResult<(usize, usize)> {
    let (key, label) = text
        .rsplit_once(':')
        .ok_or_else(|| usage(format!("action {text:?} must look like INFOSET_KEY:ACTION")))?;
    let set = game.infoset_by_key(key).ok_or_else(|| usage(format!("no information set with key {key:?}")))?;
    let action = game
        .infoset(set)
        .actions
        .iter()
        .position(|a| a == label)
        .ok_or_else(|| usage(format!("information set {key:?} has no action {label:?}")))?;
    Ok((set, action))
}

/// One-based player number from the command line.
pub(crate) fn parse_player(game_players: usize, text: &str) -> CliResult<usize> {
    match text.parse::<usize>() {
        Ok(p) if (1..=game_players).contains(&p) => Ok(p - 1),
        _ => Err(usage(format!("player {text:?} must be between 1 and {game_players}"))),
    }
}
