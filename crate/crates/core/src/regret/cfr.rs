use super::counters::DiagnosticCounters;
use super::matching::regret_matching_into;
use super::state::SolverState;
use crate::analysis::Reach;
use crate::error::{Error, Result};
use crate::game::{ExtensiveFormGame, NodeKind, StrategyProfile};

pub(crate) fn check_dims(game: &ExtensiveFormGame, state: &SolverState) -> Result<()> {
    let offsets = state.offsets();
    let fits = offsets.len() == game.infosets().len() + 1
        && game
            .infosets()
            .iter()
            .enumerate()
            .all(|(i, s)| offsets[i + 1] - offsets[i] == s.num_actions());
    if fits {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("solver state is not dimensioned for {}", game.name())))
    }
}

/// Regret matching at every information set; returns the profile and the
/// number of sets that had no positive regret.
pub(crate) fn current_policy(state: &SolverState, infosets: usize) -> (Vec<Vec<f64>>, u64) {
    let mut zero = 0;
    let dists = (0..infosets)
        .map(|i| {
            let r = state.regrets(i);
            let mut out = vec![0.0; r.len()];
            if regret_matching_into(r, &mut out) {
                zero += 1;
            }
            out
        })
        .collect();
    (dists, zero)
}

/// One iteration of vanilla CFR with simultaneous updates.
pub fn cfr_iterate(game: &ExtensiveFormGame, state: &mut SolverState, counters: &mut DiagnosticCounters) -> Result<()> {
    cfr_iterate_with(game, state, counters, |_| {})
}

/// As [`cfr_iterate`], handing the profile played this iteration to `observe`
/// before any table is updated.
pub fn cfr_iterate_with(
    game: &ExtensiveFormGame,
    state: &mut SolverState,
    counters: &mut DiagnosticCounters,
    mut observe: impl FnMut(&StrategyProfile),
) -> Result<()> {
    check_dims(game, state)?;
    if state.is_sampled() {
        return Err(Error::InvalidState("vanilla CFR needs an unsampled state".into()));
    }
    let (dists, zero) = current_policy(state, game.infosets().len());
    let sigma = StrategyProfile::from_dists_unchecked(dists);
    observe(&sigma);
    if counters.needs_profile() {
        counters.record_profile(game, &sigma);
    }
    counters.record_iteration(zero);

    let n = game.num_players();
    let reach = Reach::compute(game, &sigma);
    let mut values = vec![0.0; game.nodes().len() * n];
    for h in (0..game.nodes().len()).rev() {
        let node = game.node(h);
        let weights: &[f64] = match &node.kind {
            NodeKind::Terminal { utilities, .. } => {
                values[h * n..(h + 1) * n].copy_from_slice(utilities);
                continue;
            }
            NodeKind::Chance { probs } => probs,
            NodeKind::Decision { infoset, .. } => sigma.get(*infoset),
        };
        for (&c, &w) in node.children.iter().zip(weights) {
            for p in 0..n {
                values[h * n + p] += w * values[c * n + p];
            }
        }
    }

    let offsets = state.offsets().to_vec();
    let (regrets, mut cumulative) = state.tables_mut();
    let mut action_values = Vec::new();
    for (i, set) in game.infosets().iter().enumerate() {
        let player = set.player;
        let policy = sigma.get(i);
        action_values.clear();
        action_values.resize(set.num_actions(), 0.0);
        for &h in &set.nodes {
            let w = reach.others(h, player);
            if w == 0.0 {
                continue;
            }
            for (v, &c) in action_values.iter_mut().zip(&game.node(h).children) {
                *v += w * values[c * n + player];
            }
        }
        let v: f64 = action_values.iter().zip(policy).map(|(a, p)| a * p).sum();
        let base = offsets[i];
        for (a, va) in action_values.iter().enumerate() {
            regrets[base + a] += va - v;
        }
        if let Some(cum) = cumulative.as_deref_mut() {
            let own = reach.own(set.nodes[0], player);
            for (a, p) in policy.iter().enumerate() {
                cum[base + a] += own * p;
            }
        }
    }
    state.advance();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{counterfactual_action_values, counterfactual_value, nash_gap};
    use crate::game::{build_kuhn3_game, build_kuhn_game};
    use crate::regret::ProfileMode;

    #[test]
    fn first_iteration_plays_uniform() {
        let game = build_kuhn_game();
        let mut state = SolverState::new(&game, ProfileMode::Full);
        let mut counters = DiagnosticCounters::new();
        let mut seen = None;
        cfr_iterate_with(&game, &mut state, &mut counters, |s| seen = Some(s.clone())).unwrap();
        assert_eq!(seen.unwrap(), StrategyProfile::uniform(&game));
        assert_eq!(state.iteration(), 1);
        assert_eq!(state.average_profile().unwrap(), StrategyProfile::uniform(&game));
        assert_eq!(counters.x_count, 1);
        assert_eq!(counters.xi_count, 12);
    }

    #[test]
    fn increments_are_counterfactual_regrets() {
        let game = build_kuhn3_game();
        let mut state = SolverState::new(&game, ProfileMode::Full);
        let mut counters = DiagnosticCounters::new();
        for _ in 0..3 {
            cfr_iterate(&game, &mut state, &mut counters).unwrap();
        }
        let before = state.clone();
        let sigma = before.current_profile();
        cfr_iterate(&game, &mut state, &mut counters).unwrap();
        for (i, set) in game.infosets().iter().enumerate() {
            let va = counterfactual_action_values(&game, &sigma, i, set.player).unwrap();
            let v = counterfactual_value(&game, &sigma, i, set.player).unwrap();
            for a in 0..set.num_actions() {
                let inc = state.regrets(i)[a] - before.regrets(i)[a];
                assert!((inc - (va[a] - v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn modes_share_regrets() {
        let game = build_kuhn_game();
        let mut full = SolverState::new(&game, ProfileMode::Full);
        let mut lean = SolverState::new(&game, ProfileMode::CurrentOnly);
        let mut c1 = DiagnosticCounters::new();
        let mut c2 = DiagnosticCounters::new();
        for _ in 0..200 {
            cfr_iterate(&game, &mut full, &mut c1).unwrap();
            cfr_iterate(&game, &mut lean, &mut c2).unwrap();
        }
        for i in 0..game.infosets().len() {
            assert_eq!(full.regrets(i), lean.regrets(i));
        }
        assert_eq!(c1, c2);
    }

    #[test]
    fn converges_on_kuhn() {
        let game = build_kuhn_game();
        let mut state = SolverState::new(&game, ProfileMode::Full);
        let mut counters = DiagnosticCounters::new();
        for _ in 0..2000 {
            cfr_iterate(&game, &mut state, &mut counters).unwrap();
        }
        let gap = nash_gap(&game, &state.average_profile().unwrap());
        assert!(gap.max_gap < 0.01, "gap {}", gap.max_gap);
        let value = gap.players[0].on_policy_value;
        assert!((value + 1.0 / 18.0).abs() < 0.01);
    }

    #[test]
    fn rejects_mismatched_state() {
        let state_game = build_kuhn3_game();
        let mut state = SolverState::new(&state_game, ProfileMode::Full);
        let game = build_kuhn_game();
        assert!(cfr_iterate(&game, &mut state, &mut DiagnosticCounters::new()).is_err());
    }
}
