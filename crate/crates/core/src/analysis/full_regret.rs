use super::{counterfactual_value, Reach};
use crate::error::{invalid_input, Error, Result};
use crate::game::{ExtensiveFormGame, InfosetId, StrategyProfile};
use crate::regret::SolverState;

/// π_i^σ(I, I'): the owner's probability of playing from `from` to `to`.
/// Zero when `to` is not in D(`from`).
pub fn own_reach_between(game: &ExtensiveFormGame, profile: &StrategyProfile, from: InfosetId, to: InfosetId) -> f64 {
    let player = game.infoset(from).player;
    if game.infoset(to).player != player {
        return 0.0;
    }
    let depth = game.infoset(from).sequence_depth;
    let seq = game.own_sequence(game.infoset(to).nodes[0], player);
    if from == to {
        return 1.0;
    }
    match seq.get(depth) {
        Some(&(i, _)) if i == from => seq[depth..].iter().map(|&(j, a)| profile.prob(j, a)).product(),
        _ => 0.0,
    }
}

/// Σ_{I'∈D(I)} π_i^σ(I,I')·Σ_a σ_i(I',a)·R^T(I',a), from the stored regrets.
pub fn full_counterfactual_regret(
    game: &ExtensiveFormGame,
    state: &SolverState,
    infoset: InfosetId,
    sigma: &StrategyProfile,
) -> Result<f64> {
    if state.is_sampled() {
        return Err(Error::InvalidState("sampled regrets are estimates; the identity needs exact regrets".into()));
    }
    sigma.validate(game)?;
    if infoset >= game.infosets().len() {
        return Err(invalid_input(format!("unknown infoset {infoset}")));
    }
    Ok(game
        .descendants(infoset)
        .into_iter()
        .map(|j| {
            let inner: f64 = sigma.get(j).iter().zip(state.regrets(j)).map(|(p, r)| p * r).sum();
            own_reach_between(game, sigma, infoset, j) * inner
        })
        .sum())
}

/// v_i(I, (σ_i, σ^t_{-i})) − v_i(I, σ^t).
pub fn full_regret_increment(
    game: &ExtensiveFormGame,
    current: &StrategyProfile,
    infoset: InfosetId,
    sigma: &StrategyProfile,
) -> Result<f64> {
    let player = game.infoset(infoset).player;
    let deviated = current.with_player_from(game, player, sigma);
    Ok(counterfactual_value(game, &deviated, infoset, player)? - counterfactual_value(game, current, infoset, player)?)
}

/// Online accumulation of Σ_t (v_i(I,(σ_i,σ^t_{-i})) − v_i(I,σ^t)) for
/// registered (I, σ_i) pairs.
#[derive(Clone, Debug, Default)]
pub struct FullRegretTracker {
    pairs: Vec<(InfosetId, StrategyProfile)>,
    sums: Vec<f64>,
}

impl FullRegretTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn track(&mut self, game: &ExtensiveFormGame, infoset: InfosetId, sigma: StrategyProfile) -> Result<usize> {
        sigma.validate(game)?;
        if infoset >= game.infosets().len() {
            return Err(invalid_input(format!("unknown infoset {infoset}")));
        }
        self.pairs.push((infoset, sigma));
        self.sums.push(0.0);
        Ok(self.pairs.len() - 1)
    }

    pub fn observe(&mut self, game: &ExtensiveFormGame, current: &StrategyProfile) {
        let base_reach = Reach::compute(game, current);
        let base_values = super::subtree_values(game, current);
        for ((infoset, sigma), sum) in self.pairs.iter().zip(self.sums.iter_mut()) {
            let player = game.infoset(*infoset).player;
            let deviated = current.with_player_from(game, player, sigma);
            let values = super::subtree_values(game, &deviated);
            // opponents' reach is the same under both profiles
            for &h in &game.infoset(*infoset).nodes {
                let w = base_reach.others(h, player);
                *sum += w * (values[h][player] - base_values[h][player]);
            }
        }
    }

    pub fn pairs(&self) -> &[(InfosetId, StrategyProfile)] {
        &self.pairs
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }
}
