use serde::{Deserialize, Serialize};

use super::{best_response, best_response_to_weights, expected_utility, Reach};
use crate::game::{ExtensiveFormGame, StrategyProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerGap {
    pub player: usize,
    pub br_value: f64,
    pub on_policy_value: f64,
    pub gap: f64,
}

/// How far a profile is from equilibrium, in chips per game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NashGapReport {
    pub players: Vec<PlayerGap>,
    pub max_gap: f64,
    pub mean_gap: f64,
    /// max_z |Σ_i u_i(z)|; zero for zero-sum games.
    pub delta: f64,
}

impl NashGapReport {
    /// 2(ε + δ): the equilibrium distance guaranteed when every player's
    /// average regret is at most ε.
    pub fn regret_bound(&self, epsilon: f64) -> f64 {
        2.0 * (epsilon + self.delta)
    }
}

pub fn nash_gap(game: &ExtensiveFormGame, profile: &StrategyProfile) -> NashGapReport {
    let on_policy = expected_utility(game, profile);
    let players: Vec<PlayerGap> = (0..game.num_players())
        .map(|p| {
            let br = best_response(game, profile, p);
            PlayerGap { player: p, br_value: br.value, on_policy_value: on_policy[p], gap: br.value - on_policy[p] }
        })
        .collect();
    let max_gap = players.iter().map(|g| g.gap).fold(f64::NEG_INFINITY, f64::max);
    let mean_gap = players.iter().map(|g| g.gap).sum::<f64>() / players.len() as f64;
    NashGapReport { players, max_gap, mean_gap, delta: game.max_utility_sum() }
}

/// Exact external regret of a sequence of played profiles.
///
/// Each observed profile adds its opponent reach to every terminal and its
/// expected utility to the realized total; the best fixed strategy in
/// hindsight is then a best response to the accumulated weights.
#[derive(Clone, Debug)]
pub struct RegretLedger {
    weights: Vec<Vec<f64>>,
    realized: Vec<f64>,
    iterations: u64,
}

impl RegretLedger {
    pub fn new(game: &ExtensiveFormGame) -> Self {
        RegretLedger {
            weights: vec![vec![0.0; game.nodes().len()]; game.num_players()],
            realized: vec![0.0; game.num_players()],
            iterations: 0,
        }
    }

    pub fn observe(&mut self, game: &ExtensiveFormGame, profile: &StrategyProfile) {
        let reach = Reach::compute(game, profile);
        for &z in game.terminals() {
            let u = game.node(z).utilities().unwrap_or(&[]);
            let total = reach.total(z);
            for p in 0..game.num_players() {
                self.weights[p][z] += reach.others(z, p);
                self.realized[p] += total * u[p];
            }
        }
        self.iterations += 1;
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// R_i^T = max_{σ'} Σ_t u_i(σ', σ^t_{-i}) − Σ_t u_i(σ^t).
    pub fn regret(&self, game: &ExtensiveFormGame, player: usize) -> f64 {
        best_response_to_weights(game, player, &self.weights[player]).1 - self.realized[player]
    }

    /// max_i R_i^T / T.
    pub fn max_average_regret(&self, game: &ExtensiveFormGame) -> f64 {
        if self.iterations == 0 {
            return 0.0;
        }
        (0..game.num_players())
            .map(|p| self.regret(game, p))
            .fold(f64::NEG_INFINITY, f64::max)
            / self.iterations as f64
    }
}
