//! Expected utilities, counterfactual values, best responses, Nash gaps and
//! full counterfactual regret.

mod best_response;
mod gap;
mod full_regret;

pub use best_response::{best_response, best_response_to_weights, BestResponse};
pub use gap::{nash_gap, NashGapReport, PlayerGap, RegretLedger};
pub use full_regret::{full_counterfactual_regret, full_regret_increment, own_reach_between, FullRegretTracker};

use crate::error::{invalid_input, Result};
use crate::game::{ExtensiveFormGame, InfosetId, NodeId, NodeKind, StrategyProfile};

/// Reach probabilities of every node, split by contributor.
#[derive(Clone, Debug)]
pub struct Reach {
    pub chance: Vec<f64>,
    /// `players[p][h]`: product of player p's action probabilities on the path to h.
    pub players: Vec<Vec<f64>>,
}

impl Reach {
    pub fn compute(game: &ExtensiveFormGame, profile: &StrategyProfile) -> Self {
        let n = game.nodes().len();
        let mut chance = vec![1.0; n];
        let mut players = vec![vec![1.0; n]; game.num_players()];
        for (h, node) in game.nodes().iter().enumerate() {
            for (a, &c) in node.children.iter().enumerate() {
                chance[c] = chance[h];
                for reach in players.iter_mut() {
                    reach[c] = reach[h];
                }
                match &node.kind {
                    NodeKind::Chance { probs } => chance[c] *= probs[a],
                    NodeKind::Decision { player, infoset } => players[*player][c] *= profile.prob(*infoset, a),
                    NodeKind::Terminal { .. } => {}
                }
            }
        }
        Reach { chance, players }
    }

    /// π^σ(h).
    pub fn total(&self, h: NodeId) -> f64 {
        self.players.iter().fold(self.chance[h], |acc, r| acc * r[h])
    }

    /// π_{-i}^σ(h), chance included.
    pub fn others(&self, h: NodeId, player: usize) -> f64 {
        self.players
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != player)
            .fold(self.chance[h], |acc, (_, r)| acc * r[h])
    }

    pub fn own(&self, h: NodeId, player: usize) -> f64 {
        self.players[player][h]
    }
}

/// Expected utility vector of the subtree below every node: `out[h][p]`.
pub fn subtree_values(game: &ExtensiveFormGame, profile: &StrategyProfile) -> Vec<Vec<f64>> {
    let n = game.num_players();
    let mut out = vec![vec![0.0; n]; game.nodes().len()];
    for h in (0..game.nodes().len()).rev() {
        let node = game.node(h);
        let value = match &node.kind {
            NodeKind::Terminal { utilities, .. } => utilities.clone(),
            NodeKind::Chance { probs } => weighted_children(&out, &node.children, probs, n),
            NodeKind::Decision { infoset, .. } => weighted_children(&out, &node.children, profile.get(*infoset), n),
        };
        out[h] = value;
    }
    out
}

fn weighted_children(values: &[Vec<f64>], children: &[NodeId], weights: &[f64], n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    for (&c, &w) in children.iter().zip(weights) {
        if w != 0.0 {
            for (a, v) in acc.iter_mut().zip(&values[c]) {
                *a += w * v;
            }
        }
    }
    acc
}

/// u(σ) for every player.
pub fn expected_utility(game: &ExtensiveFormGame, profile: &StrategyProfile) -> Vec<f64> {
    let reach = Reach::compute(game, profile);
    let mut out = vec![0.0; game.num_players()];
    for &z in game.terminals() {
        let p = reach.total(z);
        if p != 0.0 {
            for (o, u) in out.iter_mut().zip(game.node(z).utilities().unwrap_or(&[])) {
                *o += p * u;
            }
        }
    }
    out
}

fn check_owner(game: &ExtensiveFormGame, infoset: InfosetId, player: usize) -> Result<()> {
    if infoset >= game.infosets().len() || game.infoset(infoset).player != player {
        return Err(invalid_input(format!("infoset {infoset} does not belong to player {player}")));
    }
    Ok(())
}

/// v_i(I, σ_{(I→a)}) for every action a at `infoset`.
pub fn counterfactual_action_values(
    game: &ExtensiveFormGame,
    profile: &StrategyProfile,
    infoset: InfosetId,
    player: usize,
) -> Result<Vec<f64>> {
    check_owner(game, infoset, player)?;
    let reach = Reach::compute(game, profile);
    let values = subtree_values(game, profile);
    let set = game.infoset(infoset);
    let mut out = vec![0.0; set.num_actions()];
    for &h in &set.nodes {
        let w = reach.others(h, player);
        for (o, &c) in out.iter_mut().zip(&game.node(h).children) {
            *o += w * values[c][player];
        }
    }
    Ok(out)
}

/// v_i(I, σ).
pub fn counterfactual_value(
    game: &ExtensiveFormGame,
    profile: &StrategyProfile,
    infoset: InfosetId,
    player: usize,
) -> Result<f64> {
    let per_action = counterfactual_action_values(game, profile, infoset, player)?;
    Ok(per_action.iter().zip(profile.get(infoset)).map(|(v, p)| v * p).sum())
}

/// True iff every action `candidate` plays for `player` is also played by `current`.
pub fn support_containment(
    game: &ExtensiveFormGame,
    player: usize,
    candidate: &StrategyProfile,
    current: &StrategyProfile,
) -> bool {
    game.infosets_of(player).iter().all(|&i| {
        candidate
            .get(i)
            .iter()
            .zip(current.get(i))
            .all(|(&c, &s)| c <= 0.0 || s > 0.0)
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::game::{build_kuhn3_game, build_kuhn_game};
    use proptest::prelude::*;

    pub(crate) fn profile_from_seeds(game: &ExtensiveFormGame, seeds: &[f64]) -> StrategyProfile {
        let dists = game
            .infosets()
            .iter()
            .enumerate()
            .map(|(k, set)| {
                let raw: Vec<f64> = (0..set.num_actions()).map(|a| seeds[(k * 3 + a) % seeds.len()]).collect();
                let total: f64 = raw.iter().sum();
                raw.iter().map(|x| x / total).collect()
            })
            .collect();
        StrategyProfile::from_dists(game, dists).unwrap()
    }

    /// Σ_{z∈Z_I} u_i(z)·π_{-i}(z[I])·π(z[I], z), walking each terminal's path.
    fn direct_cf_value(game: &ExtensiveFormGame, profile: &StrategyProfile, infoset: InfosetId, player: usize) -> f64 {
        let path_prob = |from: NodeId, to: NodeId, only_others: bool| {
            let mut p = 1.0;
            let mut cur = to;
            while cur != from {
                let parent = game.node(cur).parent.unwrap();
                let a = game.node(cur).parent_action.unwrap();
                match &game.node(parent).kind {
                    NodeKind::Chance { probs } => p *= probs[a],
                    NodeKind::Decision { player: q, infoset } if !(only_others && *q == player) => {
                        p *= profile.prob(*infoset, a)
                    }
                    _ => {}
                }
                cur = parent;
            }
            p
        };
        let mut total = 0.0;
        for &h in &game.infoset(infoset).nodes {
            let before = path_prob(0, h, true);
            for z in game.terminals_below(h) {
                total += game.node(z).utilities().unwrap()[player] * before * path_prob(h, z, false);
            }
        }
        total
    }

    #[test]
    fn kuhn_uniform_values() {
        let game = build_kuhn_game();
        let uniform = StrategyProfile::uniform(&game);
        let u = expected_utility(&game, &uniform);
        let nf = crate::game::to_normal_form(&game).unwrap();
        let mixed = vec![vec![1.0 / 64.0; 64]; 2];
        let via_nf = nf.expected_utility(&mixed).unwrap();
        assert!((u[0] - via_nf[0]).abs() < 1e-12);
        assert!((u[0] + u[1]).abs() < 1e-12);
        let king_facing_bet = game.infoset_by_key("2:K:b").unwrap();
        let call = uniform.with_action(king_facing_bet, 1);
        let tree = counterfactual_value(&game, &call, king_facing_bet, 1).unwrap();
        let direct = direct_cf_value(&game, &call, king_facing_bet, 1);
        assert!((tree - direct).abs() < 1e-12);
    }

    #[test]
    fn unreachable_infoset_has_zero_value() {
        let game = build_kuhn_game();
        // player 1 never bets, so player 2 never faces a bet
        let mut profile = StrategyProfile::uniform(&game);
        for card in ["J", "Q", "K"] {
            profile = profile.with_action(game.infoset_by_key(&format!("1:{card}:")).unwrap(), 0);
        }
        let facing = game.infoset_by_key("2:Q:b").unwrap();
        assert_eq!(counterfactual_value(&game, &profile, facing, 1).unwrap(), 0.0);
    }

    #[test]
    fn foreign_infoset_is_rejected() {
        let game = build_kuhn_game();
        let profile = StrategyProfile::uniform(&game);
        assert!(counterfactual_value(&game, &profile, 0, 1).is_err());
    }

    #[test]
    fn support_containment_cases() {
        let game = build_kuhn_game();
        let uniform = StrategyProfile::uniform(&game);
        let pure = uniform.with_action(0, 1);
        assert!(support_containment(&game, 0, &uniform, &uniform));
        assert!(support_containment(&game, 0, &pure, &uniform));
        assert!(!support_containment(&game, 0, &uniform, &pure));
    }

    #[test]
    fn point_mass_reaches_single_terminal_per_deal() {
        let game = build_kuhn_game();
        let mut profile = StrategyProfile::uniform(&game);
        for i in 0..game.infosets().len() {
            profile = profile.with_action(i, 0);
        }
        // everyone checks: showdown for 1 chip
        assert_eq!(expected_utility(&game, &profile), vec![0.0, 0.0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn cf_value_is_linear_in_own_actions(seeds in prop::collection::vec(0.01f64..1.0, 40)) {
            let game = build_kuhn_game();
            let profile = profile_from_seeds(&game, &seeds);
            for (i, set) in game.infosets().iter().enumerate() {
                let whole = counterfactual_value(&game, &profile, i, set.player).unwrap();
                let split: f64 = (0..set.num_actions())
                    .map(|a| profile.prob(i, a) * counterfactual_value(&game, &profile.with_action(i, a), i, set.player).unwrap())
                    .sum();
                prop_assert!((whole - split).abs() < 1e-9);
                prop_assert!((whole - direct_cf_value(&game, &profile, i, set.player)).abs() < 1e-12);
            }
        }

        #[test]
        fn zero_sum_conservation(seeds in prop::collection::vec(0.01f64..1.0, 60)) {
            for game in [build_kuhn_game(), build_kuhn3_game()] {
                let u = expected_utility(&game, &profile_from_seeds(&game, &seeds));
                prop_assert!(u.iter().sum::<f64>().abs() < 1e-9);
            }
        }
    }
}
