use super::Reach;
use crate::game::{ExtensiveFormGame, InfosetId, NodeId, NodeKind, StrategyProfile};

/// Margin a later action must exceed to displace an earlier one.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct BestResponse {
    pub player: usize,
    /// The input profile with `player`'s information sets replaced by the best response.
    pub profile: StrategyProfile,
    /// Chosen action per information set of `player`, in `infosets_of` order.
    pub actions: Vec<usize>,
    pub value: f64,
}

struct Solver<'a> {
    game: &'a ExtensiveFormGame,
    player: usize,
    weights: &'a [f64],
    node_memo: Vec<Option<f64>>,
    choice: Vec<Option<usize>>,
}

impl Solver<'_> {
    fn node_value(&mut self, h: NodeId) -> f64 {
        if let Some(v) = self.node_memo[h] {
            return v;
        }
        let node = self.game.node(h);
        let v = match &node.kind {
            NodeKind::Terminal { utilities, .. } => self.weights[h] * utilities[self.player],
            NodeKind::Decision { player, infoset } if *player == self.player => {
                let a = self.decide(*infoset);
                self.node_value(node.children[a])
            }
            _ => node.children.clone().into_iter().map(|c| self.node_value(c)).sum(),
        };
        self.node_memo[h] = Some(v);
        v
    }

    fn decide(&mut self, infoset: InfosetId) -> usize {
        if let Some(a) = self.choice[infoset] {
            return a;
        }
        let set = self.game.infoset(infoset);
        let nodes = set.nodes.clone();
        let mut totals = vec![0.0; set.num_actions()];
        for h in nodes {
            for (a, c) in self.game.node(h).children.clone().into_iter().enumerate() {
                totals[a] += self.node_value(c);
            }
        }
        let mut best = 0;
        for (a, &t) in totals.iter().enumerate().skip(1) {
            if t > totals[best] + TIE_TOLERANCE * (1.0 + totals[best].abs()) {
                best = a;
            }
        }
        self.choice[infoset] = Some(best);
        best
    }
}

/// Best response of `player` when terminal z carries weight `weights[z]`.
///
/// With weights π_{-i}(z) this is the ordinary best response; with weights
/// summed over iterations it is the best fixed strategy in hindsight.
/// Returns the chosen action per information set of `player` and the value.
pub fn best_response_to_weights(game: &ExtensiveFormGame, player: usize, weights: &[f64]) -> (Vec<usize>, f64) {
    let mut solver = Solver {
        game,
        player,
        weights,
        node_memo: vec![None; game.nodes().len()],
        choice: vec![None; game.infosets().len()],
    };
    let value = solver.node_value(0);
    let actions = game.infosets_of(player).iter().map(|&i| solver.decide(i)).collect();
    (actions, value)
}

/// Exact best response of `player` against the rest of `profile`.
pub fn best_response(game: &ExtensiveFormGame, profile: &StrategyProfile, player: usize) -> BestResponse {
    let reach = Reach::compute(game, profile);
    let mut weights = vec![0.0; game.nodes().len()];
    for &z in game.terminals() {
        weights[z] = reach.others(z, player);
    }
    let (actions, value) = best_response_to_weights(game, player, &weights);
    let mut out = profile.clone();
    for (&i, &a) in game.infosets_of(player).iter().zip(&actions) {
        out = out.with_action(i, a);
    }
    BestResponse { player, profile: out, actions, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::expected_utility;
    use crate::analysis::tests::profile_from_seeds;
    use crate::game::{build_kuhn3_game, build_kuhn_game, to_normal_form, GameTree, Outcome};
    use proptest::prelude::*;

    #[test]
    fn dominant_action_is_chosen() {
        let leaf = |u: f64| GameTree::Terminal { utilities: vec![u, -u], outcome: Outcome::Unspecified };
        let tree = GameTree::Decision {
            player: 0,
            infoset: "1::".into(),
            actions: vec![("x".into(), leaf(1.0)), ("y".into(), leaf(3.0)), ("z".into(), leaf(2.0))],
        };
        let game = ExtensiveFormGame::from_tree("t", 2, tree).unwrap();
        let br = best_response(&game, &StrategyProfile::uniform(&game), 0);
        assert_eq!(br.profile.get(0), &[0.0, 1.0, 0.0]);
        assert_eq!(br.value, 3.0);
    }

    #[test]
    fn matches_normal_form_enumeration() {
        let game = build_kuhn_game();
        let nf = to_normal_form(&game).unwrap();
        let seeds = [0.3, 0.9, 0.2, 0.55, 0.71, 0.12, 0.4];
        let profile = profile_from_seeds(&game, &seeds);
        for player in 0..2 {
            let mut mixed: Vec<Vec<f64>> = (0..2)
                .map(|p| crate::game::realize_mixed_from_behavioral(&game, p, &profile).unwrap())
                .collect();
            mixed[player] = vec![0.0; 64];
            let best = nf.action_values(player, &mixed).unwrap().into_iter().fold(f64::MIN, f64::max);
            let br = best_response(&game, &profile, player);
            assert!((br.value - best).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn br_value_is_realized_and_dominates(seeds in prop::collection::vec(0.01f64..1.0, 60)) {
            for game in [build_kuhn_game(), build_kuhn3_game()] {
                let profile = profile_from_seeds(&game, &seeds);
                let on_policy = expected_utility(&game, &profile);
                for player in 0..game.num_players() {
                    let br = best_response(&game, &profile, player);
                    let realized = expected_utility(&game, &br.profile)[player];
                    prop_assert!((br.value - realized).abs() < 1e-9);
                    prop_assert!(br.value >= on_policy[player] - 1e-12);
                    let again = best_response(&game, &br.profile, player);
                    prop_assert!((again.value - br.value).abs() < 1e-9);
                }
            }
        }
    }
}
