use super::{ExtensiveFormGame, GameTree, NormalFormGame, Outcome};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Row player chooses A, B or C; column player chooses a or b and always gets 0.
pub fn build_figure1_matrix() -> NormalFormGame {
    let row = vec![1.0, 0.0, 0.0, 2.0, -1.0, 1.0];
    NormalFormGame::new(
        "fig1",
        vec![labels(&["A", "B", "C"]), labels(&["a", "b"])],
        vec![row, vec![0.0; 6]],
    )
    .expect("figure 1 is well formed")
}

/// Zero-sum game: player 1 picks a or b, player 2 picks c or d without seeing
/// it, then player 1 picks e or f knowing its own first move.
///
/// Playing b then e earns exactly 1 less than a then e against either reply,
/// and a then f earns exactly 1 less than b then f, yet no single action is
/// dominated.
pub fn build_figure2_game() -> ExtensiveFormGame {
    let payoff = |first: char, reply: char, last: char| -> f64 {
        match (first, reply, last) {
            ('a', 'c', 'e') => 3.0,
            ('a', 'd', 'e') => 0.0,
            ('b', 'c', 'e') => 2.0,
            ('b', 'd', 'e') => -1.0,
            ('a', 'c', 'f') => 0.0,
            ('a', 'd', 'f') => 2.0,
            ('b', 'c', 'f') => 1.0,
            _ => 3.0,
        }
    };
    let branch = |first: char| GameTree::Decision {
        player: 1,
        infoset: "2::".into(),
        actions: ['c', 'd']
            .into_iter()
            .map(|reply| {
                let last = GameTree::Decision {
                    player: 0,
                    infoset: format!("1::{first}"),
                    actions: ['e', 'f']
                        .into_iter()
                        .map(|l| {
                            let u = payoff(first, reply, l);
                            (l.to_string(), GameTree::Terminal { utilities: vec![u, -u], outcome: Outcome::Unspecified })
                        })
                        .collect(),
                };
                (reply.to_string(), last)
            })
            .collect(),
    };
    let root = GameTree::Decision {
        player: 0,
        infoset: "1::".into(),
        actions: vec![("a".into(), branch('a')), ("b".into(), branch('b'))],
    };
    ExtensiveFormGame::from_tree("fig2", 2, root).expect("figure 2 tree is well formed")
}

/// Row actions A, B, C against column actions a, b. Alternating (A,a), (B,b)
/// leaves neither player with positive regret, while the even mix of A and B
/// is strictly dominated by C.
pub fn build_figure3_matrix() -> NormalFormGame {
    NormalFormGame::new(
        "fig3",
        vec![labels(&["A", "B", "C"]), labels(&["a", "b"])],
        vec![
            vec![2.0, 0.0, 0.0, 2.0, 1.5, 1.5],
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        ],
    )
    .expect("figure 3 is well formed")
}
