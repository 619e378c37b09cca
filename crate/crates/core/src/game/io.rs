//! JSON interchange format for extensive-form games.
//!
//! ```text
//! {
//!   "format": "regret-game/1",
//!   "name": "kuhn",
//!   "num_players": 2,
//!   "infosets": [{"player": 0, "key": "1:J:", "actions": ["k", "b"]}, ...],
//!   "nodes": [
//!     {"parent": null, "kind": "chance", "probs": [...], "labels": [...]},
//!     {"parent": 0, "action": 0, "kind": "decision", "player": 0, "infoset": 0},
//!     {"parent": 5, "action": 1, "kind": "terminal", "utilities": [1.0, -1.0], "outcome": "fold"},
//!     ...
//!   ]
//! }
//! ```
//!
//! Nodes are listed in preorder; `action` is the index of the edge taken at
//! the parent. Players are zero-based. Floats are written in shortest
//! round-trip form, so export followed by import is bit-exact.

use serde::{Deserialize, Serialize};

use super::{ExtensiveFormGame, Node, NodeKind, Outcome};
use crate::error::{Error, Result};

pub const GAME_FORMAT: &str = "regret-game/1";

#[derive(Serialize, Deserialize)]
struct GameFile {
    format: String,
    name: String,
    num_players: usize,
    infosets: Vec<InfosetEntry>,
    nodes: Vec<NodeEntry>,
}

#[derive(Serialize, Deserialize)]
struct InfosetEntry {
    player: usize,
    key: String,
    actions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeEntry {
    parent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<usize>,
    #[serde(flatten)]
    body: NodeBody,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NodeBody {
    Chance { probs: Vec<f64>, labels: Vec<String> },
    Decision { player: usize, infoset: usize },
    Terminal { utilities: Vec<f64>, outcome: Outcome },
}

pub fn export_game(game: &ExtensiveFormGame) -> Result<String> {
    let file = GameFile {
        format: GAME_FORMAT.to_string(),
        name: game.name().to_string(),
        num_players: game.num_players(),
        infosets: game
            .infosets()
            .iter()
            .map(|s| InfosetEntry { player: s.player, key: s.key.clone(), actions: s.actions.clone() })
            .collect(),
        nodes: game
            .nodes()
            .iter()
            .map(|n| NodeEntry {
                parent: n.parent,
                action: n.parent_action,
                body: match &n.kind {
                    NodeKind::Chance { probs } => NodeBody::Chance { probs: probs.clone(), labels: n.chance_labels.clone() },
                    NodeKind::Decision { player, infoset } => NodeBody::Decision { player: *player, infoset: *infoset },
                    NodeKind::Terminal { utilities, outcome } => {
                        NodeBody::Terminal { utilities: utilities.clone(), outcome: *outcome }
                    }
                },
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn import_game(text: &str) -> Result<ExtensiveFormGame> {
    let file: GameFile = serde_json::from_str(text)?;
    if file.format != GAME_FORMAT {
        return Err(Error::Format(format!("unsupported game format {:?}", file.format)));
    }
    let count = file.nodes.len();
    let mut nodes: Vec<Node> = Vec::with_capacity(count);
    let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for (id, entry) in file.nodes.into_iter().enumerate() {
        let (kind, chance_labels) = match entry.body {
            NodeBody::Chance { probs, labels } => {
                if labels.len() != probs.len() {
                    return Err(Error::Format(format!("node {id}: labels and probabilities differ in length")));
                }
                (NodeKind::Chance { probs }, labels)
            }
            NodeBody::Decision { player, infoset } => (NodeKind::Decision { player, infoset }, Vec::new()),
            NodeBody::Terminal { utilities, outcome } => (NodeKind::Terminal { utilities, outcome }, Vec::new()),
        };
        let depth = match entry.parent {
            None => 0,
            Some(p) if p < id => {
                let a = entry.action.ok_or_else(|| Error::Format(format!("node {id} lacks an action index")))?;
                slots[p].push((a, id));
                nodes[p].depth + 1
            }
            Some(p) => return Err(Error::Format(format!("node {id} lists parent {p} out of preorder"))),
        };
        nodes.push(Node { parent: entry.parent, parent_action: entry.action, kind, children: Vec::new(), chance_labels, depth });
    }
    for (id, mut kids) in slots.into_iter().enumerate() {
        kids.sort_unstable();
        if kids.iter().enumerate().any(|(k, &(a, _))| a != k) {
            return Err(Error::Format(format!("node {id} has gaps or repeats in its action indices")));
        }
        nodes[id].children = kids.into_iter().map(|(_, c)| c).collect();
    }
    let infosets = file.infosets.into_iter().map(|s| (s.player, s.key, s.actions)).collect();
    ExtensiveFormGame::from_parts(file.name, file.num_players, nodes, infosets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_tilt, build_figure2_game, build_kuhn3_game, build_kuhn_game, TiltKind, TiltSpec};

    fn assert_round_trip(game: &ExtensiveFormGame) {
        let text = export_game(game).unwrap();
        let back = import_game(&text).unwrap();
        assert_eq!(back.nodes(), game.nodes());
        assert_eq!(back.infosets(), game.infosets());
        assert_eq!(back.name(), game.name());
        assert_eq!(export_game(&back).unwrap(), text);
    }

    #[test]
    fn round_trips_are_exact() {
        assert_round_trip(&build_kuhn_game());
        assert_round_trip(&build_kuhn3_game());
        assert_round_trip(&build_figure2_game());
        let awkward = apply_tilt(&build_kuhn_game(), &TiltSpec::new(TiltKind::Green, 7.3).unwrap()).unwrap();
        assert_round_trip(&awkward);
    }

    #[test]
    fn rejects_foreign_format() {
        let text = export_game(&build_kuhn_game()).unwrap().replace(GAME_FORMAT, "other/9");
        assert!(matches!(import_game(&text), Err(Error::Format(_))));
    }

    #[test]
    fn import_revalidates() {
        let text = export_game(&build_kuhn_game()).unwrap();
        let broken = text.replacen("0.16666666666666666", "0.2", 1);
        assert!(matches!(import_game(&broken), Err(Error::InvalidGame(_))));
    }
}
