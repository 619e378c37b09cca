//! Game representations: extensive-form trees, normal-form tensors, the
//! builders for every game the crate ships, tilt transforms and the JSON
//! interchange format.

mod figures;
mod io;
mod normal;
mod poker;
mod profile;
mod tilt;

pub use figures::{build_figure1_matrix, build_figure2_game, build_figure3_matrix};
pub use io::{export_game, import_game, GAME_FORMAT};
pub use normal::{
    pure_strategy_count, realize_mixed_from_behavioral, to_normal_form, to_normal_form_capped,
    NormalFormGame, PureStrategies, DEFAULT_PROFILE_CAP,
};
pub use poker::{build_kuhn3_game, build_kuhn_game, build_mini_holdem, PokerRules};
pub use profile::{KeyedProfile, StrategyProfile, PROFILE_TOLERANCE};
pub use tilt::{apply_tilt, TiltKind, TiltSpec};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_game, Result};

pub type NodeId = usize;
pub type InfosetId = usize;

/// Tolerance on chance distributions summing to one.
pub const CHANCE_TOLERANCE: f64 = 1e-12;

/// How a terminal history was reached, used by the tilt transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Showdown,
    Fold,
    Unspecified,
}

/// Nested description of a game tree, flattened by [`ExtensiveFormGame::from_tree`].
#[derive(Clone, Debug)]
pub enum GameTree {
    Chance {
        outcomes: Vec<(String, f64, GameTree)>,
    },
    Decision {
        player: usize,
        infoset: String,
        actions: Vec<(String, GameTree)>,
    },
    Terminal {
        utilities: Vec<f64>,
        outcome: Outcome,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Chance { probs: Vec<f64> },
    Decision { player: usize, infoset: InfosetId },
    Terminal { utilities: Vec<f64>, outcome: Outcome },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub parent: Option<NodeId>,
    /// Index of the edge taken at the parent to reach this node.
    pub parent_action: Option<usize>,
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    /// Edge labels for chance nodes; decision nodes use their infoset's actions.
    pub chance_labels: Vec<String>,
    pub depth: usize,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }

    pub fn utilities(&self) -> Option<&[f64]> {
        match &self.kind {
            NodeKind::Terminal { utilities, .. } => Some(utilities),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Infoset {
    pub player: usize,
    pub key: String,
    pub actions: Vec<String>,
    pub nodes: Vec<NodeId>,
    /// Number of the owner's own decisions preceding this set.
    pub sequence_depth: usize,
}

impl Infoset {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }
}

/// An immutable finite extensive-form game with perfect recall.
///
/// Nodes are stored in preorder with the root at index 0, so every child has a
/// larger index than its parent. Information sets are numbered in order of
/// first appearance in that traversal.
#[derive(Clone, Debug)]
pub struct ExtensiveFormGame {
    name: String,
    num_players: usize,
    nodes: Vec<Node>,
    infosets: Vec<Infoset>,
    player_infosets: Vec<Vec<InfosetId>>,
    terminals: Vec<NodeId>,
    key_index: HashMap<String, InfosetId>,
}

impl ExtensiveFormGame {
    pub fn from_tree(name: impl Into<String>, num_players: usize, tree: GameTree) -> Result<Self> {
        if num_players == 0 {
            return Err(invalid_game("a game needs at least one player"));
        }
        let mut game = ExtensiveFormGame {
            name: name.into(),
            num_players,
            nodes: Vec::new(),
            infosets: Vec::new(),
            player_infosets: vec![Vec::new(); num_players],
            terminals: Vec::new(),
            key_index: HashMap::new(),
        };
        game.flatten(tree, None, None, 0)?;
        game.finish()?;
        Ok(game)
    }

    /// Assemble a game from already-flattened nodes (used by the importer).
    pub(crate) fn from_parts(
        name: String,
        num_players: usize,
        nodes: Vec<Node>,
        infosets: Vec<(usize, String, Vec<String>)>,
    ) -> Result<Self> {
        let mut game = ExtensiveFormGame {
            name,
            num_players,
            nodes,
            infosets: infosets
                .into_iter()
                .map(|(player, key, actions)| Infoset {
                    player,
                    key,
                    actions,
                    nodes: Vec::new(),
                    sequence_depth: 0,
                })
                .collect(),
            player_infosets: vec![Vec::new(); num_players],
            terminals: Vec::new(),
            key_index: HashMap::new(),
        };
        for (id, node) in game.nodes.iter().enumerate() {
            if let NodeKind::Decision { infoset, .. } = node.kind {
                let set = game
                    .infosets
                    .get_mut(infoset)
                    .ok_or_else(|| invalid_game(format!("node {id} names unknown infoset {infoset}")))?;
                set.nodes.push(id);
            }
        }
        for (id, set) in game.infosets.iter().enumerate() {
            if set.player >= num_players {
                return Err(invalid_game(format!("infoset {} has player {} out of range", set.key, set.player)));
            }
            if game.key_index.insert(set.key.clone(), id).is_some() {
                return Err(invalid_game(format!("duplicate infoset key {}", set.key)));
            }
            if set.nodes.is_empty() {
                return Err(invalid_game(format!("infoset {} has no nodes", set.key)));
            }
            game.player_infosets[set.player].push(id);
        }
        game.finish()?;
        Ok(game)
    }

    fn flatten(
        &mut self,
        tree: GameTree,
        parent: Option<NodeId>,
        parent_action: Option<usize>,
        depth: usize,
    ) -> Result<NodeId> {
        let id = self.nodes.len();
        let placeholder = NodeKind::Chance { probs: Vec::new() };
        self.nodes.push(Node {
            parent,
            parent_action,
            kind: placeholder,
            children: Vec::new(),
            chance_labels: Vec::new(),
            depth,
        });
        match tree {
            GameTree::Terminal { utilities, outcome } => {
                self.nodes[id].kind = NodeKind::Terminal { utilities, outcome };
            }
            GameTree::Chance { outcomes } => {
                if outcomes.is_empty() {
                    return Err(invalid_game("chance node without outcomes"));
                }
                let mut probs = Vec::with_capacity(outcomes.len());
                let mut labels = Vec::with_capacity(outcomes.len());
                let mut children = Vec::with_capacity(outcomes.len());
                for (idx, (label, p, sub)) in outcomes.into_iter().enumerate() {
                    probs.push(p);
                    labels.push(label);
                    children.push(self.flatten(sub, Some(id), Some(idx), depth + 1)?);
                }
                let node = &mut self.nodes[id];
                node.kind = NodeKind::Chance { probs };
                node.chance_labels = labels;
                node.children = children;
            }
            GameTree::Decision { player, infoset, actions } => {
                if player >= self.num_players {
                    return Err(invalid_game(format!("player {player} out of range at {infoset}")));
                }
                if actions.is_empty() {
                    return Err(invalid_game(format!("decision node {infoset} has no actions")));
                }
                let labels: Vec<String> = actions.iter().map(|(l, _)| l.clone()).collect();
                let set_id = match self.key_index.get(&infoset) {
                    Some(&existing) => {
                        let set = &self.infosets[existing];
                        if set.player != player {
                            return Err(invalid_game(format!("infoset {infoset} mixes players")));
                        }
                        if set.actions != labels {
                            return Err(invalid_game(format!("infoset {infoset} has differing action lists")));
                        }
                        existing
                    }
                    None => {
                        let new_id = self.infosets.len();
                        self.infosets.push(Infoset {
                            player,
                            key: infoset.clone(),
                            actions: labels,
                            nodes: Vec::new(),
                            sequence_depth: 0,
                        });
                        self.player_infosets[player].push(new_id);
                        self.key_index.insert(infoset, new_id);
                        new_id
                    }
                };
                self.infosets[set_id].nodes.push(id);
                self.nodes[id].kind = NodeKind::Decision { player, infoset: set_id };
                let mut children = Vec::with_capacity(actions.len());
                for (idx, (_, sub)) in actions.into_iter().enumerate() {
                    children.push(self.flatten(sub, Some(id), Some(idx), depth + 1)?);
                }
                self.nodes[id].children = children;
            }
        }
        Ok(id)
    }

    /// Validate structural invariants and compute derived tables.
    fn finish(&mut self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(invalid_game("empty game"));
        }
        if self.nodes[0].parent.is_some() {
            return Err(invalid_game("root must not have a parent"));
        }
        self.terminals.clear();
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                if p >= id {
                    return Err(invalid_game(format!("node {id} does not follow its parent {p}")));
                }
            } else if id != 0 {
                return Err(invalid_game(format!("node {id} has no parent")));
            }
            for &c in &node.children {
                if c <= id || c >= self.nodes.len() || self.nodes[c].parent != Some(id) {
                    return Err(invalid_game(format!("bad child link {id} -> {c}")));
                }
            }
            match &node.kind {
                NodeKind::Terminal { utilities, .. } => {
                    if !node.children.is_empty() {
                        return Err(invalid_game(format!("terminal {id} has children")));
                    }
                    if utilities.len() != self.num_players {
                        return Err(invalid_game(format!("terminal {id} has {} utilities", utilities.len())));
                    }
                    if utilities.iter().any(|u| !u.is_finite()) {
                        return Err(invalid_game(format!("terminal {id} has a non-finite utility")));
                    }
                    self.terminals.push(id);
                }
                NodeKind::Chance { probs } => {
                    if probs.len() != node.children.len() || probs.is_empty() {
                        return Err(invalid_game(format!("chance node {id} is malformed")));
                    }
                    if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                        return Err(invalid_game(format!("chance node {id} has a negative probability")));
                    }
                    let total: f64 = probs.iter().sum();
                    if (total - 1.0).abs() > CHANCE_TOLERANCE {
                        return Err(invalid_game(format!("chance node {id} sums to {total}")));
                    }
                }
                NodeKind::Decision { player, infoset } => {
                    let set = &self.infosets[*infoset];
                    if set.player != *player || set.actions.len() != node.children.len() {
                        return Err(invalid_game(format!("decision node {id} disagrees with infoset {}", set.key)));
                    }
                }
            }
        }
        let mut count = vec![0usize; self.nodes.len()];
        count[0] = 1;
        for node in &self.nodes {
            for &c in &node.children {
                count[c] += 1;
            }
        }
        if count.iter().any(|&c| c != 1) {
            return Err(invalid_game("tree has shared or orphaned nodes"));
        }
        self.check_perfect_recall()
    }

    fn check_perfect_recall(&mut self) -> Result<()> {
        for set_id in 0..self.infosets.len() {
            let player = self.infosets[set_id].player;
            let mut expected: Option<Vec<(InfosetId, usize)>> = None;
            for &h in &self.infosets[set_id].nodes {
                let seq = self.own_sequence(h, player);
                match &expected {
                    None => expected = Some(seq),
                    Some(e) if *e != seq => {
                        return Err(invalid_game(format!(
                            "perfect recall violated at infoset {}",
                            self.infosets[set_id].key
                        )))
                    }
                    _ => {}
                }
            }
            self.infosets[set_id].sequence_depth = expected.map(|s| s.len()).unwrap_or(0);
        }
        Ok(())
    }

    /// The (infoset, action) pairs `player` chose on the path to `node`, root first.
    pub fn own_sequence(&self, node: NodeId, player: usize) -> Vec<(InfosetId, usize)> {
        let mut seq = Vec::new();
        let mut cur = node;
        while let Some(parent) = self.nodes[cur].parent {
            if let NodeKind::Decision { player: p, infoset } = self.nodes[parent].kind {
                if p == player {
                    seq.push((infoset, self.nodes[cur].parent_action.unwrap_or(0)));
                }
            }
            cur = parent;
        }
        seq.reverse();
        seq
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn infosets(&self) -> &[Infoset] {
        &self.infosets
    }

    pub fn infoset(&self, id: InfosetId) -> &Infoset {
        &self.infosets[id]
    }

    pub fn infosets_of(&self, player: usize) -> &[InfosetId] {
        &self.player_infosets[player]
    }

    pub fn infoset_by_key(&self, key: &str) -> Option<InfosetId> {
        self.key_index.get(key).copied()
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Labels of the edges leaving `node`.
    pub fn action_labels(&self, node: NodeId) -> &[String] {
        match self.nodes[node].kind {
            NodeKind::Decision { infoset, .. } => &self.infosets[infoset].actions,
            _ => &self.nodes[node].chance_labels,
        }
    }

    /// Δ_i: the spread between the best and worst terminal payoff of `player`.
    pub fn utility_range(&self, player: usize) -> f64 {
        let (lo, hi) = self
            .terminals
            .iter()
            .filter_map(|&z| self.nodes[z].utilities())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), u| (lo.min(u[player]), hi.max(u[player])));
        hi - lo
    }

    /// |A(𝓘_i)|: the largest action count over `player`'s information sets.
    pub fn max_actions(&self, player: usize) -> usize {
        self.player_infosets[player]
            .iter()
            .map(|&i| self.infosets[i].num_actions())
            .max()
            .unwrap_or(0)
    }

    /// Largest |Σ_i u_i(z)| over terminals.
    pub fn max_utility_sum(&self) -> f64 {
        self.terminals
            .iter()
            .filter_map(|&z| self.nodes[z].utilities())
            .map(|u| u.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_zero_sum(&self, tol: f64) -> bool {
        self.max_utility_sum() <= tol
    }

    pub fn is_ancestor(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            if c < ancestor {
                return false;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    /// D(I): `infoset` and every same-player information set below it, in id order.
    pub fn descendants(&self, infoset: InfosetId) -> Vec<InfosetId> {
        let player = self.infosets[infoset].player;
        let mut marked = vec![false; self.infosets.len()];
        let mut stack: Vec<NodeId> = self.infosets[infoset].nodes.clone();
        while let Some(h) = stack.pop() {
            if let NodeKind::Decision { player: p, infoset: s } = self.nodes[h].kind {
                if p == player {
                    marked[s] = true;
                }
            }
            stack.extend(self.nodes[h].children.iter().copied());
        }
        marked
            .iter()
            .enumerate()
            .filter_map(|(id, &m)| m.then_some(id))
            .collect()
    }

    /// Terminal nodes in the subtree rooted at `node`.
    pub fn terminals_below(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(h) = stack.pop() {
            if self.nodes[h].is_terminal() {
                out.push(h);
            }
            stack.extend(self.nodes[h].children.iter().rev().copied());
        }
        out
    }

    /// Copy of this game with every terminal utility vector rewritten.
    pub(crate) fn map_utilities(
        &self,
        name: impl Into<String>,
        mut f: impl FnMut(&[f64], Outcome) -> Result<Vec<f64>>,
    ) -> Result<Self> {
        let mut game = self.clone();
        game.name = name.into();
        for node in &mut game.nodes {
            if let NodeKind::Terminal { utilities, outcome } = &mut node.kind {
                *utilities = f(utilities, *outcome)?;
            }
        }
        Ok(game)
    }
}
