use std::collections::{BTreeMap, BTreeSet};

use super::report::{DominanceMode, DominanceReport, Removal, ReportTarget};
use super::strategies::{dominating_mixture, Certificate};
use crate::error::{invalid_input, Error, Result};
use crate::game::{ExtensiveFormGame, InfosetId, NodeId, NodeKind};

/// Default cap on (continuation × opponent profile) evaluations per action.
pub const DEFAULT_ACTION_CAP: u128 = 1_000_000;

/// Which actions remain available at each information set.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionRestriction {
    allowed: Vec<Vec<bool>>,
}

impl ActionRestriction {
    pub fn full(game: &ExtensiveFormGame) -> Self {
        ActionRestriction { allowed: game.infosets().iter().map(|s| vec![true; s.num_actions()]).collect() }
    }

    pub fn remove(&mut self, infoset: InfosetId, action: usize) {
        self.allowed[infoset][action] = false;
    }

    pub fn is_allowed(&self, infoset: InfosetId, action: usize) -> bool {
        self.allowed[infoset][action]
    }

    pub fn allowed_actions(&self, infoset: InfosetId) -> Vec<usize> {
        (0..self.allowed[infoset].len()).filter(|&a| self.allowed[infoset][a]).collect()
    }
}

/// A dominated action together with the dominating mixture over the
/// owner's pure continuations below it.
#[derive(Clone, Debug, PartialEq)]
pub struct DominatedAction {
    pub infoset: InfosetId,
    pub action: usize,
    /// D(I) in id order; continuation choices are aligned with it.
    pub subtree: Vec<InfosetId>,
    /// (choice per subtree infoset, weight).
    pub mixture: Vec<(Vec<usize>, f64)>,
    pub certificate: Certificate,
}

impl DominatedAction {
    pub fn label(&self, game: &ExtensiveFormGame) -> String {
        let set = game.infoset(self.infoset);
        format!("{}:{}", set.key, set.actions[self.action])
    }

    pub fn mixture_labels(&self, game: &ExtensiveFormGame) -> BTreeMap<String, f64> {
        self.mixture
            .iter()
            .map(|(choices, w)| (continuation_label(game, &self.subtree, choices), *w))
            .collect()
    }
}

fn continuation_label(game: &ExtensiveFormGame, sets: &[InfosetId], choices: &[usize]) -> String {
    sets.iter()
        .zip(choices)
        .map(|(&j, &b)| format!("{}={}", game.infoset(j).key, game.infoset(j).actions[b]))
        .collect::<Vec<_>>()
        .join(",")
}

fn assignments(sets: &[InfosetId], restriction: &ActionRestriction) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(sets.len())];
    for &j in sets {
        let options = restriction.allowed_actions(j);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&b| {
                    let mut next = prefix.clone();
                    next.push(b);
                    next
                })
            })
            .collect();
    }
    out
}

fn count_assignments(sets: &[InfosetId], restriction: &ActionRestriction) -> u128 {
    sets.iter()
        .map(|&j| restriction.allowed_actions(j).len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// Everything needed to evaluate v_i(I, (s, o)) for pure continuations s and
/// pure profiles o over the opponents' relevant information sets.
struct Local<'a> {
    game: &'a ExtensiveFormGame,
    player: usize,
    subtree: Vec<InfosetId>,
    opponents: Vec<InfosetId>,
    /// Per h ∈ I: chance reach and the opponent choices on the path to h.
    paths: Vec<(NodeId, f64, Vec<(InfosetId, usize)>)>,
}

impl<'a> Local<'a> {
    fn new(game: &'a ExtensiveFormGame, infoset: InfosetId) -> Self {
        let player = game.infoset(infoset).player;
        let mut opponents = BTreeSet::new();
        let mut paths = Vec::new();
        for &h in &game.infoset(infoset).nodes {
            let mut chance = 1.0;
            let mut choices = Vec::new();
            let mut cur = h;
            while let Some(parent) = game.node(cur).parent {
                let a = game.node(cur).parent_action.unwrap_or(0);
                match &game.node(parent).kind {
                    NodeKind::Chance { probs } => chance *= probs[a],
                    NodeKind::Decision { player: p, infoset: j } if *p != player => {
                        opponents.insert(*j);
                        choices.push((*j, a));
                    }
                    _ => {}
                }
                cur = parent;
            }
            let mut stack = vec![h];
            while let Some(x) = stack.pop() {
                if let NodeKind::Decision { player: p, infoset: j } = game.node(x).kind {
                    if p != player {
                        opponents.insert(j);
                    }
                }
                stack.extend(game.node(x).children.iter().copied());
            }
            paths.push((h, chance, choices));
        }
        Local {
            game,
            player,
            subtree: game.descendants(infoset),
            opponents: opponents.into_iter().collect(),
            paths,
        }
    }

    fn value_below(&self, h: NodeId, choice: &[usize]) -> f64 {
        let node = self.game.node(h);
        match &node.kind {
            NodeKind::Terminal { utilities, .. } => utilities[self.player],
            NodeKind::Chance { probs } => node
                .children
                .iter()
                .zip(probs)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&c, &p)| p * self.value_below(c, choice))
                .sum(),
            NodeKind::Decision { infoset, .. } => self.value_below(node.children[choice[*infoset]], choice),
        }
    }

    /// Per-h opponent reach for the opponent assignment `o`.
    fn reach(&self, o: &[usize]) -> Vec<f64> {
        self.paths
            .iter()
            .map(|(_, chance, choices)| {
                let ok = choices.iter().all(|&(j, a)| {
                    let pos = self.opponents.binary_search(&j).unwrap_or(usize::MAX);
                    o.get(pos) == Some(&a)
                });
                if ok {
                    *chance
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn value(&self, s: &[usize], o: &[usize], reach: &[f64], choice: &mut [usize]) -> f64 {
        for (&j, &b) in self.subtree.iter().zip(s) {
            choice[j] = b;
        }
        for (&j, &b) in self.opponents.iter().zip(o) {
            choice[j] = b;
        }
        self.paths
            .iter()
            .zip(reach)
            .filter(|(_, &r)| r > 0.0)
            .map(|((h, _, _), &r)| r * self.value_below(*h, choice))
            .sum()
    }
}

/// Test whether `action` at `infoset` is dominated under `restriction`.
pub fn action_dominance_certificate(
    game: &ExtensiveFormGame,
    infoset: InfosetId,
    action: usize,
    mode: DominanceMode,
    restriction: &ActionRestriction,
    cap: u128,
) -> Result<Option<DominatedAction>> {
    if infoset >= game.infosets().len() || action >= game.infoset(infoset).num_actions() {
        return Err(invalid_input(format!("no action {action} at infoset {infoset}")));
    }
    let local = Local::new(game, infoset);
    let pairs = count_assignments(&local.subtree, restriction)
        .saturating_mul(count_assignments(&local.opponents, restriction));
    if pairs > cap {
        return Err(Error::GameTooLarge {
            what: format!("action dominance at {}", game.infoset(infoset).key),
            count: pairs,
            cap,
        });
    }
    let own_pos = local.subtree.iter().position(|&j| j == infoset).unwrap_or(0);
    let conts = assignments(&local.subtree, restriction);
    let opps: Vec<(Vec<usize>, Vec<f64>)> = assignments(&local.opponents, restriction)
        .into_iter()
        .map(|o| {
            let r = local.reach(&o);
            (o, r)
        })
        .filter(|(_, r)| mode == DominanceMode::Weak || r.iter().sum::<f64>() > 0.0)
        .collect();
    if opps.is_empty() {
        return Ok(None);
    }
    let mut choice = vec![0usize; game.infosets().len()];
    let values: Vec<Vec<f64>> = conts
        .iter()
        .map(|s| opps.iter().map(|(o, r)| local.value(s, o, r, &mut choice)).collect())
        .collect();
    // The dominating strategy must leave I by another action; otherwise a
    // continuation could tie with itself and make every action weakly
    // dominated whenever something below it is.
    let (targets, candidates): (Vec<usize>, Vec<usize>) = (0..conts.len()).partition(|&k| conts[k][own_pos] == action);
    let mut matrix = Vec::with_capacity(targets.len() * opps.len());
    let mut rhs = Vec::with_capacity(targets.len() * opps.len());
    for &t in &targets {
        for k in 0..opps.len() {
            matrix.push(candidates.iter().map(|&c| values[c][k]).collect());
            rhs.push(values[t][k]);
        }
    }
    Ok(dominating_mixture(&matrix, &rhs, mode)?.map(|mut certificate| {
        for w in &mut certificate.weights {
            w.0 = candidates[w.0];
        }
        DominatedAction {
            infoset,
            action,
            subtree: local.subtree.clone(),
            mixture: certificate.weights.iter().map(|&(k, w)| (conts[k].clone(), w)).collect(),
            certificate,
        }
    }))
}

/// All dominated actions of `player` under `restriction`. Sets with a single
/// available action are skipped.
pub fn detect_dominated_actions_restricted(
    game: &ExtensiveFormGame,
    player: usize,
    mode: DominanceMode,
    restriction: &ActionRestriction,
    cap: u128,
) -> Result<Vec<DominatedAction>> {
    let mut out = Vec::new();
    for &i in game.infosets_of(player) {
        let available = restriction.allowed_actions(i);
        if available.len() < 2 {
            continue;
        }
        for a in available {
            if let Some(d) = action_dominance_certificate(game, i, a, mode, restriction, cap)? {
                out.push(d);
            }
        }
    }
    Ok(out)
}

pub fn detect_dominated_actions(
    game: &ExtensiveFormGame,
    player: usize,
    mode: DominanceMode,
) -> Result<Vec<DominatedAction>> {
    detect_dominated_actions_restricted(game, player, mode, &ActionRestriction::full(game), DEFAULT_ACTION_CAP)
}

/// Rounds of simultaneous removal of dominated actions for all players.
pub fn iterated_action_removal(game: &ExtensiveFormGame, mode: DominanceMode) -> Result<DominanceReport> {
    iterated_action_removal_capped(game, mode, DEFAULT_ACTION_CAP)
}

pub fn iterated_action_removal_capped(game: &ExtensiveFormGame, mode: DominanceMode, cap: u128) -> Result<DominanceReport> {
    let mut restriction = ActionRestriction::full(game);
    let mut removals = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut found = Vec::new();
        for player in 0..game.num_players() {
            found.extend(detect_dominated_actions_restricted(game, player, mode, &restriction, cap)?);
        }
        if found.is_empty() {
            break;
        }
        for d in &found {
            restriction.remove(d.infoset, d.action);
        }
        for d in found {
            if restriction.allowed_actions(d.infoset).is_empty() {
                return Err(Error::InvalidState(format!("removal emptied {}", game.infoset(d.infoset).key)));
            }
            removals.push(Removal {
                round,
                player: game.infoset(d.infoset).player,
                label: d.label(game),
                strategy: None,
                infoset: Some(d.infoset),
                action: Some(d.action),
                certificate: d.mixture_labels(game),
                margin: d.certificate.min_margin,
            });
        }
    }
    let survivors = (0..game.num_players())
        .map(|p| {
            game.infosets_of(p)
                .iter()
                .flat_map(|&i| {
                    let set = game.infoset(i);
                    restriction
                        .allowed_actions(i)
                        .into_iter()
                        .map(move |a| format!("{}:{}", set.key, set.actions[a]))
                })
                .collect()
        })
        .collect();
    Ok(DominanceReport { mode, target: ReportTarget::Actions, removals, survivors })
}
