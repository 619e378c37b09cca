use super::{ExtensiveFormGame, InfosetId, NodeId, NodeKind, StrategyProfile};
use crate::error::{invalid_game, invalid_input, Error, Result};

/// Default cap on the number of joint pure-strategy profiles.
pub const DEFAULT_PROFILE_CAP: u128 = 1_000_000;

/// A finite game in strategic form.
///
/// Utilities are stored per player as a flat row-major tensor with player 0's
/// action as the most significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormGame {
    name: String,
    labels: Vec<Vec<String>>,
    counts: Vec<usize>,
    utilities: Vec<Vec<f64>>,
}

impl NormalFormGame {
    pub fn new(name: impl Into<String>, labels: Vec<Vec<String>>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        if counts.is_empty() || counts.contains(&0) {
            return Err(invalid_game("every player needs at least one action"));
        }
        let size: usize = counts.iter().product();
        if utilities.len() != counts.len() {
            return Err(invalid_game("one utility tensor per player is required"));
        }
        for (p, u) in utilities.iter().enumerate() {
            if u.len() != size {
                return Err(invalid_game(format!("player {p} tensor has {} entries, expected {size}", u.len())));
            }
            if u.iter().any(|x| !x.is_finite()) {
                return Err(invalid_game(format!("player {p} has a non-finite utility")));
            }
        }
        Ok(NormalFormGame { name: name.into(), labels, counts, utilities })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_players(&self) -> usize {
        self.counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.labels[player]
    }

    pub fn utilities(&self, player: usize) -> &[f64] {
        &self.utilities[player]
    }

    pub fn num_profiles(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.counts).fold(0, |acc, (&a, &n)| acc * n + a)
    }

    pub fn profile_at(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.counts.len()];
        for (slot, &n) in out.iter_mut().zip(&self.counts).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    pub fn utility(&self, player: usize, profile: &[usize]) -> f64 {
        self.utilities[player][self.index(profile)]
    }

    pub fn utility_range(&self, player: usize) -> f64 {
        let u = &self.utilities[player];
        let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    fn check_mixed(&self, mixed: &[Vec<f64>]) -> Result<()> {
        if mixed.len() != self.counts.len() || mixed.iter().zip(&self.counts).any(|(m, &n)| m.len() != n) {
            return Err(invalid_input("mixed profile does not match the game's dimensions"));
        }
        Ok(())
    }

    /// Expected utility of every player under independent mixed strategies.
    pub fn expected_utility(&self, mixed: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_mixed(mixed)?;
        let mut out = vec![0.0; self.num_players()];
        for k in 0..self.num_profiles() {
            let profile = self.profile_at(k);
            let w: f64 = profile.iter().enumerate().map(|(p, &a)| mixed[p][a]).product();
            if w != 0.0 {
                for (o, u) in out.iter_mut().zip(&self.utilities) {
                    *o += w * u[k];
                }
            }
        }
        Ok(out)
    }

    /// u_i(a, σ_{-i}) for every action a of `player`; `mixed[player]` is ignored.
    pub fn action_values(&self, player: usize, mixed: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_mixed(mixed)?;
        let mut out = vec![0.0; self.counts[player]];
        for k in 0..self.num_profiles() {
            let profile = self.profile_at(k);
            let w: f64 = profile
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != player)
                .map(|(p, &a)| mixed[p][a])
                .product();
            if w != 0.0 {
                out[profile[player]] += w * self.utilities[player][k];
            }
        }
        Ok(out)
    }
}

/// Lexicographic enumeration of one player's pure strategies, with the
/// player's first information set as the most significant digit.
#[derive(Clone, Debug)]
pub struct PureStrategies {
    pub player: usize,
    pub infosets: Vec<InfosetId>,
    pub counts: Vec<usize>,
}

impl PureStrategies {
    pub fn new(game: &ExtensiveFormGame, player: usize) -> Self {
        let infosets = game.infosets_of(player).to_vec();
        let counts = infosets.iter().map(|&i| game.infoset(i).num_actions()).collect();
        PureStrategies { player, infosets, counts }
    }

    pub fn count(&self) -> u128 {
        self.counts.iter().map(|&n| n as u128).product()
    }

    pub fn choices(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.counts.len()];
        for (slot, &n) in out.iter_mut().zip(&self.counts).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    pub fn index_of(&self, choices: &[usize]) -> usize {
        choices.iter().zip(&self.counts).fold(0, |acc, (&a, &n)| acc * n + a)
    }

    pub fn label(&self, game: &ExtensiveFormGame, index: usize) -> String {
        self.choices(index)
            .iter()
            .zip(&self.infosets)
            .map(|(&a, &i)| game.infoset(i).actions[a].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// `base` with this player's distributions replaced by the pure strategy.
    pub fn apply(&self, index: usize, base: &StrategyProfile) -> StrategyProfile {
        let mut out = base.clone();
        for (&a, &i) in self.choices(index).iter().zip(&self.infosets) {
            out = out.with_action(i, a);
        }
        out
    }
}

pub fn pure_strategy_count(game: &ExtensiveFormGame, player: usize) -> u128 {
    PureStrategies::new(game, player).count()
}

pub fn to_normal_form(game: &ExtensiveFormGame) -> Result<NormalFormGame> {
    to_normal_form_capped(game, DEFAULT_PROFILE_CAP)
}

/// Induced normal form: each player's actions are their pure strategies.
pub fn to_normal_form_capped(game: &ExtensiveFormGame, cap: u128) -> Result<NormalFormGame> {
    let pures: Vec<PureStrategies> = (0..game.num_players()).map(|p| PureStrategies::new(game, p)).collect();
    let total = pures
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.count()))
        .unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::GameTooLarge { what: format!("normal form of {}", game.name()), count: total, cap });
    }
    let labels: Vec<Vec<String>> = pures
        .iter()
        .map(|s| (0..s.count() as usize).map(|k| s.label(game, k)).collect())
        .collect();
    let nf_counts: Vec<usize> = labels.iter().map(Vec::len).collect();
    let size = total as usize;
    let mut utilities = vec![vec![0.0; size]; game.num_players()];
    let mut choice = vec![0usize; game.infosets().len()];
    let mut joint = vec![0usize; nf_counts.len()];
    for k in 0..size {
        let mut rem = k;
        for (slot, &n) in joint.iter_mut().zip(&nf_counts).rev() {
            *slot = rem % n;
            rem /= n;
        }
        for (s, &idx) in pures.iter().zip(&joint) {
            for (&a, &i) in s.choices(idx).iter().zip(&s.infosets) {
                choice[i] = a;
            }
        }
        let mut acc = vec![0.0; game.num_players()];
        accumulate_pure(game, 0, 1.0, &choice, &mut acc);
        for (p, v) in acc.into_iter().enumerate() {
            utilities[p][k] = v;
        }
    }
    NormalFormGame::new(game.name(), labels, utilities)
}

fn accumulate_pure(game: &ExtensiveFormGame, node: NodeId, weight: f64, choice: &[usize], acc: &mut [f64]) {
    let n = game.node(node);
    match &n.kind {
        NodeKind::Terminal { utilities, .. } => {
            for (a, u) in acc.iter_mut().zip(utilities) {
                *a += weight * u;
            }
        }
        NodeKind::Chance { probs } => {
            for (&c, &p) in n.children.iter().zip(probs) {
                if p > 0.0 {
                    accumulate_pure(game, c, weight * p, choice, acc);
                }
            }
        }
        NodeKind::Decision { infoset, .. } => {
            accumulate_pure(game, n.children[choice[*infoset]], weight, choice, acc);
        }
    }
}

/// Mixed strategy over `player`'s pure strategies equivalent to the
/// behavioral strategy `profile` restricted to that player.
pub fn realize_mixed_from_behavioral(
    game: &ExtensiveFormGame,
    player: usize,
    profile: &StrategyProfile,
) -> Result<Vec<f64>> {
    profile.validate(game)?;
    let pures = PureStrategies::new(game, player);
    if pures.count() > DEFAULT_PROFILE_CAP {
        return Err(Error::GameTooLarge {
            what: format!("pure strategies of player {player}"),
            count: pures.count(),
            cap: DEFAULT_PROFILE_CAP,
        });
    }
    Ok((0..pures.count() as usize)
        .map(|k| {
            pures
                .choices(k)
                .iter()
                .zip(&pures.infosets)
                .map(|(&a, &i)| profile.prob(i, a))
                .product()
        })
        .collect())
}
