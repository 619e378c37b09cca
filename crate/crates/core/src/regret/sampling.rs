use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cfr::{check_dims, current_policy};
use super::counters::DiagnosticCounters;
use super::state::SolverState;
use crate::error::{Error, Result};
use crate::game::{ExtensiveFormGame, NodeId, NodeKind, StrategyProfile};

/// What a random stream is used for. Each (player, purpose) pair gets its own
/// stream so adding a consumer never perturbs another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamPurpose {
    Sampling = 0,
    Evaluation = 1,
}

pub fn stream_rng(seed: u64, index: usize, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index as u64) << 8) | purpose as u64);
    rng
}

pub(crate) fn sample_index(rng: &mut impl Rng, probs: &[f64]) -> usize {
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = k;
            if r < acc {
                return k;
            }
        }
    }
    last
}

struct Pass<'a> {
    game: &'a ExtensiveFormGame,
    traverser: usize,
    sigma: &'a [Vec<f64>],
    zero: &'a [bool],
    offsets: &'a [usize],
    regrets: &'a mut [f64],
    cumulative: Option<&'a mut [f64]>,
    rng: &'a mut ChaCha8Rng,
    zero_visits: u64,
}

impl Pass<'_> {
    fn walk(&mut self, h: NodeId) -> f64 {
        let node = self.game.node(h);
        match &node.kind {
            NodeKind::Terminal { utilities, .. } => utilities[self.traverser],
            NodeKind::Chance { probs } => {
                let a = sample_index(self.rng, probs);
                self.walk(node.children[a])
            }
            NodeKind::Decision { player, infoset } => {
                let i = *infoset;
                self.zero_visits += self.zero[i] as u64;
                let policy = &self.sigma[i];
                if *player == self.traverser {
                    let values: Vec<f64> = node.children.iter().map(|&c| self.walk(c)).collect();
                    let v: f64 = values.iter().zip(policy).map(|(x, p)| x * p).sum();
                    let base = self.offsets[i];
                    for (a, x) in values.iter().enumerate() {
                        self.regrets[base + a] += x - v;
                    }
                    v
                } else {
                    if let Some(cum) = self.cumulative.as_deref_mut() {
                        let base = self.offsets[i];
                        for (a, p) in policy.iter().enumerate() {
                            cum[base + a] += p;
                        }
                    }
                    let a = sample_index(self.rng, policy);
                    self.walk(node.children[a])
                }
            }
        }
    }
}

/// One External Sampling iteration: a pass per player in which chance and
/// the other players are sampled from σ^t while the traverser's actions are
/// all explored.
pub fn external_sampling_iterate(
    game: &ExtensiveFormGame,
    state: &mut SolverState,
    counters: &mut DiagnosticCounters,
) -> Result<()> {
    external_sampling_iterate_with(game, state, counters, |_| {})
}

pub fn external_sampling_iterate_with(
    game: &ExtensiveFormGame,
    state: &mut SolverState,
    counters: &mut DiagnosticCounters,
    mut observe: impl FnMut(&StrategyProfile),
) -> Result<()> {
    check_dims(game, state)?;
    let rng_state = state
        .rng_state()
        .cloned()
        .ok_or_else(|| Error::InvalidState("external sampling needs a seeded state".into()))?;
    let (dists, _) = current_policy(state, game.infosets().len());
    let zero: Vec<bool> = (0..game.infosets().len())
        .map(|i| state.regrets(i).iter().all(|&r| r <= 0.0))
        .collect();
    let sigma = StrategyProfile::from_dists_unchecked(dists);
    observe(&sigma);
    if counters.needs_profile() {
        counters.record_profile(game, &sigma);
    }

    let offsets = state.offsets().to_vec();
    let mut positions = rng_state.word_pos.clone();
    let mut zero_visits = 0;
    {
        let (regrets, mut cumulative) = state.tables_mut();
        for (traverser, pos) in positions.iter_mut().enumerate() {
            let mut rng = stream_rng(rng_state.seed, traverser, StreamPurpose::Sampling);
            rng.set_word_pos(*pos);
            let mut pass = Pass {
                game,
                traverser,
                sigma: sigma.dists(),
                zero: &zero,
                offsets: &offsets,
                regrets: &mut *regrets,
                cumulative: cumulative.as_deref_mut(),
                rng: &mut rng,
                zero_visits: 0,
            };
            pass.walk(0);
            zero_visits += pass.zero_visits;
            *pos = rng.get_word_pos();
        }
    }
    if let Some(rs) = state.rng_state_mut() {
        rs.word_pos = positions;
    }
    counters.record_iteration(zero_visits);
    state.advance();
    Ok(())
}
