use serde::{Deserialize, Serialize};

use super::matching::regret_matching_into;
use crate::error::{Error, Result};
use crate::game::{ExtensiveFormGame, InfosetId, StrategyProfile};

pub const CHECKPOINT_FORMAT: &str = "regret-checkpoint/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileMode {
    /// Regrets plus the cumulative profile.
    Full,
    /// Regrets only; the average profile is unavailable.
    CurrentOnly,
}

/// Seed and per-player stream positions of a sampling run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub word_pos: Vec<u128>,
}

/// Cumulative regrets and (optionally) the cumulative profile, stored flat
/// with one slot per (information set, action).
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    offsets: Vec<usize>,
    regrets: Vec<f64>,
    cumulative: Option<Vec<f64>>,
    iteration: u64,
    rng: Option<RngState>,
}

impl SolverState {
    pub fn new(game: &ExtensiveFormGame, mode: ProfileMode) -> Self {
        let mut offsets = Vec::with_capacity(game.infosets().len() + 1);
        let mut total = 0;
        for set in game.infosets() {
            offsets.push(total);
            total += set.num_actions();
        }
        offsets.push(total);
        SolverState {
            offsets,
            regrets: vec![0.0; total],
            cumulative: (mode == ProfileMode::Full).then(|| vec![0.0; total]),
            iteration: 0,
            rng: None,
        }
    }

    /// State for External Sampling, with one random stream per player.
    pub fn new_sampled(game: &ExtensiveFormGame, mode: ProfileMode, seed: u64) -> Self {
        let mut state = Self::new(game, mode);
        state.rng = Some(RngState { seed, word_pos: vec![0; game.num_players()] });
        state
    }

    pub fn mode(&self) -> ProfileMode {
        if self.cumulative.is_some() {
            ProfileMode::Full
        } else {
            ProfileMode::CurrentOnly
        }
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn is_sampled(&self) -> bool {
        self.rng.is_some()
    }

    pub fn rng_state(&self) -> Option<&RngState> {
        self.rng.as_ref()
    }

    pub(crate) fn rng_state_mut(&mut self) -> Option<&mut RngState> {
        self.rng.as_mut()
    }

    pub fn num_infosets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn regrets(&self, infoset: InfosetId) -> &[f64] {
        &self.regrets[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn cumulative(&self, infoset: InfosetId) -> Option<&[f64]> {
        self.cumulative
            .as_ref()
            .map(|c| &c[self.offsets[infoset]..self.offsets[infoset + 1]])
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub(crate) fn tables_mut(&mut self) -> (&mut [f64], Option<&mut [f64]>) {
        (&mut self.regrets, self.cumulative.as_deref_mut())
    }

    pub(crate) fn advance(&mut self) {
        self.iteration += 1;
    }

    /// Number of reals stored per (information set, action) slot.
    pub fn reals_per_action(&self) -> usize {
        1 + self.cumulative.is_some() as usize
    }

    /// Bytes held by the regret and profile tables.
    pub fn table_bytes(&self) -> usize {
        let slots = self.regrets.len() + self.cumulative.as_ref().map_or(0, Vec::len);
        slots * std::mem::size_of::<f64>()
    }

    /// Regret matching applied to every information set.
    pub fn current_profile(&self) -> StrategyProfile {
        let dists = (0..self.num_infosets())
            .map(|i| {
                let r = self.regrets(i);
                let mut out = vec![0.0; r.len()];
                regret_matching_into(r, &mut out);
                out
            })
            .collect();
        StrategyProfile::from_dists_unchecked(dists)
    }

    /// Normalized cumulative profile; sets that never received mass are uniform.
    pub fn average_profile(&self) -> Result<StrategyProfile> {
        if self.cumulative.is_none() {
            return Err(Error::UnsupportedMode("the average profile is not stored".into()));
        }
        let dists = (0..self.num_infosets())
            .map(|i| {
                let s = self.cumulative(i).unwrap_or(&[]);
                let total: f64 = s.iter().sum();
                if total > 0.0 {
                    s.iter().map(|x| x / total).collect()
                } else {
                    vec![1.0 / s.len() as f64; s.len()]
                }
            })
            .collect();
        Ok(StrategyProfile::from_dists_unchecked(dists))
    }

    pub fn to_checkpoint(&self, game: &ExtensiveFormGame) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            game: game.name().to_string(),
            mode: self.mode(),
            iteration: self.iteration,
            action_counts: game.infosets().iter().map(|s| s.num_actions()).collect(),
            regrets: self.regrets.clone(),
            cumulative: self.cumulative.clone(),
            rng: self.rng.clone(),
        }
    }

    pub fn from_checkpoint(game: &ExtensiveFormGame, cp: Checkpoint) -> Result<Self> {
        if cp.format != CHECKPOINT_FORMAT {
            return Err(Error::Format(format!("unsupported checkpoint format {:?}", cp.format)));
        }
        let mut state = Self::new(game, cp.mode);
        let counts: Vec<usize> = game.infosets().iter().map(|s| s.num_actions()).collect();
        if cp.action_counts != counts || cp.regrets.len() != state.regrets.len() {
            return Err(Error::InvalidState(format!("checkpoint does not fit game {}", game.name())));
        }
        if cp.cumulative.as_ref().map(Vec::len) != state.cumulative.as_ref().map(Vec::len) {
            return Err(Error::InvalidState("checkpoint profile table disagrees with its mode".into()));
        }
        if let Some(rng) = &cp.rng {
            if rng.word_pos.len() != game.num_players() {
                return Err(Error::InvalidState("checkpoint has the wrong number of random streams".into()));
            }
        }
        state.regrets = cp.regrets;
        state.cumulative = cp.cumulative;
        state.iteration = cp.iteration;
        state.rng = cp.rng;
        Ok(state)
    }
}

/// Serializable snapshot of a [`SolverState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub game: String,
    pub mode: ProfileMode,
    pub iteration: u64,
    pub action_counts: Vec<usize>,
    pub regrets: Vec<f64>,
    pub cumulative: Option<Vec<f64>>,
    pub rng: Option<RngState>,
}
