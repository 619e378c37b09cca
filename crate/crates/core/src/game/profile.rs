use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExtensiveFormGame, InfosetId};
use crate::error::{invalid_input, Result};

/// Tolerance on behavioral distributions summing to one.
pub const PROFILE_TOLERANCE: f64 = 1e-9;

/// A behavioral strategy profile: one action distribution per information set,
/// indexed by infoset id. A single player's behavioral strategy is the
/// restriction of a profile to that player's information sets.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyProfile {
    dists: Vec<Vec<f64>>,
}

impl StrategyProfile {
    pub fn uniform(game: &ExtensiveFormGame) -> Self {
        StrategyProfile {
            dists: game
                .infosets()
                .iter()
                .map(|s| vec![1.0 / s.num_actions() as f64; s.num_actions()])
                .collect(),
        }
    }

    pub fn from_dists(game: &ExtensiveFormGame, dists: Vec<Vec<f64>>) -> Result<Self> {
        let profile = StrategyProfile { dists };
        profile.validate(game)?;
        Ok(profile)
    }

    pub(crate) fn from_dists_unchecked(dists: Vec<Vec<f64>>) -> Self {
        StrategyProfile { dists }
    }

    pub fn get(&self, infoset: InfosetId) -> &[f64] {
        &self.dists[infoset]
    }

    pub fn prob(&self, infoset: InfosetId, action: usize) -> f64 {
        self.dists[infoset][action]
    }

    pub fn set(&mut self, infoset: InfosetId, dist: Vec<f64>) {
        self.dists[infoset] = dist;
    }

    pub fn dists(&self) -> &[Vec<f64>] {
        &self.dists
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    /// Point mass on `action` at `infoset`, leaving everything else untouched.
    pub fn with_action(&self, infoset: InfosetId, action: usize) -> Self {
        let mut out = self.clone();
        let n = out.dists[infoset].len();
        out.dists[infoset] = (0..n).map(|a| if a == action { 1.0 } else { 0.0 }).collect();
        out
    }

    /// Replace `player`'s distributions with those of `other`.
    pub fn with_player_from(&self, game: &ExtensiveFormGame, player: usize, other: &StrategyProfile) -> Self {
        let mut out = self.clone();
        for &i in game.infosets_of(player) {
            out.dists[i] = other.dists[i].clone();
        }
        out
    }

    /// Joint profile where seat `p` plays `seats[p]`'s distributions.
    pub fn from_seats(game: &ExtensiveFormGame, seats: &[&StrategyProfile]) -> Result<Self> {
        if seats.len() != game.num_players() {
            return Err(invalid_input(format!(
                "need {} seat profiles, got {}",
                game.num_players(),
                seats.len()
            )));
        }
        let dists = game
            .infosets()
            .iter()
            .enumerate()
            .map(|(id, set)| seats[set.player].dists[id].clone())
            .collect();
        Ok(StrategyProfile { dists })
    }

    pub fn validate(&self, game: &ExtensiveFormGame) -> Result<()> {
        if self.dists.len() != game.infosets().len() {
            return Err(invalid_input(format!(
                "profile covers {} infosets, game has {}",
                self.dists.len(),
                game.infosets().len()
            )));
        }
        for (set, dist) in game.infosets().iter().zip(&self.dists) {
            if dist.len() != set.num_actions() {
                return Err(invalid_input(format!("wrong action count at {}", set.key)));
            }
            if dist.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(invalid_input(format!("negative or non-finite probability at {}", set.key)));
            }
            let total: f64 = dist.iter().sum();
            if (total - 1.0).abs() > PROFILE_TOLERANCE {
                return Err(invalid_input(format!("distribution at {} sums to {total}", set.key)));
            }
        }
        Ok(())
    }

    pub fn to_keyed(&self, game: &ExtensiveFormGame) -> KeyedProfile {
        KeyedProfile(
            game.infosets()
                .iter()
                .zip(&self.dists)
                .map(|(s, d)| (s.key.clone(), d.clone()))
                .collect(),
        )
    }

    pub fn from_keyed(game: &ExtensiveFormGame, keyed: &KeyedProfile) -> Result<Self> {
        if keyed.0.len() != game.infosets().len() {
            return Err(invalid_input(format!(
                "profile has {} entries, game has {} infosets",
                keyed.0.len(),
                game.infosets().len()
            )));
        }
        let mut dists = Vec::with_capacity(game.infosets().len());
        for set in game.infosets() {
            let dist = keyed
                .0
                .get(&set.key)
                .ok_or_else(|| invalid_input(format!("profile is missing infoset {}", set.key)))?;
            dists.push(dist.clone());
        }
        Self::from_dists(game, dists)
    }
}

/// Serializable form of a profile keyed by information-set key.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KeyedProfile(pub BTreeMap<String, Vec<f64>>);
