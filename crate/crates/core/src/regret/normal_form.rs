use super::matching::regret_matching_into;
use crate::error::{invalid_input, Result};
use crate::game::NormalFormGame;

/// Regret matching for every player of a normal-form game.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormRm {
    regrets: Vec<Vec<f64>>,
    cumulative: Vec<Vec<f64>>,
    iteration: u64,
}

impl NormalFormRm {
    pub fn new(game: &NormalFormGame) -> Self {
        let zeros: Vec<Vec<f64>> = game.action_counts().iter().map(|&n| vec![0.0; n]).collect();
        NormalFormRm { regrets: zeros.clone(), cumulative: zeros, iteration: 0 }
    }

    fn check(&self, game: &NormalFormGame) -> Result<()> {
        let same = self.regrets.len() == game.num_players()
            && self.regrets.iter().zip(game.action_counts()).all(|(r, &n)| r.len() == n);
        if same {
            Ok(())
        } else {
            Err(invalid_input("regret tables do not match the game"))
        }
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// R_i^T(a) for every action of `player`.
    pub fn regrets(&self, player: usize) -> &[f64] {
        &self.regrets[player]
    }

    /// max_a R_i^T(a), the player's external regret.
    pub fn external_regret(&self, player: usize) -> f64 {
        self.regrets[player].iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn current(&self) -> Vec<Vec<f64>> {
        self.regrets
            .iter()
            .map(|r| {
                let mut out = vec![0.0; r.len()];
                regret_matching_into(r, &mut out);
                out
            })
            .collect()
    }

    /// σ̄^T: the plain average of the profiles played so far.
    pub fn average(&self) -> Vec<Vec<f64>> {
        self.cumulative
            .iter()
            .map(|c| {
                if self.iteration == 0 {
                    vec![1.0 / c.len() as f64; c.len()]
                } else {
                    c.iter().map(|x| x / self.iteration as f64).collect()
                }
            })
            .collect()
    }

    /// Account for `played` as this iteration's profile.
    pub fn observe(&mut self, game: &NormalFormGame, played: &[Vec<f64>]) -> Result<()> {
        self.check(game)?;
        for p in 0..game.num_players() {
            let values = game.action_values(p, played)?;
            let v: f64 = values.iter().zip(&played[p]).map(|(x, q)| x * q).sum();
            for (r, x) in self.regrets[p].iter_mut().zip(&values) {
                *r += x - v;
            }
            for (c, q) in self.cumulative[p].iter_mut().zip(&played[p]) {
                *c += q;
            }
        }
        self.iteration += 1;
        Ok(())
    }

    /// Play the regret-matching profile and update; returns the profile played.
    pub fn step(&mut self, game: &NormalFormGame) -> Result<Vec<Vec<f64>>> {
        self.check(game)?;
        let played = self.current();
        self.observe(game, &played)?;
        Ok(played)
    }
}
