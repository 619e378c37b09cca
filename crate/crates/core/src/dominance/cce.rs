use crate::error::{invalid_input, Result};
use crate::game::NormalFormGame;

/// A distribution over (possibly mixed) strategy profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatedDevice {
    /// Each entry is one mixed strategy per player.
    pub support: Vec<Vec<Vec<f64>>>,
    pub weights: Vec<f64>,
}

impl CorrelatedDevice {
    pub fn new(nf: &NormalFormGame, support: Vec<Vec<Vec<f64>>>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() || support.is_empty() {
            return Err(invalid_input("device needs one weight per profile"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(invalid_input("device weights must form a distribution"));
        }
        for profile in &support {
            let fits = profile.len() == nf.num_players()
                && profile.iter().zip(nf.action_counts()).all(|(m, &n)| m.len() == n);
            if !fits {
                return Err(invalid_input("device profile does not match the game"));
            }
        }
        Ok(CorrelatedDevice { support, weights })
    }

    /// Device over pure profiles.
    pub fn from_pure(nf: &NormalFormGame, entries: &[(Vec<usize>, f64)]) -> Result<Self> {
        let support = entries
            .iter()
            .map(|(profile, _)| {
                profile
                    .iter()
                    .zip(nf.action_counts())
                    .map(|(&a, &n)| (0..n).map(|k| if k == a { 1.0 } else { 0.0 }).collect())
                    .collect()
            })
            .collect();
        Self::new(nf, support, entries.iter().map(|e| e.1).collect())
    }

    /// Uniform device over a sequence of played profiles.
    pub fn empirical(nf: &NormalFormGame, played: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let w = 1.0 / played.len().max(1) as f64;
        let n = played.len();
        Self::new(nf, played, vec![w; n])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CceCheck {
    pub is_cce: bool,
    /// Σ_k q(k)·u_i(σ^k) per player.
    pub values: Vec<f64>,
    /// Best pure deviation value minus `values`, per player.
    pub gains: Vec<f64>,
}

/// Check that no player gains more than `tol` by committing to a fixed pure
/// strategy instead of following the device.
pub fn is_coarse_correlated_equilibrium(nf: &NormalFormGame, device: &CorrelatedDevice, tol: f64) -> Result<CceCheck> {
    let n = nf.num_players();
    let mut values = vec![0.0; n];
    let mut deviation: Vec<Vec<f64>> = nf.action_counts().iter().map(|&c| vec![0.0; c]).collect();
    for (profile, &q) in device.support.iter().zip(&device.weights) {
        if q == 0.0 {
            continue;
        }
        for (v, u) in values.iter_mut().zip(nf.expected_utility(profile)?) {
            *v += q * u;
        }
        for (p, dev) in deviation.iter_mut().enumerate() {
            for (d, x) in dev.iter_mut().zip(nf.action_values(p, profile)?) {
                *d += q * x;
            }
        }
    }
    let gains: Vec<f64> = deviation
        .iter()
        .zip(&values)
        .map(|(dev, v)| dev.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v)
        .collect();
    Ok(CceCheck { is_cce: gains.iter().all(|&g| g <= tol), values, gains })
}
