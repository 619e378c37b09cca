use crate::error::{invalid_input, Result};

/// Regret-matching policy for one decision point.
///
/// Positive regrets are normalized; when none is positive the policy is
/// uniform over the actions with maximal regret.
pub fn regret_matching_policy(regrets: &[f64]) -> Result<Vec<f64>> {
    if regrets.is_empty() {
        return Err(invalid_input("regret vector is empty"));
    }
    if regrets.iter().any(|r| !r.is_finite()) {
        return Err(invalid_input("regret vector has a non-finite entry"));
    }
    let mut out = vec![0.0; regrets.len()];
    regret_matching_into(regrets, &mut out);
    Ok(out)
}

/// In-place variant; returns true when no regret was positive.
pub fn regret_matching_into(regrets: &[f64], out: &mut [f64]) -> bool {
    let positive: f64 = regrets.iter().filter(|&&r| r > 0.0).sum();
    if positive > 0.0 {
        for (o, &r) in out.iter_mut().zip(regrets) {
            *o = if r > 0.0 { r / positive } else { 0.0 };
        }
        return false;
    }
    let max = regrets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ties = regrets.iter().filter(|&&r| r == max).count() as f64;
    for (o, &r) in out.iter_mut().zip(regrets) {
        *o = if r == max { 1.0 / ties } else { 0.0 };
    }
    true
}
