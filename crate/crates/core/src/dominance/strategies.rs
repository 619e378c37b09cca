use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lp::{LinearProgram, LpOutcome, Relation, LP_TOLERANCE};
use super::report::{DominanceMode, DominanceReport, Removal, ReportTarget};
use crate::error::{invalid_input, Error, Result};
use crate::game::NormalFormGame;

/// A dominating mixture over candidate columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// (candidate index, weight) pairs with positive weight.
    pub weights: Vec<(usize, f64)>,
    /// Smallest advantage over the dominated side across all constraints.
    pub min_margin: f64,
    /// Largest advantage; positive for a weak certificate.
    pub max_margin: f64,
}

fn margins(matrix: &[Vec<f64>], rhs: &[f64], q: &[f64]) -> (f64, f64) {
    matrix.iter().zip(rhs).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (row, r)| {
        let m = row.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() - r;
        (lo.min(m), hi.max(m))
    })
}

/// Search for a mixture q over the columns of `matrix` with
/// Σ_s q_s·M[k][s] ≥ rhs[k] for every row k, strictly everywhere (strict mode)
/// or with at least one strict row (weak mode).
pub(crate) fn dominating_mixture(matrix: &[Vec<f64>], rhs: &[f64], mode: DominanceMode) -> Result<Option<Certificate>> {
    let cols = matrix.first().map_or(0, Vec::len);
    if cols == 0 || matrix.is_empty() {
        return Ok(None);
    }
    let q = match mode {
        DominanceMode::Strict => {
            let lowest = matrix
                .iter()
                .flatten()
                .chain(rhs)
                .cloned()
                .fold(f64::INFINITY, f64::min);
            let shift = 1.0 - lowest;
            let mut lp = LinearProgram::new(vec![1.0; cols]);
            for (row, r) in matrix.iter().zip(rhs) {
                lp.add(row.iter().map(|x| x + shift).collect(), Relation::Ge, r + shift);
            }
            match lp.solve()? {
                LpOutcome::Optimal { x, value } if value < 1.0 - LP_TOLERANCE && value > 0.0 => {
                    x.iter().map(|p| p / value).collect::<Vec<f64>>()
                }
                LpOutcome::Optimal { .. } => return Ok(None),
                other => return Err(Error::InvalidState(format!("dominance program ended {other:?}"))),
            }
        }
        DominanceMode::Weak => {
            let rows = matrix.len();
            let mut objective = vec![0.0; cols];
            objective.extend(std::iter::repeat(-1.0).take(rows));
            let mut lp = LinearProgram::new(objective);
            for (k, (row, r)) in matrix.iter().zip(rhs).enumerate() {
                let mut coeffs = row.clone();
                coeffs.extend((0..rows).map(|j| if j == k { -1.0 } else { 0.0 }));
                lp.add(coeffs, Relation::Eq, *r);
            }
            let mut simplex = vec![1.0; cols];
            simplex.extend(std::iter::repeat(0.0).take(rows));
            lp.add(simplex, Relation::Eq, 1.0);
            match lp.solve()? {
                LpOutcome::Optimal { x, value } if -value > LP_TOLERANCE => x[..cols].to_vec(),
                LpOutcome::Optimal { .. } | LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::InvalidState("weak dominance program is unbounded".into())),
            }
        }
    };
    let (min_margin, max_margin) = margins(matrix, rhs, &q);
    let accepted = match mode {
        DominanceMode::Strict => min_margin > LP_TOLERANCE,
        DominanceMode::Weak => min_margin >= -LP_TOLERANCE && max_margin > LP_TOLERANCE,
    };
    if !accepted {
        return Ok(None);
    }
    let weights = q.into_iter().enumerate().filter(|&(_, w)| w > LP_TOLERANCE).collect();
    Ok(Some(Certificate { weights, min_margin, max_margin }))
}

fn opponent_profiles(restriction: &[Vec<usize>], player: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; restriction.len()]];
    for (p, survivors) in restriction.iter().enumerate() {
        if p == player {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|prefix| {
                survivors.iter().map(move |&a| {
                    let mut next = prefix.clone();
                    next[p] = a;
                    next
                })
            })
            .collect();
    }
    out
}

/// Whether the mixed strategy `target` of `player` is dominated by a mixture
/// of the player's surviving pure strategies, against every surviving
/// opponent profile. Certificate indices refer to the player's actions.
pub fn lp_is_dominated(
    nf: &NormalFormGame,
    player: usize,
    target: &[f64],
    mode: DominanceMode,
    restriction: &[Vec<usize>],
) -> Result<Option<Certificate>> {
    if player >= nf.num_players() || target.len() != nf.action_counts()[player] {
        return Err(invalid_input("target does not match the player's actions"));
    }
    if restriction.len() != nf.num_players() || restriction.iter().any(Vec::is_empty) {
        return Err(invalid_input("every player needs a nonempty surviving set"));
    }
    let own = &restriction[player];
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for mut profile in opponent_profiles(restriction, player) {
        let mut row = Vec::with_capacity(own.len());
        for &s in own {
            profile[player] = s;
            row.push(nf.utility(player, &profile));
        }
        let mut t = 0.0;
        for (a, &w) in target.iter().enumerate() {
            if w != 0.0 {
                profile[player] = a;
                t += w * nf.utility(player, &profile);
            }
        }
        matrix.push(row);
        rhs.push(t);
    }
    Ok(dominating_mixture(&matrix, &rhs, mode)?.map(|mut c| {
        for (idx, _) in c.weights.iter_mut() {
            *idx = own[*idx];
        }
        c
    }))
}

fn pure(n: usize, a: usize) -> Vec<f64> {
    (0..n).map(|k| if k == a { 1.0 } else { 0.0 }).collect()
}

fn dominated_now(
    nf: &NormalFormGame,
    mode: DominanceMode,
    survivors: &[Vec<usize>],
) -> Result<Vec<(usize, usize, Certificate)>> {
    let mut found = Vec::new();
    for (player, own) in survivors.iter().enumerate() {
        if own.len() < 2 {
            continue;
        }
        for &s in own {
            let target = pure(nf.action_counts()[player], s);
            if let Some(cert) = lp_is_dominated(nf, player, &target, mode, survivors)? {
                found.push((player, s, cert));
            }
        }
    }
    Ok(found)
}

/// Remove every dominated pure strategy each round until none is left.
pub fn iterated_strategy_removal(nf: &NormalFormGame, mode: DominanceMode) -> Result<DominanceReport> {
    let mut survivors: Vec<Vec<usize>> = nf.action_counts().iter().map(|&n| (0..n).collect()).collect();
    let mut removals = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let found = dominated_now(nf, mode, &survivors)?;
        if found.is_empty() {
            break;
        }
        for (player, s, cert) in found {
            survivors[player].retain(|&x| x != s);
            let certificate: BTreeMap<String, f64> = cert
                .weights
                .iter()
                .map(|&(k, w)| (nf.action_labels(player)[k].clone(), w))
                .collect();
            removals.push(Removal {
                round,
                player,
                label: nf.action_labels(player)[s].clone(),
                strategy: Some(s),
                infoset: None,
                action: None,
                certificate,
                margin: cert.min_margin,
            });
        }
        if survivors.iter().any(Vec::is_empty) {
            return Err(Error::InvalidState("iterated removal emptied a strategy set".into()));
        }
    }
    Ok(DominanceReport {
        mode,
        target: ReportTarget::Strategies,
        removals,
        survivors: survivors
            .iter()
            .enumerate()
            .map(|(p, s)| s.iter().map(|&a| nf.action_labels(p)[a].clone()).collect())
            .collect(),
    })
}

/// Surviving pure strategies when dominated strategies are removed one at a
/// time in a seeded random order. Each step tests the survivors in shuffled
/// order and drops the first dominated one found.
pub fn survivors_in_random_order(nf: &NormalFormGame, mode: DominanceMode, seed: u64) -> Result<Vec<Vec<usize>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut survivors: Vec<Vec<usize>> = nf.action_counts().iter().map(|&n| (0..n).collect()).collect();
    'step: loop {
        let mut order: Vec<(usize, usize)> = survivors
            .iter()
            .enumerate()
            .filter(|(_, own)| own.len() > 1)
            .flat_map(|(p, own)| own.iter().map(move |&s| (p, s)))
            .collect();
        order.shuffle(&mut rng);
        for (player, s) in order {
            let target = pure(nf.action_counts()[player], s);
            if lp_is_dominated(nf, player, &target, mode, &survivors)?.is_some() {
                survivors[player].retain(|&x| x != s);
                continue 'step;
            }
        }
        return Ok(survivors);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_figure1_matrix, build_figure3_matrix};

    fn all(nf: &NormalFormGame) -> Vec<Vec<usize>> {
        nf.action_counts().iter().map(|&n| (0..n).collect()).collect()
    }

    #[test]
    fn figure1_c_is_strictly_dominated() {
        let nf = build_figure1_matrix();
        let cert = lp_is_dominated(&nf, 0, &[0.0, 0.0, 1.0], DominanceMode::Strict, &all(&nf)).unwrap().unwrap();
        let weight_of = |k: usize| cert.weights.iter().find(|w| w.0 == k).map_or(0.0, |w| w.1);
        assert!(weight_of(1) > 0.5);
        assert!(weight_of(2) < 1e-9);
        assert!(cert.min_margin > 0.0);
        assert!(lp_is_dominated(&nf, 0, &[1.0, 0.0, 0.0], DominanceMode::Strict, &all(&nf)).unwrap().is_none());
    }

    #[test]
    fn figure1_iterated() {
        let report = iterated_strategy_removal(&build_figure1_matrix(), DominanceMode::Strict).unwrap();
        assert_eq!(report.removals.len(), 1);
        assert_eq!(report.removals[0].label, "C");
        assert_eq!(report.survivors, vec![vec!["A".to_string(), "B".into()], vec!["a".into(), "b".into()]]);
    }

    #[test]
    fn figure3_even_mix_dominated_by_c() {
        let nf = build_figure3_matrix();
        let cert = lp_is_dominated(&nf, 0, &[0.5, 0.5, 0.0], DominanceMode::Strict, &all(&nf)).unwrap().unwrap();
        assert_eq!(cert.weights.len(), 1);
        assert_eq!(cert.weights[0].0, 2);
    }

    #[test]
    fn strategy_never_strictly_dominates_itself() {
        let nf = build_figure3_matrix();
        let only_a = vec![vec![0], vec![0, 1]];
        assert!(lp_is_dominated(&nf, 0, &[1.0, 0.0, 0.0], DominanceMode::Strict, &only_a).unwrap().is_none());
        assert!(lp_is_dominated(&nf, 0, &[1.0, 0.0, 0.0], DominanceMode::Weak, &only_a).unwrap().is_none());
    }

    #[test]
    fn dominant_action_removes_the_rest() {
        // prisoner's dilemma: defect is dominant for both
        let nf = NormalFormGame::new(
            "pd",
            vec![vec!["c".into(), "d".into()], vec!["c".into(), "d".into()]],
            vec![vec![3.0, 0.0, 5.0, 1.0], vec![3.0, 5.0, 0.0, 1.0]],
        )
        .unwrap();
        let report = iterated_strategy_removal(&nf, DominanceMode::Strict).unwrap();
        assert!(report.removals.iter().all(|r| r.round == 1 && r.label == "c"));
        assert_eq!(report.removals.len(), 2);
    }

    #[test]
    fn weak_needs_one_strict_column() {
        let nf = NormalFormGame::new(
            "w",
            vec![vec!["x".into(), "y".into()], vec!["l".into(), "r".into()]],
            vec![vec![1.0, 1.0, 1.0, 0.0], vec![0.0; 4]],
        )
        .unwrap();
        let r = all(&nf);
        assert!(lp_is_dominated(&nf, 0, &[0.0, 1.0], DominanceMode::Strict, &r).unwrap().is_none());
        let cert = lp_is_dominated(&nf, 0, &[0.0, 1.0], DominanceMode::Weak, &r).unwrap().unwrap();
        assert_eq!(cert.weights, vec![(0, 1.0)]);
        assert!(lp_is_dominated(&nf, 0, &[1.0, 0.0], DominanceMode::Weak, &r).unwrap().is_none());
    }
}
