//! Brute-force dominance oracles that share no code with the LP solver.
//!
//! A verdict is `Dominated` when a small grid mixture (at most two pure
//! strategies) is checked to dominate, and `NotDominated` when a belief over
//! opponent pure strategies is found under which the target is at least as
//! good as every alternative.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regret_core::analysis::{counterfactual_value, Reach};
use regret_core::dominance::DominanceMode;
use regret_core::game::{ExtensiveFormGame, InfosetId, NormalFormGame, PureStrategies, StrategyProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dominated,
    NotDominated,
    Undecided,
}

const GRID: usize = 24;
const TOL: f64 = 1e-9;

/// Mixtures of at most two candidates on a grid.
fn grid_mixtures(n: usize) -> impl Iterator<Item = Vec<(usize, f64)>> {
    let singles = (0..n).map(|a| vec![(a, 1.0)]);
    let pairs = (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (1..GRID).map(move |k| vec![(a, k as f64 / GRID as f64), (b, 1.0 - k as f64 / GRID as f64)]))
    });
    singles.chain(pairs)
}

/// Candidate beliefs over `n` opponent columns: point masses, two-point grid
/// mixtures, random Dirichlet draws and, when given, random behaviour
/// strategies pushed through the opponent's pure strategies.
pub fn beliefs(n: usize, factors: Option<(&ExtensiveFormGame, &PureStrategies)>, seed: u64, fully_mixed: bool) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for o in 0..n {
        let mut y = vec![0.0; n];
        y[o] = 1.0;
        out.push(y);
    }
    for a in 0..n.min(40) {
        for b in a + 1..n.min(40) {
            for k in [0.25, 0.5, 0.75] {
                let mut y = vec![0.0; n];
                y[a] = k;
                y[b] = 1.0 - k;
                out.push(y);
            }
        }
    }
    for _ in 0..300 {
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let total: f64 = raw.iter().sum();
        out.push(raw.into_iter().map(|x| x / total).collect());
    }
    if let Some((game, pure)) = factors {
        for k in 0..600 {
            // behaviour strategy: random, or near a random pure strategy
            let sharp = k % 2 == 1;
            let behaviour: Vec<Vec<f64>> = pure
                .infosets
                .iter()
                .map(|&j| {
                    let m = game.infoset(j).num_actions();
                    let raw: Vec<f64> = if sharp {
                        let pick = rng.gen_range(0..m);
                        (0..m).map(|a| if a == pick { 1.0 } else { 1e-3 }).collect()
                    } else {
                        (0..m).map(|_| rng.gen::<f64>() + 1e-3).collect()
                    };
                    let t: f64 = raw.iter().sum();
                    raw.into_iter().map(|x| x / t).collect()
                })
                .collect();
            let y = (0..n)
                .map(|o| {
                    pure.choices(o).iter().enumerate().map(|(k, &c)| behaviour[k][c]).product::<f64>()
                })
                .collect();
            out.push(y);
        }
    }
    if fully_mixed {
        let eps = 1e-6;
        out = out.into_iter().map(|y| y.iter().map(|p| (1.0 - eps) * p + eps / n as f64).collect()).collect();
    }
    out
}

fn dot(y: &[f64], row: &[f64]) -> f64 {
    y.iter().zip(row).map(|(a, b)| a * b).sum()
}

/// Core decision on a payoff table: `targets` and `candidates` are rows of
/// values against opponent columns. Dominance asks for one candidate mixture
/// beating every (target, column) pair.
fn decide(
    targets: &[Vec<f64>],
    candidates: &[Vec<f64>],
    mode: DominanceMode,
    beliefs_any: &[Vec<f64>],
    beliefs_mixed: &[Vec<f64>],
) -> Verdict {
    let cols = targets[0].len();
    let best_target: Vec<f64> = (0..cols).map(|o| targets.iter().map(|t| t[o]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let worst_target: Vec<f64> = (0..cols).map(|o| targets.iter().map(|t| t[o]).fold(f64::INFINITY, f64::min)).collect();
    for mix in grid_mixtures(candidates.len()) {
        let q: Vec<f64> = (0..cols).map(|o| mix.iter().map(|&(c, w)| w * candidates[c][o]).sum()).collect();
        let ok = match mode {
            DominanceMode::Strict => (0..cols).all(|o| q[o] > best_target[o] + TOL),
            DominanceMode::Weak => {
                (0..cols).all(|o| q[o] >= best_target[o] - TOL) && (0..cols).any(|o| q[o] > worst_target[o] + TOL)
            }
        };
        if ok {
            return Verdict::Dominated;
        }
    }
    let beats = |y: &Vec<f64>, slack: f64| {
        let t = targets.iter().map(|r| dot(y, r)).fold(f64::NEG_INFINITY, f64::max);
        let c = candidates.iter().map(|r| dot(y, r)).fold(f64::NEG_INFINITY, f64::max);
        c <= t + slack
    };
    match mode {
        DominanceMode::Strict => {
            if beliefs_any.iter().any(|y| beats(y, 1e-12)) {
                return Verdict::NotDominated;
            }
        }
        DominanceMode::Weak => {
            if beliefs_any.iter().any(|y| beats(y, -TOL)) {
                return Verdict::NotDominated;
            }
            // a fully mixed belief with the target as a best response leaves
            // no room for a strict gain when all targets coincide
            let identical = (0..cols).all(|o| best_target[o] - worst_target[o] <= 1e-12);
            if identical && beliefs_mixed.iter().any(|y| beats(y, 1e-12)) {
                return Verdict::NotDominated;
            }
        }
    }
    Verdict::Undecided
}

/// Oracle for a pure strategy of a two-player matrix game.
pub fn strategy_oracle(
    nf: &NormalFormGame,
    player: usize,
    target: usize,
    mode: DominanceMode,
    factors: Option<(&ExtensiveFormGame, &PureStrategies)>,
) -> Verdict {
    assert_eq!(nf.num_players(), 2);
    let opp = 1 - player;
    let (n, m) = (nf.action_counts()[player], nf.action_counts()[opp]);
    let row = |s: usize| -> Vec<f64> {
        (0..m)
            .map(|o| {
                let mut p = vec![0; 2];
                p[player] = s;
                p[opp] = o;
                nf.utility(player, &p)
            })
            .collect()
    };
    let targets = vec![row(target)];
    let candidates: Vec<Vec<f64>> = (0..n).filter(|&s| s != target).map(row).collect();
    if candidates.is_empty() {
        return Verdict::NotDominated;
    }
    let any = beliefs(m, factors, 11 + target as u64, false);
    let mixed = beliefs(m, factors, 97 + target as u64, true);
    let mut mixed_all = mixed;
    mixed_all.extend(any.iter().map(|y| y.iter().map(|p| 0.999999 * p + 1e-6 / m as f64).collect()));
    let verdict = decide(&targets, &candidates, mode, &any, &mixed_all).or_weak_best_response(&targets[0], &candidates, mode, &mixed_all);
    match (verdict, factors) {
        (Verdict::Undecided, Some((game, pure))) => {
            let levels: &[f64] = match mode {
                DominanceMode::Strict => &[0.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75, 1.0],
                DominanceMode::Weak => &[0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75],
            };
            let beats = |y: &Vec<f64>| {
                let t = dot(y, &targets[0]);
                candidates.iter().all(|c| dot(y, c) <= t + 1e-12)
            };
            if grid_behaviour_beliefs(game, pure, levels).any(|y| beats(&y)) {
                Verdict::NotDominated
            } else {
                Verdict::Undecided
            }
        }
        (v, _) => v,
    }
}

/// Beliefs induced by opponent behaviour strategies whose action
/// probabilities all come from `levels`.
fn grid_behaviour_beliefs<'a>(
    game: &'a ExtensiveFormGame,
    pure: &'a PureStrategies,
    levels: &'a [f64],
) -> impl Iterator<Item = Vec<f64>> + 'a {
    // per infoset: every distribution with entries from `levels`
    let local: Vec<Vec<Vec<f64>>> = pure
        .infosets
        .iter()
        .map(|&j| {
            let m = game.infoset(j).num_actions();
            let mut out: Vec<Vec<f64>> = vec![vec![]];
            for _ in 0..m {
                out = out.into_iter().flat_map(|d| levels.iter().map(move |&l| [d.clone(), vec![l]].concat())).collect();
            }
            out.retain(|d| (d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            out
        })
        .collect();
    let sizes: Vec<usize> = local.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let n = pure.count() as usize;
    (0..total).map(move |mut k| {
        let pick: Vec<&Vec<f64>> = sizes
            .iter()
            .zip(&local)
            .map(|(&s, dists)| {
                let d = &dists[k % s];
                k /= s;
                d
            })
            .collect();
        (0..n).map(|o| pure.choices(o).iter().zip(&pick).map(|(&c, d)| d[c]).product()).collect()
    })
}

trait WeakFallback {
    fn or_weak_best_response(self, target: &[f64], candidates: &[Vec<f64>], mode: DominanceMode, mixed: &[Vec<f64>]) -> Verdict;
}

impl WeakFallback for Verdict {
    /// For a single target, a best response to a fully mixed belief is never
    /// weakly dominated.
    fn or_weak_best_response(self, target: &[f64], candidates: &[Vec<f64>], mode: DominanceMode, mixed: &[Vec<f64>]) -> Verdict {
        if self != Verdict::Undecided || mode != DominanceMode::Weak {
            return self;
        }
        let t = |y: &Vec<f64>| dot(y, target);
        if mixed.iter().any(|y| candidates.iter().all(|c| dot(y, c) <= t(y) + 1e-12)) {
            Verdict::NotDominated
        } else {
            Verdict::Undecided
        }
    }
}

/// Oracle for action `action` at `infoset` in a two-player game, evaluating
/// counterfactual values through the full game tree.
pub fn action_oracle(game: &ExtensiveFormGame, infoset: InfosetId, action: usize, mode: DominanceMode) -> Verdict {
    assert_eq!(game.num_players(), 2);
    let player = game.infoset(infoset).player;
    let opp = PureStrategies::new(game, 1 - player);
    let m = opp.count() as usize;
    let below = game.descendants(infoset);
    let counts: Vec<usize> = below.iter().map(|&j| game.infoset(j).num_actions()).collect();
    let total: usize = counts.iter().product();
    let conts: Vec<Vec<usize>> = (0..total)
        .map(|mut k| {
            counts
                .iter()
                .map(|&c| {
                    let x = k % c;
                    k /= c;
                    x
                })
                .collect()
        })
        .collect();
    let base = StrategyProfile::uniform(game);
    let opp_profiles: Vec<StrategyProfile> = (0..m).map(|o| opp.apply(o, &base)).collect();
    let reaching: Vec<bool> = opp_profiles
        .iter()
        .map(|p| {
            let reach = Reach::compute(game, p);
            game.infoset(infoset).nodes.iter().map(|&h| reach.others(h, player)).sum::<f64>() > 0.0
        })
        .collect();
    let cols: Vec<usize> = match mode {
        DominanceMode::Strict => (0..m).filter(|&o| reaching[o]).collect(),
        DominanceMode::Weak => (0..m).collect(),
    };
    if cols.is_empty() {
        return Verdict::NotDominated;
    }
    let value = |cont: &[usize], o: usize| -> f64 {
        let mut p = opp_profiles[o].clone();
        for (&j, &a) in below.iter().zip(cont) {
            p = p.with_action(j, a);
        }
        counterfactual_value(game, &p, infoset, player).unwrap()
    };
    let own = below.iter().position(|&j| j == infoset).unwrap();
    let mut targets = Vec::new();
    let mut candidates = Vec::new();
    for c in &conts {
        let row: Vec<f64> = cols.iter().map(|&o| value(c, o)).collect();
        if c[own] == action {
            targets.push(row);
        } else {
            candidates.push(row);
        }
    }
    let k = cols.len();
    let any = beliefs(k, None, 5 + infoset as u64, false);
    let mixed = beliefs(k, None, 55 + infoset as u64, true);
    decide(&targets, &candidates, mode, &any, &mixed)
}
