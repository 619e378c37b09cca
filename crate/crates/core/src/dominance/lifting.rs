use super::actions::{action_dominance_certificate, ActionRestriction, DEFAULT_ACTION_CAP};
use super::report::DominanceMode;
use super::lp::LP_TOLERANCE;
use crate::analysis::{expected_utility, own_reach_between};
use crate::error::{invalid_input, Error, Result};
use crate::game::{ExtensiveFormGame, InfosetId, PureStrategies, StrategyProfile, DEFAULT_PROFILE_CAP};

/// A strategy built to weakly dominate one that plays a weakly dominated action.
#[derive(Clone, Debug)]
pub struct WeakStrategyWitness {
    /// True when the constructed strategy never does worse against any
    /// opponent pure profile and does strictly better against at least one.
    pub holds: bool,
    /// σ_i'' on the owner's information sets; other entries copy the input.
    pub dominating: StrategyProfile,
    /// Smallest and largest u_i(σ'', s_{-i}) − u_i(σ, s_{-i}) over opponent pure profiles.
    pub min_gain: f64,
    pub max_gain: f64,
}

/// Own reach of `sigma` from the root to `infoset`.
fn own_reach(game: &ExtensiveFormGame, sigma: &StrategyProfile, infoset: InfosetId) -> f64 {
    let set = game.infoset(infoset);
    game.own_sequence(set.nodes[0], set.player)
        .iter()
        .map(|&(j, a)| sigma.prob(j, a))
        .product()
}

/// Given a weakly dominated action (I, a) and a strategy that reaches I and
/// plays a there, build the dominating strategy that replaces the part of
/// the play routed through a by the action's dominating mixture, and check
/// it against every opponent pure profile.
pub fn check_weak_action_implies_weak_strategy(
    game: &ExtensiveFormGame,
    infoset: InfosetId,
    action: usize,
    sigma: &StrategyProfile,
) -> Result<WeakStrategyWitness> {
    sigma.validate(game)?;
    if infoset >= game.infosets().len() || action >= game.infoset(infoset).num_actions() {
        return Err(invalid_input(format!("no action {action} at infoset {infoset}")));
    }
    let player = game.infoset(infoset).player;
    let p_a = sigma.prob(infoset, action);
    if own_reach(game, sigma, infoset) * p_a <= 0.0 {
        return Err(invalid_input("the strategy must reach the information set and play the action"));
    }
    let dominated = action_dominance_certificate(
        game,
        infoset,
        action,
        DominanceMode::Weak,
        &ActionRestriction::full(game),
        DEFAULT_ACTION_CAP,
    )?
    .ok_or_else(|| invalid_input("the action is not weakly dominated"))?;

    // σ̂: σ with the action removed at I
    let mut hat = sigma.clone();
    let rest = 1.0 - p_a;
    let n = game.infoset(infoset).num_actions();
    let hat_dist: Vec<f64> = (0..n)
        .map(|b| match (b == action, rest > 0.0) {
            (true, _) => 0.0,
            (false, true) => sigma.prob(infoset, b) / rest,
            (false, false) => 1.0 / (n - 1) as f64,
        })
        .collect();
    hat.set(infoset, hat_dist);

    // realization weights of the dominating mixture inside D(I)
    let depth = game.infoset(infoset).sequence_depth;
    let subtree = &dominated.subtree;
    let position = |j: InfosetId| subtree.iter().position(|&x| x == j);
    let realization = |j: InfosetId, b: Option<usize>| -> f64 {
        let seq = game.own_sequence(game.infoset(j).nodes[0], player);
        dominated
            .mixture
            .iter()
            .filter(|(choices, _)| {
                seq[depth..].iter().all(|&(k, c)| position(k).is_some_and(|p| choices[p] == c))
                    && b.is_none_or(|b| position(j).is_some_and(|p| choices[p] == b))
            })
            .map(|(_, w)| w)
            .sum()
    };

    let mut dominating = sigma.clone();
    for &j in subtree {
        let hat_reach = own_reach_between(game, &hat, infoset, j);
        let denom = p_a * realization(j, None) + rest * hat_reach;
        if denom <= 0.0 {
            continue;
        }
        let dist = (0..game.infoset(j).num_actions())
            .map(|b| (p_a * realization(j, Some(b)) + rest * hat_reach * hat.prob(j, b)) / denom)
            .collect();
        dominating.set(j, dist);
    }

    let (min_gain, max_gain) = compare_against_pure_opponents(game, player, sigma, &dominating)?;
    Ok(WeakStrategyWitness {
        holds: min_gain >= -LP_TOLERANCE && max_gain > LP_TOLERANCE,
        dominating,
        min_gain,
        max_gain,
    })
}

/// Range of u_i(candidate, s_{-i}) − u_i(base, s_{-i}) over opponent pure profiles.
pub fn compare_against_pure_opponents(
    game: &ExtensiveFormGame,
    player: usize,
    base: &StrategyProfile,
    candidate: &StrategyProfile,
) -> Result<(f64, f64)> {
    let opponents: Vec<PureStrategies> = (0..game.num_players())
        .filter(|&p| p != player)
        .map(|p| PureStrategies::new(game, p))
        .collect();
    let total = opponents
        .iter()
        .map(PureStrategies::count)
        .fold(1u128, |a, b| a.saturating_mul(b));
    if total > DEFAULT_PROFILE_CAP {
        return Err(Error::GameTooLarge { what: "opponent pure profiles".into(), count: total, cap: DEFAULT_PROFILE_CAP });
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mut k in 0..total as usize {
        let mut b = base.clone();
        let mut c = candidate.clone();
        for opp in &opponents {
            let n = opp.count() as usize;
            b = opp.apply(k % n, &b);
            c = opp.apply(k % n, &c);
            k /= n;
        }
        let gain = expected_utility(game, &c)[player] - expected_utility(game, &b)[player];
        lo = lo.min(gain);
        hi = hi.max(gain);
    }
    Ok((lo, hi))
}
