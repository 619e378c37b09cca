use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Agent;
use crate::analysis::expected_utility;
use crate::error::Result;
use crate::game::{ExtensiveFormGame, NodeKind, StrategyProfile};
use crate::regret::{sample_index, stream_rng, StreamPurpose};

/// Games simulated per random stream in the sampled evaluator. Fixed so that
/// results do not depend on the number of worker threads.
pub const SAMPLE_CHUNK: u64 = 1 << 14;

/// Expected chips per seat when `seats[p]` plays seat p.
pub fn exact_match_value(game: &ExtensiveFormGame, seats: &[&Agent]) -> Result<Vec<f64>> {
    let profiles: Vec<&StrategyProfile> = seats.iter().map(|a| &a.profile).collect();
    let joint = StrategyProfile::from_seats(game, &profiles)?;
    Ok(expected_utility(game, &joint))
}

/// Monte Carlo estimate of per-seat winnings.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledValue {
    pub games: u64,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
}

fn play(game: &ExtensiveFormGame, joint: &StrategyProfile, rng: &mut ChaCha8Rng) -> usize {
    let mut h = 0;
    loop {
        let node = game.node(h);
        h = match &node.kind {
            NodeKind::Terminal { .. } => return h,
            NodeKind::Chance { probs } => node.children[sample_index(rng, probs)],
            NodeKind::Decision { infoset, .. } => node.children[sample_index(rng, joint.get(*infoset))],
        };
    }
}

/// Play `games` independent hands with seats fixed as given. Chunk k of
/// [`SAMPLE_CHUNK`] hands draws from evaluation stream k of `seed`.
pub fn sampled_match_value(game: &ExtensiveFormGame, seats: &[&Agent], games: u64, seed: u64) -> Result<SampledValue> {
    let profiles: Vec<&StrategyProfile> = seats.iter().map(|a| &a.profile).collect();
    let joint = StrategyProfile::from_seats(game, &profiles)?;
    let n = game.num_players();
    let chunks = games.div_ceil(SAMPLE_CHUNK);
    let (sum, sq) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as usize, StreamPurpose::Evaluation);
            let count = SAMPLE_CHUNK.min(games - k * SAMPLE_CHUNK);
            let mut sum = vec![0.0; n];
            let mut sq = vec![0.0; n];
            for _ in 0..count {
                let z = play(game, &joint, &mut rng);
                for (p, u) in game.node(z).utilities().unwrap_or(&[]).iter().enumerate() {
                    sum[p] += u;
                    sq[p] += u * u;
                }
            }
            (sum, sq)
        })
        .collect::<Vec<_>>()
        .into_iter()
        // summed in chunk order so the result does not depend on thread count
        .fold((vec![0.0; n], vec![0.0; n]), |(mut a, mut b), (c, d)| {
            a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
            b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
            (a, b)
        });
    let g = games.max(1) as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / g).collect();
    let std_error = sq
        .iter()
        .zip(&mean)
        .map(|(s, m)| {
            let var = (s / g - m * m).max(0.0) * g / (g - 1.0).max(1.0);
            (var / g).sqrt()
        })
        .collect();
    Ok(SampledValue { games, mean, std_error })
}

/// Seed for one lineup, derived from the run seed.
pub(crate) fn lineup_seed(seed: u64, lineup: &[usize]) -> u64 {
    use rand::RngCore;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = lineup.iter().fold(0u64, |acc, &a| acc.wrapping_mul(1_000_003).wrapping_add(a as u64 + 1));
    rng.set_stream(tag);
    rng.next_u64()
}
