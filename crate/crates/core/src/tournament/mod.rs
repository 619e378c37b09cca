//! Round-robin evaluation of fixed agents with total bankroll and instant
//! runoff scoring.

mod evaluate;
mod report;
mod roster;

pub use evaluate::{exact_match_value, sampled_match_value, SampledValue, SAMPLE_CHUNK};
pub use report::{
    round_robin, round_robin_with, sampled_round_robin, score_iro, score_tbr, IroRound, Standing, TournamentReport,
    SCORE_TIE_TOLERANCE,
};
pub use roster::{build_kuhn_roster, kuhn_equilibrium, load_roster, load_strategy, Agent, RosterEntry};
