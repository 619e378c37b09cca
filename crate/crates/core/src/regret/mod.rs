//! Regret matching, vanilla CFR and External Sampling CFR.

mod cfr;
mod counters;
mod matching;
mod normal_form;
mod sampling;
mod state;

pub use cfr::{cfr_iterate, cfr_iterate_with};
pub use counters::DiagnosticCounters;
pub use matching::{regret_matching_policy, regret_matching_into};
pub use normal_form::NormalFormRm;
pub(crate) use sampling::sample_index;
pub use sampling::{external_sampling_iterate, external_sampling_iterate_with, stream_rng, StreamPurpose};
pub use state::{Checkpoint, ProfileMode, RngState, SolverState, CHECKPOINT_FORMAT};
