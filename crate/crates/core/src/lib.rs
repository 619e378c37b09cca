//! Regret minimization for finite games: counterfactual regret minimization,
//! regret matching, iterated dominance, Nash-gap analysis and round-robin
//! tournaments.

pub mod analysis;
pub mod dominance;
mod error;
pub mod game;
pub mod regret;
pub mod tournament;

pub use error::{Error, Result};
