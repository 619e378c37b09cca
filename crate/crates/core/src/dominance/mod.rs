//! Dominated strategies and actions, iterated removal, and coarse
//! correlated equilibrium checks.

mod actions;
mod cce;
pub mod lp;
mod lifting;
mod report;
mod strategies;

pub use actions::{
    action_dominance_certificate, detect_dominated_actions, detect_dominated_actions_restricted,
    iterated_action_removal, iterated_action_removal_capped, ActionRestriction, DominatedAction, DEFAULT_ACTION_CAP,
};
pub use cce::{is_coarse_correlated_equilibrium, CceCheck, CorrelatedDevice};
pub use lifting::{check_weak_action_implies_weak_strategy, compare_against_pure_opponents, WeakStrategyWitness};
pub use report::{DominanceMode, DominanceReport, Removal, ReportTarget};
pub use strategies::{iterated_strategy_removal, lp_is_dominated, survivors_in_random_order, Certificate};
