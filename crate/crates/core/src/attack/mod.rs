//! Attacks against observed transcripts and the statistics behind them.
//!
//! Every search takes an explicit work budget and fails with
//! [`AttackError::BudgetExceeded`] (carrying the estimated cost) instead of
//! running away on a large instance.

mod candidates;
mod frequency;
mod linear;
mod mitm;
mod montecarlo;
mod report;
pub mod stats;
pub mod zmod;

pub use candidates::{brute_force_recover, CandidateSet, KSubsets};
pub use frequency::{
    frequency_analysis, FrequencyMode, FrequencyOptions, FrequencyReport, FrequencyTable, Reference,
    TupleStat,
};
pub use linear::{
    ge_recover, ge_slack_recover, slack_system, zero_response_system, CongruenceSystem, GeOutcome,
    SlackOutcome,
};
pub use mitm::mitm_recover;
pub use montecarlo::{monte_carlo_full_rank, FullRankEstimate};
pub use report::{AttackReport, Work};

use thiserror::Error;

/// Default cap on enumerated candidates, elimination branches or probes.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error("attack needs about 2^{required_bits:.1} steps, budget is {budget}")]
    BudgetExceeded { required_bits: f64, budget: u64 },
    #[error("Z_{0} is not a field; elimination needs a prime modulus")]
    UnsupportedModulus(u32),
    #[error("system is underdetermined ({free} free variables, {solutions} binary solutions); observe more rounds")]
    Underdetermined { free: usize, solutions: usize },
    #[error("no weight-k binary vector satisfies the system; the transcript is inconsistent")]
    Inconsistent,
    #[error("{0}")]
    Input(String),
}
