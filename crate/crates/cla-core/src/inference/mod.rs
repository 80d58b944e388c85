//! Asymptotic inference: interval probabilities of aggregation-free
//! formulas, independence and histogram diagnostics, aggregation
//! elimination, and limit probabilities.

mod eliminate;
mod histogram;
mod prob;

pub use eliminate::{
    eliminate, eliminate_once, limit_prob, DTrace, EliminationConfig, EliminationResult,
    LimitProbability,
};
pub use histogram::histogram_profile;
pub use prob::{independence_gap, prob_in_interval, Interval, ProbMethod, ProbabilityEstimate};
