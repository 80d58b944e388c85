//! Continuous connectives `C : [0,1]^k -> [0,1]` and aggregation functions
//! `F : [0,1]^{<omega} -> [0,1]`.
//!
//! Connectives are either expression trees over a closed set of continuous
//! primitives (continuity holds by construction) or grid-tabulated functions
//! evaluated by multilinear interpolation. Aggregators are `min`, `max`,
//! the arithmetic mean, or named external functions used as test subjects
//! for the continuity falsifier.

mod aggregator;
mod connective;
mod continuity;
mod registry;
mod tabulated;

pub use aggregator::{kahan_mean, Aggregator, ExternalAggregator};
pub use connective::{Connective, Expr};
pub use continuity::{
    bin_index, bin_proportions, check_histogram_conditions, check_pointwise_conditions,
    falsify_continuity, ContinuityParams, ContinuityReport, ContinuityVerdict, ContinuityWitness,
    WitnessKind,
};
pub use registry::{avg_k, builtin, const_conn, flat_conn, max_k, min_k, tabulated_conn};
pub use tabulated::{uniform_grid, TabulatedConnective};
