//! Continuous logic with aggregation functions over random relational
//! structures whose relations take values in `[0, 1]`.
//!
//! The crate provides, bottom to top:
//!
//! * [`logic`] — signatures, formulas (constants, equalities, atoms,
//!   continuous connectives, aggregations binding one variable), identity
//!   patterns on tuple positions, a text parser, and the two normal forms
//!   (flattening into a single connective over distinct atoms, and reduction
//!   under an identity pattern).
//! * [`funcspace`] — the space of continuous connectives
//!   `C : [0,1]^k -> [0,1]` (a closed expression language plus
//!   grid-tabulated functions) and aggregation functions (`min`, `max`,
//!   arithmetic mean, plus named external test subjects), with an empirical
//!   continuity falsifier.
//! * [`measure`] — piecewise-polynomial densities on `[0,1]`, the product
//!   measure over all cells `(R, tuple)`, the canonical flat cell layout,
//!   and a deterministic structure sampler.
//! * [`eval`] — the semantics: the value of a formula on a structure under
//!   an assignment.
//! * [`inference`] — interval probabilities of aggregation-free formulas via
//!   the product-density integral, independence diagnostics, histogram
//!   profiles, and asymptotic elimination of aggregation functions.
//! * [`harness`] — reproducible convergence/concentration experiments over a
//!   ladder of domain sizes, with JSON and CSV reports.

pub mod error;
pub mod eval;
pub mod funcspace;
pub mod harness;
pub mod inference;
pub mod logic;
pub mod measure;
pub mod rng;

pub use error::{Error, Result};
