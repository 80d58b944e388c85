//! Desk-scale empirical verification of the convergence law: experiment
//! configs, the convergence and concentration runners, and their
//! JSON/CSV reports.

mod concentration;
mod config;
mod convergence;
mod tuples;

pub use concentration::{
    run_concentration, ConcentrationReport, ConcentrationRow, ConcentrationSpec,
};
pub use config::ExperimentConfig;
pub use convergence::{run_convergence, ConvergenceReport, ConvergenceRow, ConvergenceSpec};
