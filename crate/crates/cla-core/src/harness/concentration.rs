//! Concentration experiments: per-tuple histograms of an aggregation
//! body's values against the limiting profile.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::funcspace::bin_index;
use crate::harness::convergence::{validate_budgets, validate_ladder};
use crate::harness::tuples::select_tuples;
use crate::inference::{histogram_profile, ProbMethod};
use crate::logic::{Formula, IdentityPattern, Var};
use crate::measure::{sample_structure, DensityModel};
use crate::rng::derive_seed;

/// A concentration experiment for one aggregation body.
#[derive(Debug, Clone)]
pub struct ConcentrationSpec {
    /// Aggregation-free body; free variables are the tuple variables plus
    /// the aggregated one.
    pub inner: Formula,
    /// The tuple variables.
    pub variables: Vec<Var>,
    /// The aggregated variable.
    pub agg_var: Var,
    pub pattern: IdentityPattern,
    /// Histogram bin count `M`.
    pub bins: usize,
    /// Per-bin tolerance around the profile.
    pub delta: f64,
    pub ladder: Vec<usize>,
    pub structures: usize,
    pub seed: u64,
    /// Integration method for the limiting profile.
    pub method: ProbMethod,
    pub max_tuples: u64,
    pub record_timings: bool,
}

impl ConcentrationSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.inner.is_aggregation_free() {
            return Err(Error::NotAggregationFree);
        }
        if self.variables.contains(&self.agg_var) {
            return Err(Error::Config(format!(
                "aggregated variable `{}` is also a tuple variable",
                self.agg_var
            )));
        }
        for v in self.inner.free_vars() {
            if v != self.agg_var && !self.variables.contains(&v) {
                return Err(Error::Config(format!(
                    "free variable `{v}` is neither a tuple variable nor the aggregated one"
                )));
            }
        }
        if self.pattern.size() != self.variables.len() {
            return Err(Error::Config(format!(
                "pattern covers {} positions but the tuple has {} variables",
                self.pattern.size(),
                self.variables.len()
            )));
        }
        if self.bins == 0 {
            return Err(Error::Config("at least one histogram bin".into()));
        }
        if !self.delta.is_finite() || self.delta < 0.0 {
            return Err(Error::Config(format!(
                "bin tolerance {} is not a nonnegative number",
                self.delta
            )));
        }
        validate_ladder(&self.ladder, self.variables.len())?;
        validate_budgets(self.structures, self.max_tuples)
    }
}

/// One ladder rung of a concentration experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub samples: usize,
    pub tuples: u64,
    pub subsampled: bool,
    /// Fraction of structures in which every tuple's bin proportions lie
    /// within delta of the profile.
    pub pass_freq: f64,
    /// Largest observed |proportion - profile| over all bins and tuples.
    pub max_deviation: f64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub inner: String,
    pub bins: usize,
    pub delta: f64,
    /// Limiting bin profile the empirical histograms are compared against.
    pub profile: Vec<f64>,
    pub seed: u64,
    pub tuple_cap: u64,
    pub rows: Vec<ConcentrationRow>,
}

impl ConcentrationReport {
    /// CSV schema: `n,samples,pass_freq,max_deviation,wall_ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,samples,pass_freq,max_deviation,wall_ms\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.n, row.samples, row.pass_freq, row.max_deviation, row.wall_ms
            );
        }
        out
    }
}

/// Runs the experiment: computes the limiting profile once, then for each
/// domain size checks, per structure and per tuple, whether the empirical
/// bin proportions of the body's values at the remaining elements stay
/// within delta of the profile. Deterministic given one
/// [`ConcentrationSpec`].
pub fn run_concentration(
    model: &DensityModel,
    spec: &ConcentrationSpec,
) -> Result<ConcentrationReport> {
    spec.validate()?;
    let mut declared = spec.variables.clone();
    declared.push(spec.agg_var.clone());
    let extended = spec.pattern.extend_fresh();
    let profile = histogram_profile(
        model,
        &spec.inner,
        &declared,
        &extended,
        spec.bins,
        spec.method,
        derive_seed(spec.seed, "profile"),
    )?;
    let evaluator = Evaluator::new(model.signature(), &spec.inner, &declared)?;

    let mut rows = Vec::with_capacity(spec.ladder.len());
    for &n in &spec.ladder {
        let started = Instant::now();
        let (tuples, subsampled) = select_tuples(&spec.pattern, n, spec.max_tuples, spec.seed);

        let per_structure: Vec<(bool, f64)> = (0..spec.structures)
            .into_par_iter()
            .map(|trial| {
                let structure = sample_structure(model, n, spec.seed, trial as u64)?;
                let mut pass = true;
                let mut worst = 0.0f64;
                let mut assignment = vec![0usize; declared.len()];
                let mut counts = vec![0u64; spec.bins];
                for tuple in &tuples {
                    assignment[..tuple.len()].copy_from_slice(tuple);
                    counts.iter_mut().for_each(|c| *c = 0);
                    let mut total = 0u64;
                    for b in 0..n {
                        if tuple.contains(&b) {
                            continue;
                        }
                        *assignment.last_mut().expect("nonempty") = b;
                        let v = evaluator.eval(&structure, &assignment)?;
                        counts[bin_index(v, spec.bins)] += 1;
                        total += 1;
                    }
                    if total == 0 {
                        return Err(Error::EmptyAggregation);
                    }
                    for (count, alpha) in counts.iter().zip(&profile) {
                        let deviation = (*count as f64 / total as f64 - alpha).abs();
                        worst = worst.max(deviation);
                        if deviation > spec.delta {
                            pass = false;
                        }
                    }
                }
                Ok((pass, worst))
            })
            .collect::<Result<_>>()?;

        let pass_count = per_structure.iter().filter(|r| r.0).count();
        let max_deviation = per_structure.iter().fold(0.0f64, |acc, r| acc.max(r.1));
        rows.push(ConcentrationRow {
            n,
            samples: spec.structures,
            tuples: tuples.len() as u64,
            subsampled,
            pass_freq: pass_count as f64 / spec.structures as f64,
            max_deviation,
            wall_ms: if spec.record_timings {
                started.elapsed().as_millis() as u64
            } else {
                0
            },
        });
    }

    Ok(ConcentrationReport {
        inner: spec.inner.to_string(),
        bins: spec.bins,
        delta: spec.delta,
        profile,
        seed: spec.seed,
        tuple_cap: spec.max_tuples,
        rows,
    })
}
