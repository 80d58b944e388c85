//! Convergence-law experiments: does the eliminated formula track the
//! original across a ladder of domain sizes, and does the interval
//! membership frequency approach the predicted limit?

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::harness::tuples::select_tuples;
use crate::inference::{limit_prob, DTrace, EliminationConfig, Interval, ProbMethod};
use crate::logic::{Formula, IdentityPattern, Var};
use crate::measure::{sample_structure, DensityModel};

/// A convergence experiment over a ladder of domain sizes.
#[derive(Debug, Clone)]
pub struct ConvergenceSpec {
    pub formula: Formula,
    /// Declared tuple; must cover the formula's free variables.
    pub variables: Vec<Var>,
    pub pattern: IdentityPattern,
    pub interval: Interval,
    /// Strictly increasing domain sizes, each exceeding the tuple length.
    pub ladder: Vec<usize>,
    /// Structures sampled per domain size.
    pub structures: usize,
    /// Closeness threshold between original and eliminated values.
    pub epsilon: f64,
    pub seed: u64,
    pub method: ProbMethod,
    pub elimination: EliminationConfig,
    /// Tuple-enumeration cap; beyond it a uniform subsample is used.
    pub max_tuples: u64,
    /// Measure wall time per ladder rung. Off by default so that repeated
    /// runs of one configuration produce byte-identical reports.
    pub record_timings: bool,
}

pub(crate) fn validate_ladder(ladder: &[usize], tuple_len: usize) -> Result<()> {
    if ladder.is_empty() {
        return Err(Error::Config("the domain-size ladder is empty".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "the domain-size ladder must be strictly increasing".into(),
        ));
    }
    if ladder[0] <= tuple_len {
        return Err(Error::Config(format!(
            "domain size {} does not exceed the {tuple_len}-variable tuple",
            ladder[0]
        )));
    }
    Ok(())
}

pub(crate) fn validate_budgets(structures: usize, max_tuples: u64) -> Result<()> {
    if structures == 0 {
        return Err(Error::Config("at least one structure per size".into()));
    }
    if max_tuples == 0 || max_tuples > 10_000_000 {
        return Err(Error::Config(format!(
            "tuple cap {max_tuples} outside 1..=10000000"
        )));
    }
    Ok(())
}

impl ConvergenceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.pattern.size() != self.variables.len() {
            return Err(Error::Config(format!(
                "pattern covers {} positions but the tuple has {} variables",
                self.pattern.size(),
                self.variables.len()
            )));
        }
        validate_ladder(&self.ladder, self.variables.len())?;
        validate_budgets(self.structures, self.max_tuples)?;
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Config(format!(
                "closeness threshold {} is not a nonnegative number",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// One ladder rung of a convergence experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Structures sampled.
    pub samples: usize,
    /// Tuples evaluated per structure.
    pub tuples: u64,
    /// Whether the tuples are a subsample rather than an exhaustive list.
    pub subsampled: bool,
    /// Fraction of structures in which every evaluated tuple's original
    /// and eliminated values differ by at most epsilon.
    pub closeness_freq: f64,
    /// Fraction of (structure, tuple) evaluations of the original formula
    /// landing in the interval.
    pub membership_freq: f64,
    /// Largest observed |original - eliminated| gap.
    pub max_gap: f64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub formula: String,
    pub eliminated: String,
    pub traces: Vec<DTrace>,
    /// Bound on the eliminated formula's construction error.
    pub value_error: f64,
    /// Predicted limiting probability of the interval event.
    pub alpha_hat: f64,
    /// Error bound on the prediction.
    pub alpha_half_width: f64,
    pub interval: Interval,
    pub epsilon: f64,
    pub seed: u64,
    pub tuple_cap: u64,
    /// Trend diagnostic (finite-sample noise can break it; not an error).
    pub closeness_nondecreasing: bool,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Fixed-schema CSV: `n,samples,closeness_freq,membership_freq,
    /// alpha_hat,alpha_err,wall_ms`, where `alpha_err` is the error bound
    /// on the predicted alpha.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("n,samples,closeness_freq,membership_freq,alpha_hat,alpha_err,wall_ms\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.n,
                row.samples,
                row.closeness_freq,
                row.membership_freq,
                self.alpha_hat,
                self.alpha_half_width,
                row.wall_ms
            );
        }
        out
    }
}

/// Runs the experiment: eliminates once, then for each domain size samples
/// structures, evaluates the original and eliminated formulas on every
/// selected tuple, and tabulates closeness and membership frequencies.
/// Deterministic given one [`ConvergenceSpec`] (including its seed); thread
/// count only affects scheduling.
pub fn run_convergence(model: &DensityModel, spec: &ConvergenceSpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let limit = limit_prob(
        model,
        &spec.formula,
        &spec.variables,
        &spec.pattern,
        spec.interval,
        spec.method,
        &spec.elimination,
    )?;
    let sig = model.signature();
    let original_eval = Evaluator::new(sig, &spec.formula, &spec.variables)?;
    let limit_eval = Evaluator::new(sig, &limit.elimination.formula, &spec.variables)?;

    let mut rows = Vec::with_capacity(spec.ladder.len());
    for &n in &spec.ladder {
        let started = Instant::now();
        let (tuples, subsampled) = select_tuples(&spec.pattern, n, spec.max_tuples, spec.seed);

        // One independent structure per trial; integer counts merge in
        // structure order below, so the frequencies cannot depend on the
        // parallel schedule.
        let per_structure: Vec<(bool, u64, f64)> = (0..spec.structures)
            .into_par_iter()
            .map(|trial| {
                let structure = sample_structure(model, n, spec.seed, trial as u64)?;
                let mut close = true;
                let mut members = 0u64;
                let mut max_gap = 0.0f64;
                for tuple in &tuples {
                    let v = original_eval.eval(&structure, tuple)?;
                    let w = limit_eval.eval(&structure, tuple)?;
                    let gap = (v - w).abs();
                    max_gap = max_gap.max(gap);
                    if gap > spec.epsilon {
                        close = false;
                    }
                    if spec.interval.contains(v) {
                        members += 1;
                    }
                }
                Ok((close, members, max_gap))
            })
            .collect::<Result<_>>()?;

        let close_count = per_structure.iter().filter(|r| r.0).count();
        let members: u64 = per_structure.iter().map(|r| r.1).sum();
        let max_gap = per_structure.iter().fold(0.0f64, |acc, r| acc.max(r.2));
        let evaluations = (spec.structures as u64) * (tuples.len() as u64);
        rows.push(ConvergenceRow {
            n,
            samples: spec.structures,
            tuples: tuples.len() as u64,
            subsampled,
            closeness_freq: close_count as f64 / spec.structures as f64,
            membership_freq: members as f64 / evaluations as f64,
            max_gap,
            wall_ms: if spec.record_timings {
                started.elapsed().as_millis() as u64
            } else {
                0
            },
        });
    }

    let closeness_nondecreasing = rows
        .windows(2)
        .all(|w| w[0].closeness_freq <= w[1].closeness_freq);
    Ok(ConvergenceReport {
        formula: spec.formula.to_string(),
        eliminated: limit.elimination.formula.to_string(),
        traces: limit.elimination.traces,
        value_error: limit.elimination.value_error,
        alpha_hat: limit.alpha,
        alpha_half_width: limit.half_width,
        interval: spec.interval,
        epsilon: spec.epsilon,
        seed: spec.seed,
        tuple_cap: spec.max_tuples,
        closeness_nondecreasing,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::from_pairs(vec![("E", 2), ("R", 1)]).unwrap()
    }

    fn spec(src: &str, ladder: Vec<usize>, structures: usize) -> ConvergenceSpec {
        let formula = parse_formula(src, &sig()).unwrap();
        let variables = formula.free_var_tuple();
        let pattern = IdentityPattern::all_distinct(variables.len());
        ConvergenceSpec {
            formula,
            variables,
            pattern,
            interval: Interval::new(0.4, 0.6).unwrap(),
            ladder,
            structures,
            epsilon: 0.1,
            seed: 11,
            method: ProbMethod::Quadrature { cells: 256 },
            elimination: EliminationConfig::default(),
            max_tuples: 10_000,
            record_timings: false,
        }
    }

    #[test]
    fn aggregation_free_formulas_are_their_own_limit() {
        let model = DensityModel::uniform(sig());
        let report = run_convergence(&model, &spec("R(x)", vec![5, 10], 50)).unwrap();
        for row in &report.rows {
            assert_eq!(row.closeness_freq, 1.0);
            assert_eq!(row.max_gap, 0.0);
        }
        assert_eq!(report.value_error, 0.0);
        assert!(report.closeness_nondecreasing);
        // P(U in [0.4, 0.6]) = 0.2 up to the quadrature's own error bound,
        // and the pooled frequency is nearby.
        assert!((report.alpha_hat - 0.2).abs() <= report.alpha_half_width + 1e-12);
        assert!(report.alpha_half_width < 0.01);
        let freq = report.rows.last().unwrap().membership_freq;
        assert!((freq - 0.2).abs() < 0.1, "freq {freq}");
    }

    #[test]
    fn mean_degree_concentrates() {
        let model = DensityModel::uniform(sig());
        let report = run_convergence(&model, &spec("am{y}(E(x, y))", vec![40, 160], 60)).unwrap();
        assert!((report.alpha_hat - 1.0).abs() < 1e-9);
        let first = &report.rows[0];
        let last = &report.rows[1];
        assert!(last.closeness_freq >= first.closeness_freq);
        assert!(last.closeness_freq >= 0.9, "{}", last.closeness_freq);
        assert!(last.membership_freq >= 0.95, "{}", last.membership_freq);
    }

    #[test]
    fn reports_are_reproducible() {
        let model = DensityModel::uniform(sig());
        let s = spec("am{y}(E(x, y))", vec![12, 24], 20);
        let a = run_convergence(&model, &s).unwrap();
        let b = run_convergence(&model, &s).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with(
            "n,samples,closeness_freq,membership_freq,alpha_hat,alpha_err,wall_ms\n"
        ));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let model = DensityModel::uniform(sig());
        let mut bad = spec("R(x)", vec![10, 10], 5);
        assert!(run_convergence(&model, &bad).is_err());
        bad.ladder = vec![];
        assert!(run_convergence(&model, &bad).is_err());
        bad.ladder = vec![1];
        assert!(run_convergence(&model, &bad).is_err());
        bad.ladder = vec![10];
        bad.structures = 0;
        assert!(run_convergence(&model, &bad).is_err());
    }

    #[test]
    fn large_domains_subsample_tuples() {
        let model = DensityModel::uniform(sig());
        let f = parse_formula("E(x, y)", &sig()).unwrap();
        let variables = f.free_var_tuple();
        let s = ConvergenceSpec {
            formula: f,
            variables,
            pattern: IdentityPattern::all_distinct(2),
            interval: Interval::new(0.0, 0.5).unwrap(),
            ladder: vec![40],
            structures: 10,
            epsilon: 0.1,
            seed: 3,
            method: ProbMethod::Quadrature { cells: 128 },
            elimination: EliminationConfig::default(),
            max_tuples: 100,
            record_timings: false,
        };
        let report = run_convergence(&model, &s).unwrap();
        let row = &report.rows[0];
        assert!(row.subsampled);
        assert_eq!(row.tuples, 100);
        assert!((row.membership_freq - 0.5).abs() < 0.1);
    }
}
