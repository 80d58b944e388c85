//! Interval probabilities of aggregation-free formulas.
//!
//! After normalization, an aggregation-free formula under a fixed identity
//! pattern is one connective over finitely many independent relation cells,
//! so probabilities reduce to integrals of the product density. Two engines
//! compute them:
//!
//! * tensor quadrature — exact per-cell masses (polynomial CDFs) with
//!   midpoint classification; the reported half-width is the total mass of
//!   cells on which the connective's Lipschitz band straddles an interval
//!   endpoint, a rigorous error bound;
//! * Monte Carlo — inverse-CDF sampling in fixed 1024-sample chunks with one
//!   stream per chunk (thread-count independent); the half-width is a 99%
//!   Hoeffding bound.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::funcspace::Connective;
use crate::logic::{normalize_under, Formula, IdentityPattern, NormalizedFormula, Var};
use crate::measure::{sample_structure, Density, DensityModel};
use crate::rng::indexed_rng;

/// A closed subinterval of `[0,1]`; `[lo, hi]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl From<Interval> for (f64, f64) {
    fn from(i: Interval) -> Self {
        (i.lo, i.hi)
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = Error;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < 0.0 || hi > 1.0 {
            return Err(Error::Config(format!(
                "[{lo}, {hi}] is not a closed subinterval of [0,1]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Grows both ends by `e` (clamped to `[0,1]`).
    pub fn widened(&self, e: f64) -> Interval {
        Interval {
            lo: (self.lo - e).max(0.0),
            hi: (self.hi + e).min(1.0),
        }
    }

    /// Shrinks both ends by `e`; may become empty.
    pub fn narrowed(&self, e: f64) -> Option<Interval> {
        let lo = self.lo + e;
        let hi = self.hi - e;
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// How to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ProbMethod {
    /// Tensor-product quadrature with this many cells per axis. Only
    /// available up to [`MAX_QUADRATURE_ATOMS`] distinct cells.
    Quadrature { cells: usize },
    /// Monte Carlo with this many samples.
    MonteCarlo { samples: usize },
}

/// Quadrature is offered up to this many distinct relation cells.
pub const MAX_QUADRATURE_ATOMS: usize = 3;

const MC_CHUNK: usize = 1024;

/// 99% Hoeffding half-width for an empirical mean of `[0,1]` samples.
fn hoeffding_half_width(samples: usize) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * samples as f64)).sqrt()
}

/// A probability (or expectation) with an uncertainty half-width.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbabilityEstimate {
    pub alpha: f64,
    pub half_width: f64,
}

/// `P(value ∈ interval)` for an aggregation-free formula at a tuple with
/// the given identity pattern. The result does not depend on the domain
/// size; it is the probability the product measure assigns to the event.
pub fn prob_in_interval(
    model: &DensityModel,
    formula: &Formula,
    vars: &[Var],
    pattern: &IdentityPattern,
    interval: Interval,
    method: ProbMethod,
    seed: u64,
) -> Result<ProbabilityEstimate> {
    formula.validate(model.signature())?;
    let normal = normalize_under(formula, vars, pattern)?;
    match &normal {
        NormalizedFormula::Constant(c) => Ok(ProbabilityEstimate {
            alpha: if interval.contains(*c) { 1.0 } else { 0.0 },
            half_width: 0.0,
        }),
        NormalizedFormula::Atomic { conn, atoms } => {
            let densities: Vec<&Density> = atoms
                .iter()
                .map(|a| model.density_for(&a.rel, &a.pattern()))
                .collect();
            match method {
                ProbMethod::Quadrature { cells } => {
                    grid_alpha(conn, &densities, interval, cells)
                }
                ProbMethod::MonteCarlo { samples } => {
                    Ok(mc_alpha(conn, &densities, interval, samples, seed))
                }
            }
        }
    }
}

/// Iterates the tensor grid of cell midpoints with exact per-cell masses.
/// `f` receives (midpoints, cell mass).
fn product_grid_scan(
    densities: &[&Density],
    cells: usize,
    mut f: impl FnMut(&[f64], f64),
) -> Result<()> {
    let s = densities.len();
    if s > MAX_QUADRATURE_ATOMS {
        return Err(Error::Numeric(format!(
            "quadrature supports at most {MAX_QUADRATURE_ATOMS} distinct cells, got {s}; use Monte Carlo"
        )));
    }
    if cells == 0 {
        return Err(Error::Config("quadrature needs at least one cell".into()));
    }
    if s == 0 {
        f(&[], 1.0);
        return Ok(());
    }
    let masses: Vec<Vec<f64>> = densities
        .iter()
        .map(|d| {
            (0..cells)
                .map(|i| d.mass(i as f64 / cells as f64, (i + 1) as f64 / cells as f64))
                .collect()
        })
        .collect();
    let mids: Vec<f64> = (0..cells)
        .map(|i| (i as f64 + 0.5) / cells as f64)
        .collect();

    let mut idx = vec![0usize; s];
    let mut point = vec![0.0f64; s];
    loop {
        let mut mass = 1.0;
        for a in 0..s {
            point[a] = mids[idx[a]];
            mass *= masses[a][idx[a]];
        }
        if mass > 0.0 {
            f(&point, mass);
        }
        // Odometer increment.
        let mut a = s;
        loop {
            if a == 0 {
                return Ok(());
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < cells {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Quadrature estimate of `P(C(q̄) ∈ J)`: midpoint classification, with the
/// mass of Lipschitz-uncertain cells reported as the half-width.
pub(crate) fn grid_alpha(
    conn: &Connective,
    densities: &[&Density],
    interval: Interval,
    cells: usize,
) -> Result<ProbabilityEstimate> {
    let band = conn.lipschitz() / (2.0 * cells as f64);
    let mut alpha = 0.0;
    let mut uncertain = 0.0;
    product_grid_scan(densities, cells, |point, mass| {
        let v = conn.eval_unchecked(point);
        if interval.contains(v) {
            alpha += mass;
        }
        let surely_in = v - band >= interval.lo() && v + band <= interval.hi();
        let surely_out = v + band < interval.lo() || v - band > interval.hi();
        if !surely_in && !surely_out {
            uncertain += mass;
        }
    })?;
    Ok(ProbabilityEstimate {
        alpha: alpha.clamp(0.0, 1.0),
        half_width: uncertain.min(1.0),
    })
}

/// Quadrature estimate of `E[C(q̄)]`; the half-width is the Lipschitz bound
/// on the midpoint rule's error.
pub(crate) fn grid_mean(
    conn: &Connective,
    densities: &[&Density],
    cells: usize,
) -> Result<ProbabilityEstimate> {
    let mut mean = 0.0;
    product_grid_scan(densities, cells, |point, mass| {
        mean += mass * conn.eval_unchecked(point);
    })?;
    Ok(ProbabilityEstimate {
        alpha: mean.clamp(0.0, 1.0),
        half_width: conn.lipschitz() / (2.0 * cells as f64),
    })
}

/// Quadrature histogram of the value distribution over `bins` half-open
/// bins (the last bin closed).
pub(crate) fn grid_bins(
    conn: &Connective,
    densities: &[&Density],
    bins: usize,
    cells: usize,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; bins];
    product_grid_scan(densities, cells, |point, mass| {
        out[crate::funcspace::bin_index(conn.eval_unchecked(point), bins)] += mass;
    })?;
    Ok(out)
}

/// Runs `samples` Monte Carlo draws in fixed chunks, folding each chunk's
/// connective values into an accumulator, and merges chunks in index order.
fn mc_scan<A: Send>(
    conn: &Connective,
    densities: &[&Density],
    samples: usize,
    seed: u64,
    make: impl Fn() -> A + Sync,
    fold: impl Fn(&mut A, f64) + Sync,
    merge: impl Fn(&mut A, A),
) -> A {
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<(usize, A)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = indexed_rng(seed, "mc-integral", chunk as u64);
            let mut acc = make();
            let mut point = vec![0.0f64; densities.len()];
            let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            for _ in 0..count {
                for (slot, d) in point.iter_mut().zip(densities.iter()) {
                    *slot = d.quantile(rng.gen::<f64>());
                }
                fold(&mut acc, conn.eval_unchecked(&point));
            }
            (chunk, acc)
        })
        .collect();
    let mut sorted = parts;
    sorted.sort_by_key(|(chunk, _)| *chunk);
    let mut total = make();
    for (_, part) in sorted {
        merge(&mut total, part);
    }
    total
}

/// Monte Carlo estimate of `P(C(q̄) ∈ J)` with a 99% Hoeffding half-width.
pub(crate) fn mc_alpha(
    conn: &Connective,
    densities: &[&Density],
    interval: Interval,
    samples: usize,
    seed: u64,
) -> ProbabilityEstimate {
    let samples = samples.max(1);
    let hits = mc_scan(
        conn,
        densities,
        samples,
        seed,
        || 0u64,
        |acc, v| *acc += u64::from(interval.contains(v)),
        |acc, part| *acc += part,
    );
    ProbabilityEstimate {
        alpha: hits as f64 / samples as f64,
        half_width: hoeffding_half_width(samples),
    }
}

/// Monte Carlo estimate of `E[C(q̄)]` with a 99% Hoeffding half-width.
pub(crate) fn mc_mean(
    conn: &Connective,
    densities: &[&Density],
    samples: usize,
    seed: u64,
) -> ProbabilityEstimate {
    let samples = samples.max(1);
    // Kahan-compensated chunk sums, merged in chunk order.
    let (sum, _) = mc_scan(
        conn,
        densities,
        samples,
        seed,
        || (0.0f64, 0.0f64),
        |acc, v| {
            let y = v - acc.1;
            let t = acc.0 + y;
            acc.1 = (t - acc.0) - y;
            acc.0 = t;
        },
        |acc, part| {
            let y = part.0 - acc.1;
            let t = acc.0 + y;
            acc.1 = (t - acc.0) - y;
            acc.0 = t;
        },
    );
    ProbabilityEstimate {
        alpha: (sum / samples as f64).clamp(0.0, 1.0),
        half_width: hoeffding_half_width(samples),
    }
}

/// Monte Carlo histogram over `bins` half-open bins.
pub(crate) fn mc_bins(
    conn: &Connective,
    densities: &[&Density],
    bins: usize,
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let samples = samples.max(1);
    let counts = mc_scan(
        conn,
        densities,
        samples,
        seed,
        || vec![0u64; bins],
        |acc, v| acc[crate::funcspace::bin_index(v, bins)] += 1,
        |acc, part| {
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        },
    );
    counts
        .into_iter()
        .map(|c| c as f64 / samples as f64)
        .collect()
}

/// Extreme values of `C` over the product of the densities' supports,
/// scanned at `1/resolution` spacing per axis (support endpoints included).
pub(crate) fn support_extrema(
    conn: &Connective,
    densities: &[&Density],
    resolution: usize,
) -> Result<(f64, f64)> {
    let s = densities.len();
    if s == 0 {
        let v = conn.eval_unchecked(&[]);
        return Ok((v, v));
    }
    if s > MAX_QUADRATURE_ATOMS {
        return Err(Error::Numeric(format!(
            "support scan handles at most {MAX_QUADRATURE_ATOMS} distinct cells, got {s}"
        )));
    }
    let axes: Vec<Vec<f64>> = densities
        .iter()
        .map(|d| d.support_points(resolution))
        .collect();
    if axes.iter().any(|a| a.is_empty()) {
        return Err(Error::Numeric("a density has empty support".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut idx = vec![0usize; s];
    let mut point = vec![0.0f64; s];
    loop {
        for a in 0..s {
            point[a] = axes[a][idx[a]];
        }
        let v = conn.eval_unchecked(&point);
        lo = lo.min(v);
        hi = hi.max(v);
        let mut a = s;
        loop {
            if a == 0 {
                return Ok((lo, hi));
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < axes[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Empirical check of the product rule behind the integral formula: for one
/// tuple with pattern `pattern` and `m` fresh elements `b_1..b_m`, estimates
/// `P(ψ(ā,b_j) ∈ J)` for each `j`, every pairwise joint, and the full joint,
/// over `trials` sampled structures. Returns the largest absolute gap
/// between a joint frequency and the corresponding product of marginals.
#[allow(clippy::too_many_arguments)]
pub fn independence_gap(
    model: &DensityModel,
    formula: &Formula,
    tuple_vars: &[Var],
    agg_var: &Var,
    pattern: &IdentityPattern,
    interval: Interval,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if !formula.is_aggregation_free() {
        return Err(Error::NotAggregationFree);
    }
    if pattern.size() != tuple_vars.len() {
        return Err(Error::Pattern(format!(
            "pattern describes {} positions but the tuple has {}",
            pattern.size(),
            tuple_vars.len()
        )));
    }
    if m == 0 || trials == 0 {
        return Err(Error::Config(
            "independence check needs m >= 1 and trials >= 1".into(),
        ));
    }
    let blocks = pattern.num_blocks();
    if n < blocks + m {
        return Err(Error::Config(format!(
            "domain size {n} too small for {blocks} tuple blocks plus {m} fresh elements"
        )));
    }

    let mut declared: Vec<Var> = tuple_vars.to_vec();
    declared.push(agg_var.clone());
    let evaluator = Evaluator::new(model.signature(), formula, &declared)?;
    // ā realizes the pattern on elements 0..blocks; the fresh b_j follow.
    let base = pattern.tuple_from_block_values(&(0..blocks).collect::<Vec<_>>());

    #[derive(Clone)]
    struct Counts {
        singles: Vec<u64>,
        pairs: Vec<u64>,
        all: u64,
        trials: u64,
    }
    let empty = || Counts {
        singles: vec![0; m],
        pairs: vec![0; m * m],
        all: 0,
        trials: 0,
    };

    let chunks = trials.div_ceil(MC_CHUNK);
    let parts: Result<Vec<Counts>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = empty();
            let lo = chunk * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(trials);
            let mut elements = base.clone();
            elements.push(0);
            let mut hit = vec![false; m];
            for trial in lo..hi {
                let s = sample_structure(model, n, seed, trial as u64)?;
                for (j, h) in hit.iter_mut().enumerate() {
                    elements[base.len()] = blocks + j;
                    *h = interval.contains(evaluator.eval(&s, &elements)?);
                }
                for i in 0..m {
                    acc.singles[i] += u64::from(hit[i]);
                    for j in (i + 1)..m {
                        acc.pairs[i * m + j] += u64::from(hit[i] && hit[j]);
                    }
                }
                acc.all += u64::from(hit.iter().all(|&h| h));
                acc.trials += 1;
            }
            Ok(acc)
        })
        .collect();
    let mut total = empty();
    for part in parts? {
        for (a, p) in total.singles.iter_mut().zip(&part.singles) {
            *a += p;
        }
        for (a, p) in total.pairs.iter_mut().zip(&part.pairs) {
            *a += p;
        }
        total.all += part.all;
        total.trials += part.trials;
    }

    let t = total.trials as f64;
    let freq: Vec<f64> = total.singles.iter().map(|&c| c as f64 / t).collect();
    let mut gap: f64 = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let joint = total.pairs[i * m + j] as f64 / t;
            gap = gap.max((joint - freq[i] * freq[j]).abs());
        }
    }
    let full = total.all as f64 / t;
    let product: f64 = freq.iter().product();
    gap = gap.max((full - product).abs());
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};
    use crate::measure::DensitySpec;
    use approx::assert_abs_diff_eq;

    fn sig() -> Signature {
        Signature::from_pairs(vec![("R", 1), ("Q", 1), ("E", 2)]).unwrap()
    }

    fn uniform_model() -> DensityModel {
        DensityModel::uniform(sig())
    }

    #[test]
    fn single_uniform_atom_is_interval_length() {
        let f = parse_formula("R(x)", &sig()).unwrap();
        let est = prob_in_interval(
            &uniform_model(),
            &f,
            &[Var::new("x")],
            &IdentityPattern::all_distinct(1),
            Interval::new(0.2, 0.7).unwrap(),
            ProbMethod::Quadrature { cells: 256 },
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(est.alpha, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn min_of_two_uniforms() {
        // P(min(U1,U2) <= 1/2) = 1 - (1/2)^2 = 3/4.
        let f = parse_formula("min2(R(x), Q(x))", &sig()).unwrap();
        let vars = [Var::new("x")];
        let p = IdentityPattern::all_distinct(1);
        let j = Interval::new(0.0, 0.5).unwrap();

        let quad = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &p,
            j,
            ProbMethod::Quadrature { cells: 256 },
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(quad.alpha, 0.75, epsilon = 1e-9);

        let mc = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &p,
            j,
            ProbMethod::MonteCarlo { samples: 100_000 },
            7,
        )
        .unwrap();
        assert_abs_diff_eq!(mc.alpha, 0.75, epsilon = 0.01);
        assert!(mc.half_width < 0.011);
    }

    #[test]
    fn pattern_changes_the_answer() {
        // Under x = y both atoms read the same cell: and(e,e) = max(0,2e-1),
        // so P(value >= 0.5) = P(e >= 0.75) = 0.25.
        let f = parse_formula("and(E(x,y), E(y,x))", &sig()).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let j = Interval::new(0.5, 1.0).unwrap();
        let merged = IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap();
        let est = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &merged,
            j,
            ProbMethod::Quadrature { cells: 512 },
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(est.alpha, 0.25, epsilon = 1e-3);

        // Distinct x, y: two independent cells; P(max(0, e1+e2-1) >= 0.5)
        // = P(e1+e2 >= 1.5) = triangle area = (1/2)^2/2 = 0.125.
        let split = IdentityPattern::all_distinct(2);
        let est = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &split,
            j,
            ProbMethod::Quadrature { cells: 512 },
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(est.alpha, 0.125, epsilon = 1e-3);
    }

    #[test]
    fn constant_formula_is_zero_or_one() {
        let f = parse_formula("x = y", &sig()).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let est = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &IdentityPattern::all_distinct(2),
            Interval::new(0.0, 0.5).unwrap(),
            ProbMethod::Quadrature { cells: 16 },
            0,
        )
        .unwrap();
        assert_eq!(est.alpha, 1.0);
        assert_eq!(est.half_width, 0.0);
    }

    #[test]
    fn nonuniform_density_integrates_exactly() {
        // R with density 2v: P(R(x) in [0, 1/2]) = (1/2)^2 = 1/4, and the
        // interval endpoints land on cell edges so quadrature is exact.
        let mut model = uniform_model();
        model
            .set(
                "R",
                IdentityPattern::all_distinct(1),
                &DensitySpec::Poly {
                    coeffs: vec![0.0, 2.0],
                },
            )
            .unwrap();
        let f = parse_formula("R(x)", &sig()).unwrap();
        let est = prob_in_interval(
            &model,
            &f,
            &[Var::new("x")],
            &IdentityPattern::all_distinct(1),
            Interval::new(0.0, 0.5).unwrap(),
            ProbMethod::Quadrature { cells: 128 },
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(est.alpha, 0.25, epsilon = 1e-9);
    }

    #[test]
    fn too_many_atoms_for_quadrature() {
        let f = parse_formula("max4(R(x), Q(x), E(x,y), E(y,x))", &sig()).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let err = prob_in_interval(
            &uniform_model(),
            &f,
            &vars,
            &IdentityPattern::all_distinct(2),
            Interval::new(0.0, 0.5).unwrap(),
            ProbMethod::Quadrature { cells: 32 },
            0,
        );
        assert!(matches!(err, Err(Error::Numeric(_))));
    }

    #[test]
    fn mc_is_deterministic_and_chunk_stable() {
        let f = parse_formula("E(x,y)", &sig()).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let p = IdentityPattern::all_distinct(2);
        let j = Interval::new(0.25, 0.75).unwrap();
        let run = |samples| {
            prob_in_interval(
                &uniform_model(),
                &f,
                &vars,
                &p,
                j,
                ProbMethod::MonteCarlo { samples },
                99,
            )
            .unwrap()
            .alpha
        };
        assert_eq!(run(10_000), run(10_000));
        // A non-multiple of the chunk size still works.
        let est = run(2_500);
        assert_abs_diff_eq!(est, 0.5, epsilon = 0.05);
    }

    #[test]
    fn support_extrema_sees_through_gaps() {
        let mut model = uniform_model();
        model
            .set(
                "R",
                IdentityPattern::all_distinct(1),
                &DensitySpec::Piecewise {
                    breakpoints: vec![0.0, 0.3, 0.7, 1.0],
                    coeffs: vec![vec![0.3, -1.0], vec![0.0], vec![-0.7, 1.0]],
                },
            )
            .unwrap();
        let f = parse_formula("R(x)", &sig()).unwrap();
        let normal = normalize_under(
            &f,
            &[Var::new("x")],
            &IdentityPattern::all_distinct(1),
        )
        .unwrap();
        let (conn, atoms) = match &normal {
            NormalizedFormula::Atomic { conn, atoms } => (conn, atoms),
            _ => unreachable!(),
        };
        let densities: Vec<&Density> = atoms
            .iter()
            .map(|a| model.density_for(&a.rel, &a.pattern()))
            .collect();
        let (lo, hi) = support_extrema(conn, &densities, 512).unwrap();
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn independence_gap_small_for_distinct_cells() {
        let f = parse_formula("E(x,y)", &sig()).unwrap();
        let gap = independence_gap(
            &uniform_model(),
            &f,
            &[Var::new("x")],
            &Var::new("y"),
            &IdentityPattern::all_distinct(1),
            Interval::new(0.0, 0.5).unwrap(),
            4,
            2,
            20_000,
            5,
        )
        .unwrap();
        assert!(gap < 0.02, "gap = {gap}");
    }

    #[test]
    fn independence_gap_detects_shared_cells() {
        // ψ = E(y,y) ignores x: every b_j reads a different diagonal cell,
        // but ψ = R(x) reads the SAME cell for every j, so the joint
        // frequency equals the marginal, not its square.
        let f = parse_formula("R(x)", &sig()).unwrap();
        let gap = independence_gap(
            &uniform_model(),
            &f,
            &[Var::new("x")],
            &Var::new("y"),
            &IdentityPattern::all_distinct(1),
            Interval::new(0.0, 0.5).unwrap(),
            4,
            2,
            20_000,
            5,
        )
        .unwrap();
        // P(A∩A) = 1/2 vs P(A)^2 = 1/4.
        assert!(gap > 0.2, "gap = {gap}");
    }
}
