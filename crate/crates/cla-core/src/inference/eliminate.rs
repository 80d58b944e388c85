//! Asymptotic elimination of aggregation functions.
//!
//! As the domain grows, the values an aggregation body takes at the fresh
//! element become an i.i.d. sample from a distribution determined by the
//! cells the body shares with its ambient tuple (`r̄`) and the cells it
//! reads freshly (`q̄`). The aggregation therefore converges to a function
//! `D(r̄)` of the shared cells alone:
//!
//! * `am` — the conditional expectation `E[C(r̄, Q̄)]`;
//! * `max`/`min` — the essential supremum/infimum of `q̄ ↦ C(r̄, q̄)` over
//!   the product of the fresh densities' supports;
//!
//! computed by quadrature (few fresh cells) or Monte Carlo, and tabulated
//! over a grid in `r̄` as an interpolated connective. Innermost
//! aggregations are eliminated first; first-order quantifiers are expanded
//! into aggregations beforehand.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{
    flat_conn, tabulated_conn, uniform_grid, Aggregator, Connective, Expr, TabulatedConnective,
};
use crate::inference::prob::{
    grid_mean, mc_mean, prob_in_interval, support_extrema, Interval, ProbMethod,
    ProbabilityEstimate, MAX_QUADRATURE_ATOMS,
};
use crate::logic::{normalize_under, Formula, IdentityPattern, NormalizedFormula, Var};
use crate::measure::{Density, DensityModel};
use crate::rng::derive_seed;

/// Numerical budgets for constructing `D`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EliminationConfig {
    /// Grid nodes per shared-cell axis of a tabulated `D`.
    pub grid_nodes: usize,
    /// Quadrature cells per fresh-cell axis.
    pub quad_cells: usize,
    /// Monte Carlo samples per node when quadrature is unavailable.
    pub mc_samples: usize,
    /// Support-scan resolution for essential extrema.
    pub support_resolution: usize,
    /// Master seed for Monte Carlo node estimates.
    pub seed: u64,
}

impl EliminationConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_nodes < 2 {
            return Err(Error::Config(format!(
                "grid_nodes is {}; at least 2 required",
                self.grid_nodes
            )));
        }
        if self.quad_cells == 0 || self.mc_samples == 0 || self.support_resolution == 0 {
            return Err(Error::Config(
                "quad_cells, mc_samples and support_resolution must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig {
            grid_nodes: 17,
            quad_cells: 256,
            mc_samples: 20_000,
            support_resolution: 512,
            seed: 0,
        }
    }
}

/// A record of one constructed `D`.
#[derive(Debug, Clone, Serialize)]
pub struct DTrace {
    pub aggregator: String,
    /// The aggregation body the construction consumed.
    pub body: String,
    /// Shared atoms feeding `D`, in input order.
    pub shared_atoms: Vec<String>,
    /// `exact`, `quadrature`, `monte_carlo`, `support_scan`, or
    /// `sampled_extremum`.
    pub method: String,
    /// `D` at the grid nodes, row-major; a single entry when no atoms are
    /// shared.
    pub values: Vec<f64>,
    /// Bound on the per-node numerical error.
    pub half_width: f64,
}

/// The outcome of a full elimination.
#[derive(Debug, Clone, Serialize)]
pub struct EliminationResult {
    /// Aggregation-free replacement formula.
    pub formula: Formula,
    /// One trace per eliminated aggregation, innermost first.
    pub traces: Vec<DTrace>,
    /// Conservative bound on the replacement's value error: per-trace
    /// half-widths amplified by the Lipschitz constants of the connectives
    /// enclosing each aggregation.
    pub value_error: f64,
}

/// Replaces a single aggregation `agg{var}(body)` — with `body` already
/// aggregation-free — by its limit, given the ambient tuple and its
/// identity pattern.
pub fn eliminate_once(
    model: &DensityModel,
    agg: &Aggregator,
    var: &Var,
    body: &Formula,
    ambient_vars: &[Var],
    ambient_pattern: &IdentityPattern,
    config: &EliminationConfig,
) -> Result<(Formula, DTrace)> {
    config.validate()?;
    if let Aggregator::External(ext) = agg {
        return Err(Error::UnsupportedAggregator(ext.name().to_string()));
    }
    let extended = ambient_pattern.extend_fresh();
    let mut full_vars: Vec<Var> = ambient_vars.to_vec();
    full_vars.push(var.clone());
    let normal = normalize_under(body, &full_vars, &extended)?;

    let trace_base = |method: &str, values: Vec<f64>, shared: Vec<String>, hw: f64| DTrace {
        aggregator: agg.name().to_string(),
        body: body.to_string(),
        shared_atoms: shared,
        method: method.to_string(),
        values,
        half_width: hw,
    };

    let (conn, atoms) = match &normal {
        NormalizedFormula::Constant(c) => {
            // The body ignores the structure; every aggregated value is `c`.
            let f = Formula::constant(*c)?;
            return Ok((f, trace_base("exact", vec![*c], Vec::new(), 0.0)));
        }
        NormalizedFormula::Atomic { conn, atoms } => (conn, atoms),
    };

    // Split the atoms by whether they read the fresh element's block.
    let fresh_block = extended.num_blocks() - 1;
    let (shared_idx, fresh_idx): (Vec<usize>, Vec<usize>) =
        (0..atoms.len()).partition(|&i| !atoms[i].blocks.contains(&fresh_block));
    let t = shared_idx.len();

    // Rewrite the connective over (shared..., fresh...) inputs.
    let mut new_pos = vec![0usize; atoms.len()];
    for (new, &old) in shared_idx.iter().chain(fresh_idx.iter()).enumerate() {
        new_pos[old] = new;
    }
    let reordered = conn.expr().remap(&new_pos);

    // Shared atoms come back as formulas over the ambient variables.
    let shared_formulas: Vec<Formula> = shared_idx
        .iter()
        .map(|&i| Formula::Atom {
            rel: atoms[i].rel.clone(),
            args: atoms[i]
                .blocks
                .iter()
                .map(|&b| ambient_vars[ambient_pattern.representative(b)].clone())
                .collect(),
        })
        .collect();
    let shared_names: Vec<String> = shared_formulas.iter().map(|f| f.to_string()).collect();

    let fresh_densities: Vec<&Density> = fresh_idx
        .iter()
        .map(|&i| model.density_for(&atoms[i].rel, &atoms[i].pattern()))
        .collect();

    if fresh_idx.is_empty() {
        // The fresh element only entered through equalities (all false in
        // the limit construction) or not at all: every aggregated value
        // equals the shared-cell value, so the aggregation is the identity.
        if t == 0 {
            let v = reordered.eval(&[]).clamp(0.0, 1.0);
            let f = Formula::constant(v)?;
            return Ok((f, trace_base("exact", vec![v], shared_names, 0.0)));
        }
        let f = Formula::conn(flat_conn(t, reordered)?, shared_formulas)?;
        return Ok((f, trace_base("exact", Vec::new(), shared_names, 0.0)));
    }

    // D at one node: slice the shared inputs to constants, integrate or
    // scan the fresh ones.
    let slice_at = |r: &[f64]| -> Result<Arc<Connective>> {
        let subs: Vec<Expr> = r
            .iter()
            .map(|&v| Expr::Const(v))
            .chain((0..fresh_idx.len()).map(Expr::Proj))
            .collect();
        flat_conn(fresh_idx.len(), reordered.compose(&subs))
    };
    let use_quadrature = fresh_idx.len() <= MAX_QUADRATURE_ATOMS;
    let mut node_counter = 0u64;
    let mut node_value = |r: &[f64]| -> Result<ProbabilityEstimate> {
        let sliced = slice_at(r)?;
        match agg {
            Aggregator::Am => {
                if use_quadrature {
                    grid_mean(&sliced, &fresh_densities, config.quad_cells)
                } else {
                    let seed = derive_seed(config.seed, &format!("d-node-{node_counter}"));
                    node_counter += 1;
                    Ok(mc_mean(
                        &sliced,
                        &fresh_densities,
                        config.mc_samples,
                        seed,
                    ))
                }
            }
            Aggregator::Min | Aggregator::Max => {
                if use_quadrature {
                    let (lo, hi) =
                        support_extrema(&sliced, &fresh_densities, config.support_resolution)?;
                    let v = if matches!(agg, Aggregator::Max) { hi } else { lo };
                    Ok(ProbabilityEstimate {
                        alpha: v.clamp(0.0, 1.0),
                        half_width: sliced.lipschitz() / config.support_resolution as f64,
                    })
                } else {
                    let seed = derive_seed(config.seed, &format!("d-node-{node_counter}"));
                    node_counter += 1;
                    let v = sampled_extremum(
                        &sliced,
                        &fresh_densities,
                        matches!(agg, Aggregator::Max),
                        config.mc_samples,
                        seed,
                    );
                    // A sampled extremum carries no useful error bound
                    // beyond the trivial one.
                    Ok(ProbabilityEstimate {
                        alpha: v,
                        half_width: 1.0,
                    })
                }
            }
            Aggregator::External(_) => unreachable!("rejected above"),
        }
    };
    let method = match (agg, use_quadrature) {
        (Aggregator::Am, true) => "quadrature",
        (Aggregator::Am, false) => "monte_carlo",
        (_, true) => "support_scan",
        (_, false) => "sampled_extremum",
    };

    if t == 0 {
        let est = node_value(&[])?;
        let f = Formula::constant(est.alpha)?;
        return Ok((
            f,
            trace_base(method, vec![est.alpha], shared_names, est.half_width),
        ));
    }

    // Tabulate D over the shared-cell grid, row-major with the last axis
    // fastest.
    let grid = uniform_grid(config.grid_nodes);
    let total: usize = grid.len().pow(t as u32);
    let mut values = Vec::with_capacity(total);
    let mut hw: f64 = 0.0;
    let mut idx = vec![0usize; t];
    let mut point = vec![0.0f64; t];
    for _ in 0..total {
        for a in 0..t {
            point[a] = grid[idx[a]];
        }
        let est = node_value(&point)?;
        values.push(est.alpha);
        hw = hw.max(est.half_width);
        let mut a = t;
        while a > 0 {
            a -= 1;
            idx[a] += 1;
            if idx[a] < grid.len() {
                break;
            }
            idx[a] = 0;
        }
    }
    let table = TabulatedConnective::new(vec![grid; t], values.clone())?;
    let name = format!("D_{}", agg.name());
    let f = Formula::conn(tabulated_conn(name, table), shared_formulas)?;
    Ok((f, trace_base(method, values, shared_names, hw)))
}

/// Largest (or smallest) connective value over `samples` draws.
fn sampled_extremum(
    conn: &Connective,
    densities: &[&Density],
    want_max: bool,
    samples: usize,
    seed: u64,
) -> f64 {
    use rand::Rng;
    let mut rng = crate::rng::indexed_rng(seed, "sampled-extremum", 0);
    let mut point = vec![0.0f64; densities.len()];
    let mut best = if want_max { 0.0f64 } else { 1.0f64 };
    for _ in 0..samples.max(1) {
        for (slot, d) in point.iter_mut().zip(densities.iter()) {
            *slot = d.quantile(rng.gen::<f64>());
        }
        let v = conn.eval_unchecked(&point);
        best = if want_max { best.max(v) } else { best.min(v) };
    }
    best.clamp(0.0, 1.0)
}

/// Eliminates every aggregation (and quantifier) in a formula, innermost
/// first, against the given ambient tuple and pattern.
pub fn eliminate(
    model: &DensityModel,
    formula: &Formula,
    declared: &[Var],
    pattern: &IdentityPattern,
    config: &EliminationConfig,
) -> Result<EliminationResult> {
    config.validate()?;
    formula.validate(model.signature())?;
    if pattern.size() != declared.len() {
        return Err(Error::Pattern(format!(
            "pattern describes {} positions but the tuple has {} variables",
            pattern.size(),
            declared.len()
        )));
    }
    let expanded = formula.expand_quantifiers(declared)?;
    let mut traces = Vec::new();
    let mut value_error = 0.0;
    let mut vars = declared.to_vec();
    let replaced = eliminate_rec(
        model,
        &expanded,
        &mut vars,
        pattern,
        1.0,
        config,
        &mut traces,
        &mut value_error,
    )?;
    debug_assert!(replaced.is_aggregation_free());
    Ok(EliminationResult {
        formula: replaced,
        traces,
        value_error,
    })
}

#[allow(clippy::too_many_arguments)]
fn eliminate_rec(
    model: &DensityModel,
    f: &Formula,
    vars: &mut Vec<Var>,
    pattern: &IdentityPattern,
    amplification: f64,
    config: &EliminationConfig,
    traces: &mut Vec<DTrace>,
    value_error: &mut f64,
) -> Result<Formula> {
    match f {
        Formula::Const { .. } | Formula::Eq { .. } | Formula::Atom { .. } => Ok(f.clone()),
        Formula::Conn { conn, args } => {
            let amp = amplification * conn.lipschitz();
            let args = args
                .iter()
                .map(|g| {
                    eliminate_rec(model, g, vars, pattern, amp, config, traces, value_error)
                })
                .collect::<Result<Vec<_>>>()?;
            Formula::conn(Arc::clone(conn), args)
        }
        Formula::Agg { agg, var, body } => {
            let extended = pattern.extend_fresh();
            vars.push(var.clone());
            let body = eliminate_rec(
                model,
                body,
                vars,
                &extended,
                amplification,
                config,
                traces,
                value_error,
            );
            vars.pop();
            let body = body?;
            let ambient = vars.clone();
            let (replacement, trace) =
                eliminate_once(model, agg, var, &body, &ambient, pattern, config)?;
            *value_error += amplification * trace.half_width;
            traces.push(trace);
            Ok(replacement)
        }
        Formula::Quant { .. } => Err(Error::Formula(
            "quantifiers must be expanded before elimination".into(),
        )),
    }
}

/// The limiting probability that the formula's value lies in the interval.
#[derive(Debug, Clone, Serialize)]
pub struct LimitProbability {
    pub alpha: f64,
    /// Combines the integration half-width with a bracket around the
    /// interval boundary: the interval is widened and narrowed by the
    /// elimination's value error and the two probabilities enclose the
    /// truth.
    pub half_width: f64,
    pub elimination: EliminationResult,
}

/// Computes the `n → ∞` probability of `value ∈ interval` by eliminating
/// aggregations and integrating the replacement formula.
pub fn limit_prob(
    model: &DensityModel,
    formula: &Formula,
    declared: &[Var],
    pattern: &IdentityPattern,
    interval: Interval,
    method: ProbMethod,
    config: &EliminationConfig,
) -> Result<LimitProbability> {
    let elimination = eliminate(model, formula, declared, pattern, config)?;
    let e = elimination.value_error;
    let seed = derive_seed(config.seed, "limit-prob");
    let wide = prob_in_interval(
        model,
        &elimination.formula,
        declared,
        pattern,
        interval.widened(e),
        method,
        seed,
    )?;
    let narrow = match interval.narrowed(e) {
        Some(j) => prob_in_interval(
            model,
            &elimination.formula,
            declared,
            pattern,
            j,
            method,
            seed,
        )?,
        None => ProbabilityEstimate {
            alpha: 0.0,
            half_width: 0.0,
        },
    };
    let alpha = 0.5 * (wide.alpha + narrow.alpha);
    let half_width =
        0.5 * (wide.alpha - narrow.alpha).abs() + wide.half_width.max(narrow.half_width);
    Ok(LimitProbability {
        alpha,
        half_width,
        elimination,
    })
}
