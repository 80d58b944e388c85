//! JSON experiment configurations.
//!
//! One file format drives both `converge` and `concentrate`. The master
//! `seed` drives every random choice in an experiment (structure sampling,
//! tuple subsampling, Monte Carlo); the elimination seed is derived from
//! it, so configs never need to coordinate seeds across sections.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::concentration::ConcentrationSpec;
use crate::harness::convergence::ConvergenceSpec;
use crate::inference::{EliminationConfig, Interval, ProbMethod};
use crate::logic::{parse_formula, Formula, IdentityPattern, Signature, Var};
use crate::measure::DensityModel;
use crate::rng::derive_seed;

fn default_interval() -> Interval {
    Interval::new(0.4, 0.6).expect("constant interval")
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_method() -> ProbMethod {
    ProbMethod::Quadrature { cells: 256 }
}

fn default_max_tuples() -> u64 {
    10_000
}

/// An experiment file. Unknown fields are rejected so that typos fail
/// loudly instead of silently running defaults.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub signature: Signature,
    /// Inline density entries (the same shape as a densities file).
    #[serde(default)]
    pub model: Option<serde_json::Value>,
    /// Path to a densities file, resolved against the config's directory.
    #[serde(default)]
    pub model_path: Option<String>,
    /// Formula text. For `concentrate` this is the aggregation body.
    pub formula: String,
    /// Declared tuple; defaults to the formula's free variables in name
    /// order. For `concentrate` the aggregated variable is excluded here.
    #[serde(default)]
    pub variables: Option<Vec<String>>,
    /// Which free variable `concentrate` aggregates over; defaults to the
    /// one free variable not listed in `variables`.
    #[serde(default)]
    pub agg_variable: Option<String>,
    /// Identity pattern of the declared tuple; defaults to all-distinct.
    #[serde(default)]
    pub pattern: Option<IdentityPattern>,
    #[serde(default = "default_interval")]
    pub interval: Interval,
    pub ladder: Vec<usize>,
    pub structures: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_method")]
    pub method: ProbMethod,
    #[serde(default)]
    pub elimination: EliminationConfig,
    #[serde(default = "default_max_tuples")]
    pub max_tuples: u64,
    #[serde(default)]
    pub record_timings: bool,
    /// Histogram bin count (`concentrate` only).
    #[serde(default)]
    pub bins: Option<usize>,
    /// Per-bin tolerance (`concentrate` only).
    #[serde(default)]
    pub delta: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&fs::read_to_string(path)?)
    }

    /// Builds the density model, reading `model_path` relative to
    /// `base_dir` when given.
    pub fn load_model(&self, base_dir: &Path) -> Result<DensityModel> {
        match (&self.model, &self.model_path) {
            (Some(_), Some(_)) => Err(Error::Config(
                "give either `model` or `model_path`, not both".into(),
            )),
            (Some(inline), None) => {
                DensityModel::from_json(self.signature.clone(), &inline.to_string())
            }
            (None, Some(rel)) => {
                let text = fs::read_to_string(base_dir.join(rel))?;
                DensityModel::from_json(self.signature.clone(), &text)
            }
            (None, None) => Ok(DensityModel::uniform(self.signature.clone())),
        }
    }

    fn parse(&self) -> Result<Formula> {
        parse_formula(&self.formula, &self.signature)
    }

    /// The declared tuple: `variables` if given (validated to be distinct
    /// and to cover `formula`'s free variables up to `reserve`), otherwise
    /// the free variables in name order.
    fn resolve_variables(&self, formula: &Formula, reserve: Option<&Var>) -> Result<Vec<Var>> {
        let vars: Vec<Var> = match &self.variables {
            Some(names) => names.iter().map(Var::new).collect(),
            None => {
                let mut free = formula.free_var_tuple();
                if let Some(r) = reserve {
                    free.retain(|v| v != r);
                }
                free
            }
        };
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Config(format!(
                    "variable `{v}` listed twice in the declared tuple"
                )));
            }
        }
        for v in formula.free_vars() {
            if Some(&v) != reserve && !vars.contains(&v) {
                return Err(Error::Config(format!(
                    "free variable `{v}` missing from the declared tuple"
                )));
            }
        }
        Ok(vars)
    }

    fn resolve_pattern(&self, vars: &[Var]) -> Result<IdentityPattern> {
        match &self.pattern {
            Some(p) => {
                if p.size() != vars.len() {
                    return Err(Error::Config(format!(
                        "pattern covers {} positions but the tuple has {} variables",
                        p.size(),
                        vars.len()
                    )));
                }
                Ok(p.clone())
            }
            None => Ok(IdentityPattern::all_distinct(vars.len())),
        }
    }

    fn elimination_with_derived_seed(&self) -> EliminationConfig {
        let mut elimination = self.elimination.clone();
        elimination.seed = derive_seed(self.seed, "elimination");
        elimination
    }

    /// Interprets the config as a convergence experiment.
    pub fn convergence_spec(&self) -> Result<ConvergenceSpec> {
        let formula = self.parse()?;
        let variables = self.resolve_variables(&formula, None)?;
        let pattern = self.resolve_pattern(&variables)?;
        let spec = ConvergenceSpec {
            formula,
            variables,
            pattern,
            interval: self.interval,
            ladder: self.ladder.clone(),
            structures: self.structures,
            epsilon: self.epsilon,
            seed: self.seed,
            method: self.method,
            elimination: self.elimination_with_derived_seed(),
            max_tuples: self.max_tuples,
            record_timings: self.record_timings,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Interprets the config as a concentration experiment; `formula` is
    /// the aggregation body and must be aggregation-free.
    pub fn concentration_spec(&self) -> Result<ConcentrationSpec> {
        let inner = self.parse()?;
        let agg_var = match &self.agg_variable {
            Some(name) => Var::new(name),
            None => {
                let declared: Vec<Var> = self
                    .variables
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(Var::new)
                    .collect();
                let mut leftover = inner
                    .free_vars()
                    .into_iter()
                    .filter(|v| !declared.contains(v));
                match (leftover.next(), leftover.next()) {
                    (Some(v), None) => v,
                    _ => {
                        return Err(Error::Config(
                            "cannot infer the aggregated variable; set `agg_variable`".into(),
                        ))
                    }
                }
            }
        };
        let variables = self.resolve_variables(&inner, Some(&agg_var))?;
        let pattern = self.resolve_pattern(&variables)?;
        let spec = ConcentrationSpec {
            inner,
            variables,
            agg_var,
            pattern,
            bins: self
                .bins
                .ok_or_else(|| Error::Config("`bins` is required for concentrate".into()))?,
            delta: self
                .delta
                .ok_or_else(|| Error::Config("`delta` is required for concentrate".into()))?,
            ladder: self.ladder.clone(),
            structures: self.structures,
            seed: self.seed,
            method: self.method,
            max_tuples: self.max_tuples,
            record_timings: self.record_timings,
        };
        spec.validate()?;
        Ok(spec)
    }
}
