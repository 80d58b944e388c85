//! Command-line interface: formula checking, structure sampling,
//! evaluation, interval probabilities, aggregation elimination, the
//! convergence and concentration experiments, and the aggregation
//! continuity checker.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cla_core::error::{Error, Result};
use cla_core::eval::Evaluator;
use cla_core::funcspace::{
    falsify_continuity, kahan_mean, Aggregator, ContinuityParams, ExternalAggregator,
};
use cla_core::harness::{run_concentration, run_convergence, ExperimentConfig};
use cla_core::inference::{
    eliminate, prob_in_interval, EliminationConfig, Interval, ProbMethod,
};
use cla_core::logic::{parse_formula, Formula, IdentityPattern, Signature, Var};
use cla_core::measure::{sample_structure, DensityModel};
use cla_core::rng::derive_seed;

#[derive(Parser)]
#[command(
    name = "cla",
    version,
    about = "Continuous logic with aggregation functions on random structures"
)]
struct Cli {
    /// Master seed; every random choice in a run derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its canonical form.
    Check(CheckArgs),
    /// Sample one random structure and print its relation values.
    Sample(SampleArgs),
    /// Evaluate a formula on sampled structures (CSV output).
    Eval(EvalArgs),
    /// Interval probability of an aggregation-free formula.
    Prob(ProbArgs),
    /// Replace aggregations and quantifiers by their limits.
    Eliminate(EliminateArgs),
    /// Run a convergence experiment from a config file.
    Converge(ExperimentArgs),
    /// Run a concentration experiment from a config file.
    Concentrate(ExperimentArgs),
    /// Search for continuity violations of an aggregation function.
    Aggcheck(AggcheckArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Signature file: {"relations":[{"name":"E","arity":2}, ...]}.
    #[arg(long)]
    signature: PathBuf,

    /// Densities file; relation cells not listed fall back to uniform.
    #[arg(long)]
    model: Option<PathBuf>,
}

impl ModelArgs {
    fn signature(&self) -> Result<Signature> {
        Signature::from_json(&fs::read_to_string(&self.signature)?)
    }

    fn model(&self) -> Result<DensityModel> {
        let sig = self.signature()?;
        match &self.model {
            Some(path) => DensityModel::from_json(sig, &fs::read_to_string(path)?),
            None => Ok(DensityModel::uniform(sig)),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Formula text, e.g. "am{y}(implies(R(x), E(x, y)))".
    formula: String,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Domain size.
    #[arg(short = 'n', long = "size")]
    size: usize,

    /// Structure index within the seed's family.
    #[arg(long, default_value_t = 0)]
    index: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,

    formula: String,

    /// Domain size.
    #[arg(short = 'n', long = "size")]
    size: usize,

    /// Number of structures to evaluate on.
    #[arg(long, default_value_t = 1)]
    structures: u64,

    /// Comma-separated 1-based domain elements assigned to the formula's
    /// free variables in name order.
    #[arg(long, value_parser = parse_elements)]
    elements: Option<Elements>,
}

#[derive(Clone)]
struct Elements(Vec<usize>);

fn parse_elements(s: &str) -> std::result::Result<Elements, String> {
    s.split(',')
        .map(|part| {
            let e: usize = part
                .trim()
                .parse()
                .map_err(|_| format!("`{part}` is not a domain element"))?;
            if e == 0 {
                return Err("domain elements are 1-based".to_string());
            }
            Ok(e - 1)
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Elements)
}

fn parse_interval(s: &str) -> std::result::Result<Interval, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected LO,HI".to_string());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| "bad lower endpoint")?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| "bad upper endpoint")?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_pattern(s: &str) -> std::result::Result<IdentityPattern, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodName {
    Quadrature,
    MonteCarlo,
}

#[derive(Args)]
struct MethodArgs {
    /// Integration method.
    #[arg(long, value_enum, default_value = "quadrature")]
    method: MethodName,

    /// Quadrature cells per axis.
    #[arg(long, default_value_t = 256)]
    cells: usize,

    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

impl MethodArgs {
    fn method(&self) -> ProbMethod {
        match self.method {
            MethodName::Quadrature => ProbMethod::Quadrature { cells: self.cells },
            MethodName::MonteCarlo => ProbMethod::MonteCarlo {
                samples: self.samples,
            },
        }
    }
}

#[derive(Args)]
struct ProbArgs {
    #[command(flatten)]
    model: ModelArgs,

    formula: String,

    /// Closed target interval, e.g. 0.4,0.6.
    #[arg(long, value_parser = parse_interval)]
    interval: Interval,

    /// Identity pattern over the free variables in name order, as 1-based
    /// blocks, e.g. [[1,3],[2]]. Defaults to all-distinct.
    #[arg(long, value_parser = parse_pattern)]
    pattern: Option<IdentityPattern>,

    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Args)]
struct EliminationArgs {
    /// Grid nodes per shared-cell axis of a tabulated limit.
    #[arg(long, default_value_t = 17)]
    grid_nodes: usize,

    /// Quadrature cells per fresh-cell axis.
    #[arg(long, default_value_t = 256)]
    quad_cells: usize,

    /// Monte Carlo samples per node when quadrature is unavailable.
    #[arg(long, default_value_t = 20_000)]
    mc_samples: usize,

    /// Support-scan resolution for essential extrema.
    #[arg(long, default_value_t = 512)]
    support_resolution: usize,
}

impl EliminationArgs {
    fn config(&self, seed: u64) -> EliminationConfig {
        EliminationConfig {
            grid_nodes: self.grid_nodes,
            quad_cells: self.quad_cells,
            mc_samples: self.mc_samples,
            support_resolution: self.support_resolution,
            seed: derive_seed(seed, "elimination"),
        }
    }
}

#[derive(Args)]
struct EliminateArgs {
    #[command(flatten)]
    model: ModelArgs,

    formula: String,

    /// Identity pattern over the free variables in name order.
    #[arg(long, value_parser = parse_pattern)]
    pattern: Option<IdentityPattern>,

    #[command(flatten)]
    budgets: EliminationArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config file (JSON).
    #[arg(long)]
    config: PathBuf,

    /// Also write the report's CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AggcheckArgs {
    /// Aggregation function to stress: min, max, am, or threshold
    /// (the step function 1 if am > 1/2 else 0, a known discontinuity).
    #[arg(long)]
    aggregator: String,

    /// Gap a witness must exceed.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,

    /// Perturbation / bin-proportion tolerance.
    #[arg(long, default_value_t = 0.01)]
    delta: f64,

    /// Histogram bins.
    #[arg(long, default_value_t = 20)]
    bins: usize,

    /// Minimum sequence length for histogram witnesses.
    #[arg(long, default_value_t = 500)]
    min_len: usize,

    /// Randomized search trials.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Check(args) => check(args, out),
        Command::Sample(args) => sample(args, seed, out),
        Command::Eval(args) => eval(args, seed, out),
        Command::Prob(args) => prob(args, seed, out),
        Command::Eliminate(args) => run_eliminate(args, seed, out),
        Command::Converge(args) => converge(args, cli.seed, out),
        Command::Concentrate(args) => concentrate(args, cli.seed, out),
        Command::Aggcheck(args) => aggcheck(args, seed, out),
    }
}

/// The free variables in name order: the tuple convention for all
/// single-formula subcommands.
fn declared_tuple(formula: &Formula) -> Vec<Var> {
    formula.free_var_tuple()
}

fn resolve_pattern(given: &Option<IdentityPattern>, vars: &[Var]) -> Result<IdentityPattern> {
    match given {
        Some(p) => {
            if p.size() != vars.len() {
                return Err(Error::Config(format!(
                    "pattern covers {} positions but the formula has {} free variables",
                    p.size(),
                    vars.len()
                )));
            }
            Ok(p.clone())
        }
        None => Ok(IdentityPattern::all_distinct(vars.len())),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let mut payload = text.to_string();
    if !payload.ends_with('\n') {
        payload.push('\n');
    }
    match out {
        Some(path) => fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn check(args: &CheckArgs, out: Option<&Path>) -> Result<()> {
    let sig = args.model.signature()?;
    let formula = parse_formula(&args.formula, &sig)?;
    let vars = declared_tuple(&formula);
    let report = serde_json::json!({
        "formula": formula.to_string(),
        "free_variables": vars.iter().map(Var::to_string).collect::<Vec<_>>(),
        "aggregation_free": formula.is_aggregation_free(),
    });
    emit(out, &report.to_string())
}

fn sample(args: &SampleArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let model = args.model.model()?;
    let structure = sample_structure(&model, args.size, seed, args.index)?;
    let relations: Vec<serde_json::Value> = model
        .signature()
        .relations()
        .iter()
        .enumerate()
        .map(|(idx, rel)| {
            serde_json::json!({
                "name": rel.name,
                "arity": rel.arity,
                // Row-major over tuples, last argument fastest.
                "values": structure.relation_values(idx),
            })
        })
        .collect();
    let report = serde_json::json!({ "n": args.size, "relations": relations });
    emit(out, &serde_json::to_string_pretty(&report)?)
}

fn eval(args: &EvalArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let model = args.model.model()?;
    let formula = parse_formula(&args.formula, model.signature())?;
    let vars = declared_tuple(&formula);
    let elements = match &args.elements {
        Some(Elements(e)) => e.clone(),
        None => Vec::new(),
    };
    if elements.len() != vars.len() {
        return Err(Error::Assignment(format!(
            "formula has free variables ({}); pass --elements with {} entries",
            vars.iter()
                .map(Var::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            vars.len()
        )));
    }
    let evaluator = Evaluator::new(model.signature(), &formula, &vars)?;
    let mut csv = String::from("structure,value\n");
    for index in 0..args.structures {
        let structure = sample_structure(&model, args.size, seed, index)?;
        let value = evaluator.eval(&structure, &elements)?;
        let _ = writeln!(csv, "{index},{value}");
    }
    emit(out, &csv)
}

fn prob(args: &ProbArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let model = args.model.model()?;
    let formula = parse_formula(&args.formula, model.signature())?;
    let vars = declared_tuple(&formula);
    let pattern = resolve_pattern(&args.pattern, &vars)?;
    let estimate = prob_in_interval(
        &model,
        &formula,
        &vars,
        &pattern,
        args.interval,
        args.method.method(),
        seed,
    )?;
    emit(out, &serde_json::to_string(&estimate)?)
}

fn run_eliminate(args: &EliminateArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let model = args.model.model()?;
    let formula = parse_formula(&args.formula, model.signature())?;
    let vars = declared_tuple(&formula);
    let pattern = resolve_pattern(&args.pattern, &vars)?;
    let result = eliminate(&model, &formula, &vars, &pattern, &args.budgets.config(seed))?;
    let report = serde_json::json!({
        "formula": result.formula.to_string(),
        "value_error": result.value_error,
        "traces": result.traces,
    });
    emit(out, &serde_json::to_string_pretty(&report)?)
}

fn load_experiment(args: &ExperimentArgs, seed: Option<u64>) -> Result<(ExperimentConfig, DensityModel)> {
    let mut config = ExperimentConfig::from_file(&args.config)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let base = args.config.parent().unwrap_or_else(|| Path::new("."));
    let model = config.load_model(base)?;
    Ok((config, model))
}

fn converge(args: &ExperimentArgs, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let (config, model) = load_experiment(args, seed)?;
    let report = run_convergence(&model, &config.convergence_spec()?)?;
    if let Some(path) = &args.csv {
        fs::write(path, report.to_csv())?;
    }
    emit(out, &serde_json::to_string_pretty(&report)?)
}

fn concentrate(args: &ExperimentArgs, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let (config, model) = load_experiment(args, seed)?;
    let report = run_concentration(&model, &config.concentration_spec()?)?;
    if let Some(path) = &args.csv {
        fs::write(path, report.to_csv())?;
    }
    emit(out, &serde_json::to_string_pretty(&report)?)
}

fn aggcheck(args: &AggcheckArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let aggregator = match args.aggregator.as_str() {
        "min" => Aggregator::Min,
        "max" => Aggregator::Max,
        "am" => Aggregator::Am,
        "threshold" => Aggregator::External(Arc::new(ExternalAggregator::new(
            "threshold",
            |values: &[f64]| {
                if kahan_mean(values) > 0.5 {
                    1.0
                } else {
                    0.0
                }
            },
        ))),
        other => {
            return Err(Error::Config(format!(
                "unknown aggregator `{other}`; choose min, max, am or threshold"
            )))
        }
    };
    let params = ContinuityParams {
        epsilon: args.epsilon,
        delta: args.delta,
        bins: args.bins,
        min_len: args.min_len,
        trials: args.trials,
        seed,
    };
    let report = falsify_continuity(&aggregator, &params);
    emit(out, &serde_json::to_string_pretty(&report)?)
}
