//! The limiting histogram profile of an aggregation body.

use crate::error::Result;
use crate::inference::prob::{grid_bins, mc_bins, ProbMethod};
use crate::logic::{normalize_under, Formula, IdentityPattern, NormalizedFormula, Var};
use crate::measure::{Density, DensityModel};

/// The distribution of an aggregation-free formula's value over `bins`
/// half-open bins `[i/M, (i+1)/M)` (the last bin closed at 1), under the
/// product measure at the given identity pattern. This is the profile that
/// per-tuple empirical histograms concentrate around as the domain grows.
pub fn histogram_profile(
    model: &DensityModel,
    formula: &Formula,
    vars: &[Var],
    pattern: &IdentityPattern,
    bins: usize,
    method: ProbMethod,
    seed: u64,
) -> Result<Vec<f64>> {
    if bins == 0 {
        return Err(crate::error::Error::Config(
            "at least one histogram bin is required".into(),
        ));
    }
    formula.validate(model.signature())?;
    let normal = normalize_under(formula, vars, pattern)?;
    match &normal {
        NormalizedFormula::Constant(c) => {
            let mut out = vec![0.0; bins];
            out[crate::funcspace::bin_index(*c, bins)] = 1.0;
            Ok(out)
        }
        NormalizedFormula::Atomic { conn, atoms } => {
            let densities: Vec<&Density> = atoms
                .iter()
                .map(|a| model.density_for(&a.rel, &a.pattern()))
                .collect();
            match method {
                ProbMethod::Quadrature { cells } => grid_bins(conn, &densities, bins, cells),
                ProbMethod::MonteCarlo { samples } => {
                    Ok(mc_bins(conn, &densities, bins, samples, seed))
                }
            }
        }
    }
}
