//! Probability densities on `[0,1]`.
//!
//! Densities are piecewise polynomials: continuity is checked at the
//! breakpoints, nonnegativity on a fine grid with local refinement, and the
//! total mass is computed exactly by polynomial integration and scaled to 1.
//! The restriction buys exact interval masses (for quadrature), an exact CDF,
//! and an invertible CDF by bracketed root-finding.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw density description as found in model files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DensitySpec {
    /// The uniform density on `[0,1]`.
    Uniform,
    /// A single polynomial on `[0,1]`; `coeffs[i]` multiplies `v^i`.
    Poly { coeffs: Vec<f64> },
    /// Polynomial pieces between consecutive breakpoints. Breakpoints run
    /// from 0 to 1; `coeffs[i]` is the polynomial on
    /// `[breakpoints[i], breakpoints[i+1]]`.
    Piecewise {
        breakpoints: Vec<f64>,
        coeffs: Vec<Vec<f64>>,
    },
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend(coeffs.iter().enumerate().map(|(i, &c)| c / (i + 1) as f64));
    out
}

#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
    /// Antiderivative of `coeffs` (constant term 0).
    anti: Vec<f64>,
    /// CDF value at `lo`.
    cum_lo: f64,
}

impl Piece {
    /// Mass of `[lo, x]` within this piece.
    fn mass_from_lo(&self, x: f64) -> f64 {
        poly_eval(&self.anti, x) - poly_eval(&self.anti, self.lo)
    }
}

/// A validated, normalized density on `[0,1]`.
#[derive(Debug, Clone)]
pub struct Density {
    pieces: Vec<Piece>,
    /// Closure of the positivity region, as disjoint closed intervals.
    support: Vec<(f64, f64)>,
    uniform: bool,
}

const BREAKPOINT_TOL: f64 = 1e-12;
const CONTINUITY_TOL: f64 = 1e-9;
const NONNEG_TOL: f64 = 1e-9;
const GRID_PER_PIECE: usize = 4096;

impl Density {
    pub fn uniform() -> Density {
        Density::new(&DensitySpec::Uniform).expect("the uniform density is valid")
    }

    /// Validates and normalizes a raw description.
    pub fn new(spec: &DensitySpec) -> Result<Density> {
        let (breaks, polys): (Vec<f64>, Vec<Vec<f64>>) = match spec {
            DensitySpec::Uniform => (vec![0.0, 1.0], vec![vec![1.0]]),
            DensitySpec::Poly { coeffs } => (vec![0.0, 1.0], vec![coeffs.clone()]),
            DensitySpec::Piecewise {
                breakpoints,
                coeffs,
            } => (breakpoints.clone(), coeffs.clone()),
        };
        validate_shape(&breaks, &polys)?;
        let mut breaks = breaks;
        *breaks.first_mut().unwrap() = 0.0;
        *breaks.last_mut().unwrap() = 1.0;

        check_continuity(&breaks, &polys)?;
        check_nonnegative(&breaks, &polys)?;

        let total: f64 = (0..polys.len())
            .map(|i| {
                let anti = poly_antiderivative(&polys[i]);
                poly_eval(&anti, breaks[i + 1]) - poly_eval(&anti, breaks[i])
            })
            .sum();
        if !(total.is_finite() && total > 1e-12) {
            return Err(Error::Density(format!(
                "total mass {total} is not positive"
            )));
        }

        let mut pieces = Vec::with_capacity(polys.len());
        let mut cum = 0.0;
        for (i, poly) in polys.iter().enumerate() {
            let coeffs: Vec<f64> = poly.iter().map(|c| c / total).collect();
            let anti = poly_antiderivative(&coeffs);
            let piece = Piece {
                lo: breaks[i],
                hi: breaks[i + 1],
                coeffs,
                anti,
                cum_lo: cum,
            };
            cum += piece.mass_from_lo(piece.hi);
            pieces.push(piece);
        }

        let support = positivity_support(&pieces);
        let uniform = pieces.len() == 1
            && pieces[0].coeffs.len() == 1
            && (pieces[0].coeffs[0] - 1.0).abs() <= 1e-12;
        Ok(Density {
            pieces,
            support,
            uniform,
        })
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Density value at `v` (clamped into `[0,1]` first).
    pub fn pdf(&self, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        let piece = self.piece_at(v);
        poly_eval(&piece.coeffs, v).max(0.0)
    }

    /// Exact CDF at `v`.
    pub fn cdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        if v >= 1.0 {
            return 1.0;
        }
        let piece = self.piece_at(v);
        (piece.cum_lo + piece.mass_from_lo(v)).clamp(0.0, 1.0)
    }

    /// Exact mass of the interval `[a, b]`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        (self.cdf(b) - self.cdf(a)).max(0.0)
    }

    fn piece_at(&self, v: f64) -> &Piece {
        let idx = self
            .pieces
            .partition_point(|p| p.lo <= v)
            .saturating_sub(1);
        &self.pieces[idx]
    }

    /// Inverse CDF: the smallest `x` with `cdf(x) >= u`, to within 1e-12.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if self.uniform {
            return u;
        }
        let idx = self
            .pieces
            .partition_point(|p| p.cum_lo <= u)
            .saturating_sub(1);
        let piece = &self.pieces[idx];
        let target = u - piece.cum_lo;

        // Bisect on the monotone per-piece mass, then polish with Newton.
        let (mut lo, mut hi) = (piece.lo, piece.hi);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if piece.mass_from_lo(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..3 {
            let d = poly_eval(&piece.coeffs, x);
            if d > 1e-9 {
                x = (x - (piece.mass_from_lo(x) - target) / d).clamp(lo, hi);
            }
        }
        x.clamp(piece.lo, piece.hi)
    }

    /// Draws one value: inverse CDF applied to one uniform draw.
    pub fn sample_value(&self, rng: &mut (impl Rng + ?Sized)) -> f64 {
        self.quantile(rng.gen::<f64>())
    }

    /// Closure of `{v : pdf(v) > 0}` as disjoint closed intervals.
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    /// Grid points of spacing `1/resolution` that lie in the support,
    /// plus the exact support endpoints.
    pub fn support_points(&self, resolution: usize) -> Vec<f64> {
        let res = resolution.max(1) as f64;
        let mut out = Vec::new();
        for &(s, e) in &self.support {
            out.push(s);
            let mut k = (s * res).ceil() as i64;
            while (k as f64) / res <= e {
                let x = (k as f64) / res;
                if x > s && x < e {
                    out.push(x);
                }
                k += 1;
            }
            out.push(e);
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }
}

fn validate_shape(breaks: &[f64], polys: &[Vec<f64>]) -> Result<()> {
    if breaks.len() < 2 {
        return Err(Error::Density(
            "piecewise density needs at least two breakpoints".into(),
        ));
    }
    if polys.len() != breaks.len() - 1 {
        return Err(Error::Density(format!(
            "{} breakpoints require {} coefficient lists, got {}",
            breaks.len(),
            breaks.len() - 1,
            polys.len()
        )));
    }
    if breaks.iter().any(|b| !b.is_finite())
        || polys.iter().flatten().any(|c| !c.is_finite())
    {
        return Err(Error::Density("non-finite density coefficients".into()));
    }
    if (breaks[0] - 0.0).abs() > BREAKPOINT_TOL
        || (breaks[breaks.len() - 1] - 1.0).abs() > BREAKPOINT_TOL
    {
        return Err(Error::Density(
            "breakpoints must run from 0 to 1".into(),
        ));
    }
    if breaks.windows(2).any(|w| w[1] - w[0] <= BREAKPOINT_TOL) {
        return Err(Error::Density(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    if polys.iter().any(|c| c.is_empty()) {
        return Err(Error::Density("a piece has no coefficients".into()));
    }
    Ok(())
}

fn check_continuity(breaks: &[f64], polys: &[Vec<f64>]) -> Result<()> {
    for i in 0..polys.len() - 1 {
        let b = breaks[i + 1];
        let left = poly_eval(&polys[i], b);
        let right = poly_eval(&polys[i + 1], b);
        let tol = CONTINUITY_TOL * left.abs().max(right.abs()).max(1.0);
        if (left - right).abs() > tol {
            return Err(Error::Density(format!(
                "discontinuity at breakpoint {b}: {left} vs {right}"
            )));
        }
    }
    Ok(())
}

fn check_nonnegative(breaks: &[f64], polys: &[Vec<f64>]) -> Result<()> {
    for (i, poly) in polys.iter().enumerate() {
        let (lo, hi) = (breaks[i], breaks[i + 1]);
        let scale = poly.iter().map(|c| c.abs()).fold(1.0, f64::max);
        let tol = -NONNEG_TOL * scale;
        let at = |t: f64| poly_eval(poly, lo + t * (hi - lo));
        let mut grid = Vec::with_capacity(GRID_PER_PIECE + 1);
        for k in 0..=GRID_PER_PIECE {
            grid.push(at(k as f64 / GRID_PER_PIECE as f64));
        }
        for (k, &v) in grid.iter().enumerate() {
            if v < tol {
                return Err(Error::Density(format!(
                    "density negative ({v}) near {}",
                    lo + (hi - lo) * k as f64 / GRID_PER_PIECE as f64
                )));
            }
            // Refine interior local minima of the grid.
            if k > 0 && k + 1 < grid.len() && v <= grid[k - 1] && v <= grid[k + 1] {
                let (mut a, mut b) = (
                    (k - 1) as f64 / GRID_PER_PIECE as f64,
                    (k + 1) as f64 / GRID_PER_PIECE as f64,
                );
                for _ in 0..50 {
                    let m1 = a + (b - a) / 3.0;
                    let m2 = b - (b - a) / 3.0;
                    if at(m1) < at(m2) {
                        b = m2;
                    } else {
                        a = m1;
                    }
                }
                let v = at(0.5 * (a + b));
                if v < tol {
                    return Err(Error::Density(format!(
                        "density negative ({v}) near {}",
                        lo + (hi - lo) * 0.5 * (a + b)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Positivity runs of the (normalized) pieces, refined at the edges and
/// merged across breakpoints.
fn positivity_support(pieces: &[Piece]) -> Vec<(f64, f64)> {
    let mut runs: Vec<(f64, f64)> = Vec::new();
    for piece in pieces {
        let at = |x: f64| poly_eval(&piece.coeffs, x);
        let x_of = |k: usize| {
            piece.lo + (piece.hi - piece.lo) * k as f64 / GRID_PER_PIECE as f64
        };
        let mut run_start: Option<usize> = None;
        for k in 0..=GRID_PER_PIECE {
            let positive = at(x_of(k)) > 0.0;
            match (run_start, positive) {
                (None, true) => run_start = Some(k),
                (Some(s), false) => {
                    runs.push(refine_run(piece, s, k - 1));
                    run_start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = run_start {
            runs.push(refine_run(piece, s, GRID_PER_PIECE));
        }
    }
    // Merge runs that touch (within one grid step) across pieces or gaps.
    let step = 1.0 / GRID_PER_PIECE as f64;
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in runs {
        match merged.last_mut() {
            Some((_, last_e)) if s - *last_e <= step => *last_e = (*last_e).max(e),
            _ => merged.push((s, e)),
        }
    }
    merged
}

/// Tightens a positive grid run `[k_lo, k_hi]` to the polynomial's actual
/// zero crossings by bisection.
fn refine_run(piece: &Piece, k_lo: usize, k_hi: usize) -> (f64, f64) {
    let at = |x: f64| poly_eval(&piece.coeffs, x);
    let x_of = |k: usize| piece.lo + (piece.hi - piece.lo) * k as f64 / GRID_PER_PIECE as f64;
    let mut start = x_of(k_lo);
    if k_lo > 0 {
        let (mut a, mut b) = (x_of(k_lo - 1), x_of(k_lo));
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if at(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        start = 0.5 * (a + b);
    }
    let mut end = x_of(k_hi);
    if k_hi < GRID_PER_PIECE {
        let (mut a, mut b) = (x_of(k_hi), x_of(k_hi + 1));
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if at(m) > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        end = 0.5 * (a + b);
    }
    (start, end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_is_identity_cdf() {
        let d = Density::uniform();
        assert!(d.is_uniform());
        assert_abs_diff_eq!(d.cdf(0.37), 0.37, epsilon = 1e-15);
        assert_abs_diff_eq!(d.quantile(0.37), 0.37, epsilon = 1e-15);
        assert_eq!(d.support(), &[(0.0, 1.0)]);
    }

    #[test]
    fn linear_density_accepted_unchanged() {
        // 2v integrates to 1 already.
        let d = Density::new(&DensitySpec::Poly {
            coeffs: vec![0.0, 2.0],
        })
        .unwrap();
        assert_abs_diff_eq!(d.pdf(0.5), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.cdf(0.5), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn unnormalized_density_scaled() {
        // v normalizes to 2v.
        let d = Density::new(&DensitySpec::Poly {
            coeffs: vec![0.0, 1.0],
        })
        .unwrap();
        assert_abs_diff_eq!(d.pdf(1.0), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.cdf(1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quantile_matches_analytic_inverse() {
        // CDF of 2v is v^2, so quantile(u) = sqrt(u).
        let d = Density::new(&DensitySpec::Poly {
            coeffs: vec![0.0, 2.0],
        })
        .unwrap();
        for &u in &[0.0, 0.01, 0.25, 0.5, 0.81, 0.999, 1.0] {
            assert_abs_diff_eq!(d.quantile(u), u.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn piecewise_tent_density() {
        // Tent: 4v on [0, 1/2], 4 - 4v on [1/2, 1]; already normalized.
        let d = Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.5, 1.0],
            coeffs: vec![vec![0.0, 4.0], vec![4.0, -4.0]],
        })
        .unwrap();
        assert_abs_diff_eq!(d.pdf(0.5), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.cdf(0.5), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.mass(0.25, 0.75), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(d.quantile(0.5), 0.5, epsilon = 1e-11);
        // CDF on the left half is 2v^2: quantile(0.125) = 0.25.
        assert_abs_diff_eq!(d.quantile(0.125), 0.25, epsilon = 1e-11);
    }

    #[test]
    fn rejections() {
        // Discontinuous at 0.5.
        assert!(Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.5, 1.0],
            coeffs: vec![vec![1.0], vec![2.0]],
        })
        .is_err());
        // Negative region: 2v - 1 dips below zero on [0, 1/2).
        assert!(Density::new(&DensitySpec::Poly {
            coeffs: vec![-1.0, 2.0],
        })
        .is_err());
        // Zero total mass.
        assert!(Density::new(&DensitySpec::Poly { coeffs: vec![0.0] }).is_err());
        // Bad breakpoints.
        assert!(Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.5],
            coeffs: vec![vec![1.0]],
        })
        .is_err());
        assert!(Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.6, 0.4, 1.0],
            coeffs: vec![vec![1.0], vec![1.0], vec![1.0]],
        })
        .is_err());
    }

    #[test]
    fn support_excludes_zero_pieces() {
        // Ramps down to zero at 0.3, stays zero until 0.7, ramps back up.
        let d = Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.3, 0.7, 1.0],
            coeffs: vec![vec![0.3, -1.0], vec![0.0], vec![-0.7, 1.0]],
        })
        .unwrap();
        let support = d.support();
        assert_eq!(support.len(), 2);
        assert_abs_diff_eq!(support[0].0, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(support[0].1, 0.3, epsilon = 1e-3);
        assert_abs_diff_eq!(support[1].0, 0.7, epsilon = 1e-3);
        assert_abs_diff_eq!(support[1].1, 1.0, epsilon = 1e-9);
        // Mass concentrates on the support.
        assert_abs_diff_eq!(d.mass(0.0, 0.3), 0.5, epsilon = 1e-9);
        let pts = d.support_points(10);
        assert!(pts.iter().all(|&p| !(0.35..0.65).contains(&p)));
    }

    #[test]
    fn parabola_touching_zero_keeps_full_support() {
        // (v - 1/2)^2 touches zero at an isolated point; the closed support
        // is still one interval.
        let d = Density::new(&DensitySpec::Poly {
            coeffs: vec![0.25, -1.0, 1.0],
        })
        .unwrap();
        assert_eq!(d.support().len(), 1);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: DensitySpec = serde_json::from_str(r#"{"type":"poly","coeffs":[0,2]}"#).unwrap();
        assert_eq!(
            spec,
            DensitySpec::Poly {
                coeffs: vec![0.0, 2.0]
            }
        );
        let text = serde_json::to_string(&spec).unwrap();
        let back: DensitySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let u: DensitySpec = serde_json::from_str(r#"{"type":"uniform"}"#).unwrap();
        assert_eq!(u, DensitySpec::Uniform);
    }

    #[test]
    fn quantile_monotone_and_in_range() {
        let d = Density::new(&DensitySpec::Piecewise {
            breakpoints: vec![0.0, 0.25, 0.75, 1.0],
            coeffs: vec![vec![0.0, 8.0], vec![2.0], vec![8.0, -8.0]],
        })
        .unwrap();
        let mut prev = 0.0;
        for k in 0..=1000 {
            let q = d.quantile(k as f64 / 1000.0);
            assert!((0.0..=1.0).contains(&q));
            assert!(q >= prev - 1e-12);
            prev = q;
        }
    }
}
