//! Empirical continuity falsifier for aggregation functions.
//!
//! An aggregation function `F` is continuous when two conditions hold:
//!
//! 1. (pointwise stability) for every `eps` there is `delta` such that
//!    same-length sequences within sup-distance `delta` have `F`-values
//!    within `eps`;
//! 2. (histogram stability) for every `eps` there are `delta`, `M`, `N`
//!    such that any two sequences of length at least `N` whose per-bin
//!    proportions (bins `[i/M, (i+1)/M]`) both lie within `delta` of a
//!    common profile `alpha_0..alpha_{M-1}` — where positive `alpha_i`
//!    exceed `delta` (a), the positive bins are contiguous (c), and zero
//!    bins lying beyond another zero bin are genuinely empty (d) — have
//!    `F`-values within `eps`.
//!
//! The falsifier searches for a violation at *fixed* `(eps, delta, M, N)`:
//! it can refute that a given parameter choice witnesses continuity, but a
//! clean run is not a proof. Bins here are the canonical half-open partition
//! (`[i/M, (i+1)/M)`, last bin closed), so proportions sum to exactly 1.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcspace::Aggregator;
use crate::rng::task_rng;

/// Index of the bin containing `v` in the canonical `M`-bin partition.
pub fn bin_index(v: f64, m: usize) -> usize {
    debug_assert!(m >= 1);
    (((v.clamp(0.0, 1.0)) * m as f64) as usize).min(m - 1)
}

/// Per-bin proportions of a value sequence under the canonical partition.
pub fn bin_proportions(values: &[f64], m: usize) -> Vec<f64> {
    let mut counts = vec![0usize; m];
    for &v in values {
        counts[bin_index(v, m)] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / values.len() as f64)
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityParams {
    /// Gap threshold: a witness must achieve `|F - F'| > epsilon`.
    pub epsilon: f64,
    /// Perturbation / proportion tolerance.
    pub delta: f64,
    /// Histogram bin count `M`.
    pub bins: usize,
    /// Minimum sequence length `N` for histogram witnesses.
    pub min_len: usize,
    /// Number of randomized search trials.
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityVerdict {
    Falsified,
    NoCounterexampleFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Violates condition (1): same length, sup-distance at most `delta`,
    /// gap above `epsilon`.
    PointwisePerturbation,
    /// Violates condition (2): histogram-matching pair satisfying (a)-(d)
    /// with gap above `epsilon`.
    HistogramMatch,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityWitness {
    pub kind: WitnessKind,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// The common profile `alpha_i` (histogram witnesses only).
    pub profile: Option<Vec<f64>>,
    pub left_proportions: Vec<f64>,
    pub right_proportions: Vec<f64>,
    pub gap: f64,
    /// Trial index that produced the witness (earliest across the search).
    pub trial: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub aggregator: String,
    pub verdict: ContinuityVerdict,
    pub witness: Option<ContinuityWitness>,
    pub params: ContinuityParams,
    pub trials_run: usize,
}

/// Re-checks that a pointwise witness actually violates condition (1).
pub fn check_pointwise_conditions(left: &[f64], right: &[f64], delta: f64) -> bool {
    left.len() == right.len()
        && !left.is_empty()
        && left
            .iter()
            .zip(right)
            .all(|(l, r)| (l - r).abs() <= delta + 1e-12)
}

/// Re-checks conditions (2)(a)-(d) for a histogram witness.
pub fn check_histogram_conditions(
    left: &[f64],
    right: &[f64],
    alpha: &[f64],
    delta: f64,
    min_len: usize,
) -> bool {
    let m = alpha.len();
    if m == 0 || left.len() < min_len || right.len() < min_len {
        return false; // (a)
    }
    let lp = bin_proportions(left, m);
    let rp = bin_proportions(right, m);
    for i in 0..m {
        if alpha[i] > 0.0 && alpha[i] <= delta {
            return false; // (b) positive profile entries must exceed delta
        }
        if (lp[i] - alpha[i]).abs() >= delta || (rp[i] - alpha[i]).abs() >= delta {
            return false; // (b) proportions inside the open delta-band
        }
    }
    let positives: Vec<usize> = (0..m).filter(|&i| alpha[i] > 0.0).collect();
    if let (Some(&p_lo), Some(&p_hi)) = (positives.first(), positives.last()) {
        if positives.len() != p_hi - p_lo + 1 {
            return false; // (c) positive bins contiguous
        }
        // (d) zero bins separated from the positive range by another zero
        // bin must be exactly empty in both sequences.
        for i in 0..m {
            let far_outside = i + 2 <= p_lo || i >= p_hi + 2;
            if far_outside && (lp[i] > 0.0 || rp[i] > 0.0) {
                return false;
            }
        }
    }
    true
}

/// Randomized search for continuity violations of `agg` at the given
/// parameters. Trials are independently seeded and merged in trial order,
/// so the outcome is deterministic for a fixed seed regardless of thread
/// count. "No counterexample found" is not a proof of continuity.
pub fn falsify_continuity(agg: &Aggregator, params: &ContinuityParams) -> ContinuityReport {
    let witness = (0..params.trials)
        .into_par_iter()
        .filter_map(|trial| run_trial(agg, params, trial))
        .min_by_key(|w| w.trial);
    ContinuityReport {
        aggregator: agg.name().to_string(),
        verdict: if witness.is_some() {
            ContinuityVerdict::Falsified
        } else {
            ContinuityVerdict::NoCounterexampleFound
        },
        witness,
        params: params.clone(),
        trials_run: params.trials,
    }
}

fn run_trial(agg: &Aggregator, params: &ContinuityParams, trial: usize) -> Option<ContinuityWitness> {
    let mut rng = task_rng(params.seed, &format!("continuity/{trial}"));
    if trial.is_multiple_of(2) {
        pointwise_trial(agg, params, trial / 2, &mut rng, trial)
    } else {
        histogram_trial(agg, params, &mut rng, trial)
    }
}

fn pointwise_trial(
    agg: &Aggregator,
    params: &ContinuityParams,
    variant: usize,
    rng: &mut ChaCha8Rng,
    trial: usize,
) -> Option<ContinuityWitness> {
    let n = params.min_len.max(1);
    let d = params.delta;
    let (left, right): (Vec<f64>, Vec<f64>) = match variant % 3 {
        0 => {
            // Deterministic sweep of constant sequences straddling a grid of
            // centers: catches any jump of height > epsilon at fixed delta.
            let c = ((variant / 3) % 997 + 1) as f64 / 998.0;
            (
                vec![(c - d / 2.0).clamp(0.0, 1.0); n],
                vec![(c + d / 2.0).clamp(0.0, 1.0); n],
            )
        }
        1 => {
            // Random constant straddle.
            let c: f64 = rng.gen();
            (
                vec![(c - d / 2.0).clamp(0.0, 1.0); n],
                vec![(c + d / 2.0).clamp(0.0, 1.0); n],
            )
        }
        _ => {
            // IID base sequence, per-entry signed perturbation.
            let left: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let right = left
                .iter()
                .map(|&v| {
                    let s = if rng.gen::<bool>() { d } else { -d };
                    (v + s).clamp(0.0, 1.0)
                })
                .collect();
            (left, right)
        }
    };
    let gap = (agg.eval(&left).unwrap() - agg.eval(&right).unwrap()).abs();
    if gap > params.epsilon && check_pointwise_conditions(&left, &right, params.delta) {
        let m = params.bins;
        Some(ContinuityWitness {
            kind: WitnessKind::PointwisePerturbation,
            left_proportions: bin_proportions(&left, m),
            right_proportions: bin_proportions(&right, m),
            left,
            right,
            profile: None,
            gap,
            trial,
        })
    } else {
        None
    }
}

/// Draws a random profile with contiguous positive bins, each above
/// `2 * delta`, summing to 1.
fn random_profile(m: usize, delta: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let floor = (2.0 * delta).min(0.5);
    let max_len = ((1.0 / floor) as usize).max(1).min(m);
    let len = rng.gen_range(1..=max_len);
    let lo = rng.gen_range(0..=(m - len));
    let mut alpha = vec![0.0; m];
    // Exponential weights normalize to a uniform point on the simplex.
    let weights: Vec<f64> = (0..len)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln().max(1e-12))
        .collect();
    let total: f64 = weights.iter().sum();
    let spare = 1.0 - len as f64 * floor;
    for (k, w) in weights.iter().enumerate() {
        alpha[lo + k] = floor + spare * (w / total);
    }
    alpha
}

/// Largest-remainder apportionment of `n` entries to the profile.
fn apportion_counts(alpha: &[f64], n: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = alpha.iter().map(|a| (a * n as f64) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..alpha.len()).collect();
    order.sort_by(|&i, &j| {
        let fi = alpha[i] * n as f64 - (alpha[i] * n as f64).floor();
        let fj = alpha[j] * n as f64 - (alpha[j] * n as f64).floor();
        fj.partial_cmp(&fi).unwrap().then(i.cmp(&j))
    });
    for k in 0..(n - assigned) {
        counts[order[k % alpha.len()]] += 1;
    }
    counts
}

#[derive(Clone, Copy)]
enum Placement {
    UniformIid,
    Bottom,
    Top,
    Middle,
    SharedOffset(f64),
}

fn place_values(
    counts: &[usize],
    m: usize,
    placement: Placement,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(counts.iter().sum());
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            let u = match placement {
                Placement::UniformIid => rng.gen::<f64>(),
                Placement::Bottom => 0.0,
                Placement::Top => 1.0 - 1e-9,
                Placement::Middle => 0.5,
                Placement::SharedOffset(u) => u,
            };
            out.push((i as f64 + u) / m as f64);
        }
    }
    out
}

fn histogram_trial(
    agg: &Aggregator,
    params: &ContinuityParams,
    rng: &mut ChaCha8Rng,
    trial: usize,
) -> Option<ContinuityWitness> {
    let m = params.bins;
    let n_min = params.min_len.max(1);
    let alpha = random_profile(m, params.delta, rng);
    let n_left = n_min + rng.gen_range(0..=n_min);
    let n_right = n_min + rng.gen_range(0..=n_min);
    let pick = |rng: &mut ChaCha8Rng| match rng.gen_range(0..5u32) {
        0 => Placement::UniformIid,
        1 => Placement::Bottom,
        2 => Placement::Top,
        3 => Placement::Middle,
        _ => Placement::SharedOffset(rng.gen::<f64>()),
    };
    let left_placement = pick(rng);
    let right_placement = pick(rng);
    let left = place_values(&apportion_counts(&alpha, n_left), m, left_placement, rng);
    let right = place_values(&apportion_counts(&alpha, n_right), m, right_placement, rng);
    let gap = (agg.eval(&left).unwrap() - agg.eval(&right).unwrap()).abs();
    if gap > params.epsilon
        && check_histogram_conditions(&left, &right, &alpha, params.delta, params.min_len)
    {
        Some(ContinuityWitness {
            kind: WitnessKind::HistogramMatch,
            left_proportions: bin_proportions(&left, m),
            right_proportions: bin_proportions(&right, m),
            left,
            right,
            profile: Some(alpha),
            gap,
            trial,
        })
    } else {
        None
    }
}
