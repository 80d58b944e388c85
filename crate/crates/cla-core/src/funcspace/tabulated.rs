//! Grid-tabulated continuous functions with multilinear interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function `[0,1]^arity -> [0,1]` stored as values on a tensor grid and
/// evaluated by multilinear interpolation.
///
/// Values are stored row-major with the last axis varying fastest. Arity 0
/// is allowed and denotes a constant (one stored value, empty grid list).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TabulatedConnective {
    arity: usize,
    grids: Vec<Vec<f64>>,
    values: Vec<f64>,
    strides: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    arity: usize,
    grids: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl From<TabulatedConnective> for RawTable {
    fn from(t: TabulatedConnective) -> Self {
        RawTable {
            arity: t.arity,
            grids: t.grids,
            values: t.values,
        }
    }
}

impl TryFrom<RawTable> for TabulatedConnective {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        if raw.grids.len() != raw.arity {
            return Err(Error::Formula(format!(
                "tabulated connective declares arity {} but has {} grid axes",
                raw.arity,
                raw.grids.len()
            )));
        }
        TabulatedConnective::new(raw.grids, raw.values)
    }
}

/// `nodes` equally spaced grid nodes on `[0,1]`, endpoints included.
pub fn uniform_grid(nodes: usize) -> Vec<f64> {
    assert!(nodes >= 2, "a grid axis needs at least 2 nodes");
    (0..nodes)
        .map(|i| i as f64 / (nodes - 1) as f64)
        .collect()
}

impl TabulatedConnective {
    /// Builds a table from per-axis node lists and row-major values.
    pub fn new(grids: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        for (axis, grid) in grids.iter().enumerate() {
            if grid.len() < 2 {
                return Err(Error::Formula(format!(
                    "grid axis {axis} has {} nodes; at least 2 required",
                    grid.len()
                )));
            }
            if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
                return Err(Error::Formula(format!(
                    "grid axis {axis} must start at 0 and end at 1"
                )));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Formula(format!(
                    "grid axis {axis} nodes must be strictly increasing"
                )));
            }
        }
        let expected: usize = grids.iter().map(Vec::len).product();
        if values.len() != expected {
            return Err(Error::Formula(format!(
                "tabulated connective stores {} values but the grid has {expected} points",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Formula(format!(
                "tabulated value {v} outside [0,1]"
            )));
        }
        let mut strides = vec![1usize; grids.len()];
        for axis in (0..grids.len().saturating_sub(1)).rev() {
            strides[axis] = strides[axis + 1] * grids[axis + 1].len();
        }
        Ok(Self {
            arity: grids.len(),
            grids,
            values,
            strides,
        })
    }

    /// Tabulates `oracle` at every grid point. Oracle values outside `[0,1]`
    /// are clamped; the number of clamped points is returned alongside so
    /// callers can surface a diagnostic.
    pub fn from_fn<F>(grids: Vec<Vec<f64>>, mut oracle: F) -> Result<(Self, usize)>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let total: usize = grids.iter().map(Vec::len).product();
        let mut values = Vec::with_capacity(total);
        let mut clamped = 0usize;
        let mut idx = vec![0usize; grids.len()];
        let mut point = vec![0.0f64; grids.len()];
        for _ in 0..total {
            for (a, &i) in idx.iter().enumerate() {
                point[a] = grids[a][i];
            }
            let raw = oracle(&point);
            if !raw.is_finite() {
                return Err(Error::Numeric(format!(
                    "tabulation oracle returned non-finite value at {point:?}"
                )));
            }
            if !(0.0..=1.0).contains(&raw) {
                clamped += 1;
            }
            values.push(raw.clamp(0.0, 1.0));
            // Row-major advance: last axis fastest.
            for a in (0..idx.len()).rev() {
                idx[a] += 1;
                if idx[a] < grids[a].len() {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok((Self::new(grids, values)?, clamped))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn grids(&self) -> &[Vec<f64>] {
        &self.grids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value stored at the grid point with the given per-axis node indices.
    pub fn value_at(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.arity);
        let flat: usize = idx
            .iter()
            .zip(&self.strides)
            .map(|(i, s)| i * s)
            .sum();
        self.values[flat]
    }

    /// Multilinear interpolation; arguments are clamped into `[0,1]`.
    pub fn eval(&self, args: &[f64]) -> f64 {
        debug_assert_eq!(args.len(), self.arity);
        if self.arity == 0 {
            return self.values[0];
        }
        // Per axis: lower node index and interpolation weight.
        let mut lo = [0usize; 8];
        let mut t = [0.0f64; 8];
        debug_assert!(self.arity <= 8, "tabulated arity beyond practical range");
        for (a, grid) in self.grids.iter().enumerate() {
            let x = args[a].clamp(0.0, 1.0);
            let mut j = grid.partition_point(|g| *g <= x);
            // x == 1.0 lands past the final node; use the last cell.
            j = j.clamp(1, grid.len() - 1) - 1;
            lo[a] = j;
            t[a] = (x - grid[j]) / (grid[j + 1] - grid[j]);
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << self.arity) {
            let mut w = 1.0;
            let mut flat = 0usize;
            for a in 0..self.arity {
                let hi = (corner >> a) & 1 == 1;
                w *= if hi { t[a] } else { 1.0 - t[a] };
                flat += (lo[a] + usize::from(hi)) * self.strides[a];
            }
            if w != 0.0 {
                acc += w * self.values[flat];
            }
        }
        acc
    }

    /// Smallest and largest stored value.
    pub fn value_bounds(&self) -> (f64, f64) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// A Lipschitz bound in the sup norm: the sum over axes of the steepest
    /// per-cell slope along that axis.
    pub fn lipschitz(&self) -> f64 {
        let mut total = 0.0;
        for axis in 0..self.arity {
            let mut steepest: f64 = 0.0;
            let axis_len = self.grids[axis].len();
            let stride = self.strides[axis];
            for (flat, v) in self.values.iter().enumerate() {
                let i = flat / stride % axis_len;
                if i + 1 < axis_len {
                    let dv = (self.values[flat + stride] - v).abs();
                    let dx = self.grids[axis][i + 1] - self.grids[axis][i];
                    steepest = steepest.max(dv / dx);
                }
            }
            total += steepest;
        }
        total
    }
}
