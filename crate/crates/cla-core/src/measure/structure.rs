//! Random continuous structures and their sampler.

use crate::error::{Error, Result};
use crate::logic::IdentityPattern;
use crate::measure::{Density, DensityModel, FlatLayout};
use crate::rng::{seek_cell, structure_rng};

/// A finite structure assigning each relation cell a value in `[0,1]`.
/// Values are stored row-major per relation, in signature order.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousStructure {
    n: usize,
    data: Vec<Vec<f64>>,
}

impl ContinuousStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The value of relation `rel` (signature index) at `tuple` (0-based
    /// elements).
    pub fn value(&self, rel: usize, tuple: &[usize]) -> f64 {
        self.data[rel][self.row_major(tuple)]
    }

    fn row_major(&self, tuple: &[usize]) -> usize {
        let mut idx = 0;
        for &t in tuple {
            debug_assert!(t < self.n);
            idx = idx * self.n + t;
        }
        idx
    }

    /// All values of one relation, row-major.
    pub fn relation_values(&self, rel: usize) -> &[f64] {
        &self.data[rel]
    }
}

/// Encodes the identity pattern of a small tuple as first-occurrence block
/// ids, four bits per position; used to memoize density lookups per cell.
fn pattern_key(tuple: &[usize]) -> u64 {
    debug_assert!(tuple.len() <= 16);
    let mut key = 0u64;
    let mut blocks = [0u8; 16];
    let mut next = 0u8;
    for (i, &t) in tuple.iter().enumerate() {
        let block = match tuple[..i].iter().position(|&s| s == t) {
            Some(j) => blocks[j],
            None => {
                next += 1;
                next - 1
            }
        };
        blocks[i] = block;
        key |= (block as u64) << (4 * i);
    }
    key
}

/// Draws one structure from the product measure: every cell gets an
/// independent value from the density keyed by its relation and its tuple's
/// identity pattern.
///
/// The random stream is positioned per cell index, so a cell's value depends
/// only on `(master_seed, structure_index, cell)` — structures over larger
/// domains extend structures over smaller ones, and the iteration order is
/// immaterial.
pub fn sample_structure(
    model: &DensityModel,
    n: usize,
    master_seed: u64,
    structure_index: u64,
) -> Result<ContinuousStructure> {
    if n == 0 {
        return Err(Error::Config("domain size must be at least 1".into()));
    }
    let sig = model.signature();
    let layout = FlatLayout::new(sig, n);
    if layout.total_cells() > (1 << 30) {
        return Err(Error::Config(format!(
            "structure with {} cells is too large",
            layout.total_cells()
        )));
    }
    let mut data: Vec<Vec<f64>> = sig
        .relations()
        .iter()
        .map(|r| vec![0.0; n.pow(r.arity as u32)])
        .collect();

    // Per relation slot, memoized pattern -> density resolution.
    let mut resolved: Vec<Vec<(u64, &Density)>> = vec![Vec::new(); layout.relations().len()];

    let mut rng = structure_rng(master_seed, structure_index);
    layout.for_each_cell(|slot, sig_idx, tuple, cell| {
        let key = pattern_key(tuple);
        let density = match resolved[slot].iter().find(|(k, _)| *k == key) {
            Some((_, d)) => *d,
            None => {
                let name = &layout.relations()[slot].1.name;
                let d = model.density_for(name, &IdentityPattern::of_tuple(tuple));
                resolved[slot].push((key, d));
                d
            }
        };
        seek_cell(&mut rng, cell);
        let u = rand::Rng::gen::<f64>(&mut rng);
        let mut idx = 0;
        for &t in tuple {
            idx = idx * n + t;
        }
        data[sig_idx][idx] = density.quantile(u);
    });

    Ok(ContinuousStructure { n, data })
}
