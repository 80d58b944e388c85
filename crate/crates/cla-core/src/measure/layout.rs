//! Flat enumeration of relation cells.
//!
//! A cell is a pair (relation, argument tuple over `{0, …, n-1}`). Cells are
//! ordered by (max element of the tuple, relation name, lexicographic tuple),
//! which makes the order prefix-closed: the cells over a domain of size `m`
//! are exactly the first `total_cells(m)` cells over any larger domain. Cell
//! indices therefore identify a cell independently of the domain size, which
//! is what ties one random stream position to one cell when sampling.

use crate::logic::{Relation, Signature};

/// The cell enumeration for a signature at domain size `n`.
#[derive(Debug, Clone)]
pub struct FlatLayout {
    /// Relations sorted by name, with their index in the signature.
    rels: Vec<(usize, Relation)>,
    n: usize,
}

fn pow(base: u128, exp: usize) -> u128 {
    base.pow(exp as u32)
}

impl FlatLayout {
    pub fn new(sig: &Signature, n: usize) -> FlatLayout {
        let mut rels: Vec<(usize, Relation)> = sig
            .relations()
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.clone()))
            .collect();
        rels.sort_by(|a, b| a.1.name.cmp(&b.1.name));
        FlatLayout { rels, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells: the sum over relations of `n^arity`.
    pub fn total_cells(&self) -> u128 {
        self.rels
            .iter()
            .map(|(_, r)| pow(self.n as u128, r.arity))
            .sum()
    }

    /// The position of a cell in the enumeration, independent of `n`.
    pub fn cell_index(&self, rel_sorted: usize, tuple: &[usize]) -> u128 {
        let m = *tuple.iter().max().expect("tuples are nonempty") as u128;
        // All cells whose tuples stay below level m.
        let mut index: u128 = self.rels.iter().map(|(_, r)| pow(m, r.arity)).sum();
        // Level-m cells of relations that precede this one.
        for (_, r) in &self.rels[..rel_sorted] {
            index += pow(m + 1, r.arity) - pow(m, r.arity);
        }
        // Lexicographic rank among level-m tuples: digits below `tuple[i]`
        // can never equal m, so the completion count per digit depends only
        // on whether the prefix already contains m.
        let arity = self.rels[rel_sorted].1.arity;
        let mut seen_m = false;
        for (i, &t) in tuple.iter().enumerate() {
            let rest = arity - i - 1;
            let per_digit = if seen_m {
                pow(m + 1, rest)
            } else {
                pow(m + 1, rest) - pow(m, rest)
            };
            index += t as u128 * per_digit;
            seen_m |= t as u128 == m;
        }
        index
    }

    /// Streams every cell in enumeration order as
    /// `(sorted-relation slot, signature index of the relation, tuple,
    /// cell index)`.
    pub fn for_each_cell<F: FnMut(usize, usize, &[usize], u128)>(&self, mut f: F) {
        let mut counter: u128 = 0;
        for m in 0..self.n {
            for (slot, (sig_idx, rel)) in self.rels.iter().enumerate() {
                let mut buf = vec![0usize; rel.arity];
                level_tuples(&mut buf, 0, false, m, &mut |tuple| {
                    f(slot, *sig_idx, tuple, counter);
                    counter += 1;
                });
            }
        }
    }

    /// Relations in layout (name) order, with their signature index.
    pub fn relations(&self) -> &[(usize, Relation)] {
        &self.rels
    }
}

/// Emits, in lexicographic order, every tuple over `{0,…,m}` whose maximum
/// is exactly `m`.
fn level_tuples<F: FnMut(&[usize])>(
    buf: &mut [usize],
    pos: usize,
    seen_m: bool,
    m: usize,
    f: &mut F,
) {
    let arity = buf.len();
    if pos == arity {
        f(buf);
        return;
    }
    if pos == arity - 1 && !seen_m {
        buf[pos] = m;
        f(buf);
        return;
    }
    for d in 0..=m {
        buf[pos] = d;
        level_tuples(buf, pos + 1, seen_m || d == m, m, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::from_pairs(vec![("R", 1), ("E", 2)]).unwrap()
    }

    #[test]
    fn total_cells_sums_powers() {
        let layout = FlatLayout::new(&sig(), 3);
        assert_eq!(layout.total_cells(), 3 + 9);
        let layout = FlatLayout::new(&sig(), 0);
        assert_eq!(layout.total_cells(), 0);
    }

    #[test]
    fn enumeration_matches_cell_index_and_is_bijective() {
        let s = Signature::from_pairs(vec![("R", 1), ("E", 2), ("T", 3)]).unwrap();
        let layout = FlatLayout::new(&s, 4);
        let mut seen = vec![false; layout.total_cells() as usize];
        layout.for_each_cell(|slot, _, tuple, idx| {
            assert_eq!(layout.cell_index(slot, tuple), idx);
            assert!(!seen[idx as usize], "index {idx} repeated");
            seen[idx as usize] = true;
        });
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn order_is_prefix_closed() {
        let small = FlatLayout::new(&sig(), 2);
        let large = FlatLayout::new(&sig(), 5);
        let mut small_cells = Vec::new();
        small.for_each_cell(|slot, _, tuple, idx| small_cells.push((slot, tuple.to_vec(), idx)));
        let mut large_cells = Vec::new();
        large.for_each_cell(|slot, _, tuple, idx| {
            if idx < small.total_cells() {
                large_cells.push((slot, tuple.to_vec(), idx));
            }
        });
        assert_eq!(small_cells, large_cells);
    }

    #[test]
    fn order_groups_by_max_then_name() {
        let layout = FlatLayout::new(&sig(), 2);
        let mut cells = Vec::new();
        layout.for_each_cell(|slot, _, tuple, _| {
            cells.push((layout.relations()[slot].1.name.clone(), tuple.to_vec()));
        });
        // Level 0: E before R by name; level 1: E tuples with a 1, then R(1).
        let expected: Vec<(String, Vec<usize>)> = vec![
            ("E".into(), vec![0, 0]),
            ("R".into(), vec![0]),
            ("E".into(), vec![0, 1]),
            ("E".into(), vec![1, 0]),
            ("E".into(), vec![1, 1]),
            ("R".into(), vec![1]),
        ];
        assert_eq!(cells, expected);
    }
}
