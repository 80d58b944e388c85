//! Identity patterns: canonical equality constraints on tuple positions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set partition of the positions `0..k` of a tuple: positions in the same
/// block are constrained equal, positions in distinct blocks distinct.
///
/// The canonical representation numbers blocks by first occurrence, so two
/// patterns are equal iff they constrain tuples identically. The JSON form
/// lists blocks of 1-based positions, e.g. `[[1,3],[2]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct IdentityPattern {
    /// `block_of[i]` = block index of position `i`; blocks numbered in order
    /// of first occurrence.
    block_of: Vec<usize>,
}

impl From<IdentityPattern> for Vec<Vec<usize>> {
    fn from(p: IdentityPattern) -> Self {
        p.blocks()
    }
}

impl TryFrom<Vec<Vec<usize>>> for IdentityPattern {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        IdentityPattern::from_blocks(&blocks)
    }
}

impl IdentityPattern {
    /// The empty pattern (for sentences / zero-length tuples).
    pub fn empty() -> Self {
        Self { block_of: vec![] }
    }

    /// The all-distinct pattern on `k` positions.
    pub fn all_distinct(k: usize) -> Self {
        Self {
            block_of: (0..k).collect(),
        }
    }

    /// The equality pattern of a concrete tuple.
    pub fn of_tuple<T: PartialEq>(tuple: &[T]) -> Self {
        let mut block_of = Vec::with_capacity(tuple.len());
        let mut next = 0usize;
        for (i, v) in tuple.iter().enumerate() {
            match tuple[..i].iter().position(|u| u == v) {
                Some(j) => block_of.push(block_of[j]),
                None => {
                    block_of.push(next);
                    next += 1;
                }
            }
        }
        Self { block_of }
    }

    /// Builds a pattern from blocks of 1-based positions. The blocks must be
    /// nonempty, disjoint, and cover `1..=k` for `k` the total position count.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let size: usize = blocks.iter().map(Vec::len).sum();
        let mut raw = vec![usize::MAX; size];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Pattern("empty block".into()));
            }
            for &pos in block {
                if pos == 0 || pos > size {
                    return Err(Error::Pattern(format!(
                        "position {pos} out of range 1..={size}"
                    )));
                }
                if raw[pos - 1] != usize::MAX {
                    return Err(Error::Pattern(format!(
                        "position {pos} appears in more than one block"
                    )));
                }
                raw[pos - 1] = b;
            }
        }
        // Renumber blocks by first occurrence for canonicity.
        let mut remap = vec![usize::MAX; blocks.len()];
        let mut next = 0usize;
        let block_of = raw
            .into_iter()
            .map(|b| {
                if remap[b] == usize::MAX {
                    remap[b] = next;
                    next += 1;
                }
                remap[b]
            })
            .collect();
        Ok(Self { block_of })
    }

    /// Number of positions.
    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    /// Number of blocks (distinct values a satisfying tuple takes).
    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().copied().max().map_or(0, |b| b + 1)
    }

    /// Block index of a 0-based position.
    pub fn block_of(&self, pos: usize) -> usize {
        self.block_of[pos]
    }

    /// First (0-based) position of the given block.
    pub fn representative(&self, block: usize) -> usize {
        self.block_of
            .iter()
            .position(|&b| b == block)
            .expect("block index in range")
    }

    /// Blocks of 1-based positions, each ascending, ordered by first position.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        blocks
    }

    /// The induced pattern on a selection of 0-based positions. Repeats are
    /// allowed (a repeated position forces equality of the corresponding
    /// output positions); an empty selection is an error.
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Pattern("cannot restrict to no positions".into()));
        }
        let mut remap: Vec<usize> = vec![usize::MAX; self.num_blocks()];
        let mut next = 0usize;
        let block_of = positions
            .iter()
            .map(|&pos| {
                if pos >= self.size() {
                    return Err(Error::Pattern(format!(
                        "position {pos} out of range for pattern of size {}",
                        self.size()
                    )));
                }
                let b = self.block_of[pos];
                if remap[b] == usize::MAX {
                    remap[b] = next;
                    next += 1;
                }
                Ok(remap[b])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { block_of })
    }

    /// Extends the pattern by one position in a fresh singleton block
    /// (the constraint "and the new variable differs from all others").
    pub fn extend_fresh(&self) -> Self {
        let mut block_of = self.block_of.clone();
        block_of.push(self.num_blocks());
        Self { block_of }
    }

    /// Whether a concrete tuple satisfies exactly this pattern.
    pub fn matches<T: PartialEq>(&self, tuple: &[T]) -> bool {
        tuple.len() == self.size() && Self::of_tuple(tuple).block_of == self.block_of
    }

    /// The tuple whose position `i` takes `values[block_of(i)]`. With
    /// pairwise-distinct block values the result satisfies the pattern.
    pub fn tuple_from_block_values(&self, values: &[usize]) -> Vec<usize> {
        debug_assert_eq!(values.len(), self.num_blocks());
        self.block_of.iter().map(|&b| values[b]).collect()
    }

    /// Number of tuples in `[n]^size` satisfying the pattern: the falling
    /// factorial `n (n-1) ... (n - blocks + 1)`.
    pub fn count_satisfying(&self, n: usize) -> u128 {
        let b = self.num_blocks();
        let mut count: u128 = 1;
        for i in 0..b {
            if i >= n {
                return 0;
            }
            count *= (n - i) as u128;
        }
        count
    }

    /// The `rank`-th (0-based) injective block-value tuple over `[0, n)`, in
    /// the mixed-radix order where block 0 varies slowest.
    pub fn unrank_block_values(&self, n: usize, rank: u128) -> Vec<usize> {
        let b = self.num_blocks();
        debug_assert!(rank < self.count_satisfying(n));
        // Radix per block position i is n - i.
        let mut digits = vec![0usize; b];
        let mut r = rank;
        for i in (0..b).rev() {
            let radix = (n - i) as u128;
            digits[i] = (r % radix) as usize;
            r /= radix;
        }
        // Convert Lehmer-style digits to distinct values.
        let mut pool: Vec<usize> = (0..n).collect();
        digits
            .into_iter()
            .map(|d| pool.remove(d))
            .collect()
    }
}

impl std::fmt::Display for IdentityPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks = self.blocks();
        write!(f, "{{")?;
        for (i, block) in blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, pos) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{pos}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_of_tuples() {
        assert_eq!(
            IdentityPattern::of_tuple(&[3, 5]).blocks(),
            vec![vec![1], vec![2]]
        );
        assert_eq!(
            IdentityPattern::of_tuple(&[3, 3]).blocks(),
            vec![vec![1, 2]]
        );
        assert_eq!(
            IdentityPattern::of_tuple(&[2, 5, 2]).blocks(),
            vec![vec![1, 3], vec![2]]
        );
    }

    #[test]
    fn restrict_examples() {
        let p = IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap();
        assert_eq!(
            p.restrict(&[0, 1]).unwrap(),
            IdentityPattern::all_distinct(2)
        );
        let q = IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap();
        assert_eq!(
            q.restrict(&[0, 0]).unwrap(),
            IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap()
        );
        let r = IdentityPattern::all_distinct(3);
        assert_eq!(
            r.restrict(&[2, 0]).unwrap(),
            IdentityPattern::all_distinct(2)
        );
        assert!(r.restrict(&[]).is_err());
        assert!(r.restrict(&[3]).is_err());
    }

    #[test]
    fn extend_fresh_examples() {
        assert_eq!(
            IdentityPattern::all_distinct(1).extend_fresh(),
            IdentityPattern::all_distinct(2)
        );
        assert_eq!(
            IdentityPattern::from_blocks(&[vec![1, 2]])
                .unwrap()
                .extend_fresh()
                .blocks(),
            vec![vec![1, 2], vec![3]]
        );
        assert_eq!(
            IdentityPattern::empty().extend_fresh(),
            IdentityPattern::all_distinct(1)
        );
    }

    #[test]
    fn matches_is_exact() {
        let p = IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap();
        assert!(p.matches(&[7, 2, 7]));
        assert!(!p.matches(&[7, 7, 7]));
        assert!(!p.matches(&[7, 2, 3]));
        assert!(!p.matches(&[7, 2]));
    }

    #[test]
    fn from_blocks_rejects_bad_input() {
        assert!(IdentityPattern::from_blocks(&[vec![1], vec![1]]).is_err());
        assert!(IdentityPattern::from_blocks(&[vec![1, 3]]).is_err());
        assert!(IdentityPattern::from_blocks(&[vec![]]).is_err());
        assert!(IdentityPattern::from_blocks(&[vec![0, 1]]).is_err());
    }

    #[test]
    fn canonical_across_block_orderings() {
        let a = IdentityPattern::from_blocks(&[vec![2], vec![1, 3]]).unwrap();
        let b = IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_form_is_one_based_blocks() {
        let p = IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, "[[1,3],[2]]");
        let back: IdentityPattern = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn satisfying_tuple_enumeration() {
        let p = IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap();
        let n = 4;
        assert_eq!(p.count_satisfying(n), 12);
        let mut seen = std::collections::HashSet::new();
        for rank in 0..12u128 {
            let vals = p.unrank_block_values(n, rank);
            let tuple = p.tuple_from_block_values(&vals);
            assert!(p.matches(&tuple));
            assert!(seen.insert(tuple));
        }
        assert_eq!(p.count_satisfying(1), 0);
    }
}
