//! Pattern-satisfying tuple selection with a uniform subsample cap.

use std::collections::HashSet;

use rand::Rng;

use crate::logic::IdentityPattern;
use crate::rng::task_rng;

/// All tuples over `[0, n)` satisfying the pattern, or a uniform random
/// subsample of `cap` of them when there are more. Deterministic in
/// `(seed, n)` and independent of thread count; tuples come back in
/// increasing rank order.
pub(crate) fn select_tuples(
    pattern: &IdentityPattern,
    n: usize,
    cap: u64,
    seed: u64,
) -> (Vec<Vec<usize>>, bool) {
    let total = pattern.count_satisfying(n);
    let capped = total > u128::from(cap);
    let ranks: Vec<u128> = if capped {
        let mut rng = task_rng(seed, &format!("tuple-subsample-{n}"));
        let mut seen = HashSet::with_capacity(cap as usize);
        while (seen.len() as u64) < cap {
            seen.insert(rng.gen_range(0..total));
        }
        let mut ranks: Vec<u128> = seen.into_iter().collect();
        ranks.sort_unstable();
        ranks
    } else {
        (0..total).collect()
    };
    let tuples = ranks
        .into_iter()
        .map(|r| pattern.tuple_from_block_values(&pattern.unrank_block_values(n, r)))
        .collect();
    (tuples, capped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_enumeration_below_the_cap() {
        let p = IdentityPattern::all_distinct(2);
        let (tuples, capped) = select_tuples(&p, 4, 100, 0);
        assert!(!capped);
        assert_eq!(tuples.len(), 12);
        assert!(tuples.iter().all(|t| p.matches(t)));
    }

    #[test]
    fn subsample_is_deterministic_and_distinct() {
        let p = IdentityPattern::all_distinct(3);
        let (a, capped) = select_tuples(&p, 50, 200, 7);
        let (b, _) = select_tuples(&p, 50, 200, 7);
        assert!(capped);
        assert_eq!(a.len(), 200);
        assert_eq!(a, b);
        let distinct: HashSet<&Vec<usize>> = a.iter().collect();
        assert_eq!(distinct.len(), 200);
        assert!(a.iter().all(|t| p.matches(t)));
    }

    #[test]
    fn empty_pattern_yields_the_empty_tuple() {
        let p = IdentityPattern::empty();
        let (tuples, capped) = select_tuples(&p, 10, 5, 0);
        assert!(!capped);
        assert_eq!(tuples, vec![Vec::<usize>::new()]);
    }
}
