//! Randomized checks of the structural laws the library promises: values
//! stay in the unit interval, the normal forms preserve values, quantifiers
//! agree with their aggregation expansion, pattern ranking round-trips,
//! aggregators are symmetric, and the density sampler matches its CDF.

use proptest::prelude::*;

use cla_core::eval::evaluate;
use cla_core::funcspace::{builtin, Aggregator};
use cla_core::logic::{
    flatten, normalize_under, Formula, IdentityPattern, NormalizedFormula, Quantifier, Signature,
    Var,
};
use cla_core::measure::{sample_structure, Density, DensityModel, DensitySpec};
use cla_core::rng::task_rng;

fn sig() -> Signature {
    Signature::from_pairs(vec![("P", 1), ("R", 1), ("E", 2)]).unwrap()
}

fn var_in(names: &'static [&'static str]) -> impl Strategy<Value = Var> {
    prop::sample::select(names).prop_map(Var::new)
}

fn leaf(names: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let s = sig();
    let (s1, s2, s3) = (s.clone(), s.clone(), s);
    prop_oneof![
        (0u32..=100).prop_map(|k| Formula::constant(f64::from(k) / 100.0).unwrap()),
        (var_in(names), var_in(names)).prop_map(|(a, b)| Formula::eq(a, b)),
        var_in(names).prop_map(move |v| Formula::atom(&s1, "P", vec![v]).unwrap()),
        var_in(names).prop_map(move |v| Formula::atom(&s2, "R", vec![v]).unwrap()),
        (var_in(names), var_in(names))
            .prop_map(move |(a, b)| Formula::atom(&s3, "E", vec![a, b]).unwrap()),
    ]
}

/// Aggregation-free formulas whose free variables come from `names`.
fn agg_free(names: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    leaf(names).prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (prop::sample::select(&["not", "identity"][..]), inner.clone())
                .prop_map(|(name, f)| Formula::conn(builtin(name).unwrap(), vec![f]).unwrap()),
            (
                prop::sample::select(
                    &["and", "or", "implies", "abs_diff", "min2", "max2", "avg2"][..]
                ),
                inner.clone(),
                inner.clone(),
            )
                .prop_map(|(name, f, g)| {
                    Formula::conn(builtin(name).unwrap(), vec![f, g]).unwrap()
                }),
            (inner.clone(), inner.clone(), inner).prop_map(|(f, g, h)| {
                Formula::conn(builtin("avg3").unwrap(), vec![f, g, h]).unwrap()
            }),
        ]
    })
}

fn aggregator() -> impl Strategy<Value = Aggregator> {
    prop_oneof![
        Just(Aggregator::Min),
        Just(Aggregator::Max),
        Just(Aggregator::Am),
    ]
}

/// An aggregation-free body over {x, y, a, b} wrapped in two nested
/// aggregations binding `a` then `b`; free variables are among {x, y}.
fn nested_aggregations() -> impl Strategy<Value = Formula> {
    (agg_free(&["x", "y", "a", "b"]), aggregator(), aggregator()).prop_map(
        |(body, inner, outer)| {
            let f = Formula::agg(inner, "a", body).unwrap();
            Formula::agg(outer, "b", f).unwrap()
        },
    )
}

/// Pairs a formula with a sampled-structure seed, a domain size, and an
/// assignment of its free variables.
fn with_assignment(
    formulas: impl Strategy<Value = Formula>,
    sizes: std::ops::Range<usize>,
) -> impl Strategy<Value = (Formula, u64, usize, Vec<usize>)> {
    (formulas, any::<u64>(), sizes).prop_flat_map(|(f, seed, n)| {
        let k = f.free_vars().len();
        (
            Just(f),
            Just(seed),
            Just(n),
            prop::collection::vec(0..n, k),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn flattening_preserves_values(
        (f, seed, n, elements) in with_assignment(agg_free(&["x", "y", "z"]), 4..9)
    ) {
        let sig = sig();
        let s = sample_structure(&DensityModel::uniform(sig.clone()), n, seed, 0).unwrap();
        let declared = f.free_var_tuple();
        let direct = evaluate(&sig, &f, &declared, &s, &elements).unwrap();
        let flat = flatten(&f).unwrap();
        let flat_value = evaluate(&sig, &flat, &declared, &s, &elements).unwrap();
        prop_assert!((direct - flat_value).abs() <= 1e-9);
    }

    #[test]
    fn normalization_preserves_values_on_matching_tuples(
        (f, raw, seed, n) in (agg_free(&["x", "y", "z"]), any::<u64>(), 6usize..9)
            .prop_flat_map(|(f, seed, n)| {
                let k = f.free_vars().len();
                (
                    Just(f),
                    prop::collection::vec(0usize..k.max(1), k),
                    Just(seed),
                    Just(n),
                )
            })
    ) {
        let sig = sig();
        let declared = f.free_var_tuple();
        let pattern = IdentityPattern::of_tuple(&raw);
        // Element i of block b is b itself: distinct representatives, all < n.
        let elements: Vec<usize> = (0..declared.len()).map(|i| pattern.block_of(i)).collect();
        let s = sample_structure(&DensityModel::uniform(sig.clone()), n, seed, 0).unwrap();
        let direct = evaluate(&sig, &f, &declared, &s, &elements).unwrap();

        let normal = normalize_under(&f, &declared, &pattern).unwrap();
        let value = match &normal {
            NormalizedFormula::Constant(c) => *c,
            NormalizedFormula::Atomic { atoms, .. } => {
                let atom_values: Vec<f64> = atoms
                    .iter()
                    .map(|a| s.value(sig.index_of(&a.rel).unwrap(), &a.blocks))
                    .collect();
                normal.value_on(&atom_values)
            }
        };
        prop_assert!((direct - value).abs() <= 1e-9);
    }

    #[test]
    fn values_stay_in_the_unit_interval(
        (f, seed, n, elements) in with_assignment(nested_aggregations(), 5..9)
    ) {
        let sig = sig();
        let s = sample_structure(&DensityModel::uniform(sig.clone()), n, seed, 0).unwrap();
        let declared = f.free_var_tuple();
        let v = evaluate(&sig, &f, &declared, &s, &elements).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "value {} escaped [0,1]", v);
    }

    #[test]
    fn quantifiers_match_their_aggregation_expansion(
        (f, seed, n, elements) in with_assignment(
            (agg_free(&["x", "q"]), prop_oneof![Just(Quantifier::Exists), Just(Quantifier::Forall)])
                .prop_map(|(body, q)| Formula::quant(q, "q", body).unwrap()),
            3..8,
        )
    ) {
        let sig = sig();
        let s = sample_structure(&DensityModel::uniform(sig.clone()), n, seed, 0).unwrap();
        let declared = f.free_var_tuple();
        let native = evaluate(&sig, &f, &declared, &s, &elements).unwrap();
        let expanded = f.expand_quantifiers(&declared).unwrap();
        let still_quantified = matches!(expanded, Formula::Quant { .. });
        prop_assert!(!still_quantified);
        let via_agg = evaluate(&sig, &expanded, &declared, &s, &elements).unwrap();
        prop_assert!((native - via_agg).abs() <= 1e-12);
    }

    #[test]
    fn aggregators_are_permutation_invariant(
        (original, shuffled) in prop::collection::vec(0.0f64..=1.0, 1..40)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        for agg in [Aggregator::Min, Aggregator::Max, Aggregator::Am] {
            let a = agg.eval(&original).unwrap();
            let b = agg.eval(&shuffled).unwrap();
            prop_assert!((a - b).abs() <= 1e-12, "{} broke under permutation", agg.name());
        }
    }

    #[test]
    fn pattern_ranking_round_trips(
        (pattern, n) in prop::collection::vec(0usize..4, 0..5)
            .prop_flat_map(|raw| {
                let pattern = IdentityPattern::of_tuple(&raw);
                let least = pattern.num_blocks().max(1);
                (Just(pattern), least..10)
            })
    ) {
        let total = pattern.count_satisfying(n);
        if pattern.size() <= 3 && n <= 6 {
            // Brute-force count over all tuples in the cube.
            let size = pattern.size();
            let mut brute = 0u128;
            let mut tuple = vec![0usize; size];
            loop {
                if pattern.matches(&tuple) {
                    brute += 1;
                }
                // Odometer over [0,n)^size.
                let mut i = size;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    tuple[i] += 1;
                    if tuple[i] < n {
                        break;
                    }
                    tuple[i] = 0;
                }
                if tuple.iter().all(|&t| t == 0) {
                    break;
                }
            }
            if size == 0 {
                brute = 1;
            }
            prop_assert_eq!(total, brute);
        }

        let mut picks = vec![0u128];
        if total > 2 {
            picks.push(total / 2);
            picks.push(total - 1);
        }
        for rank in picks {
            if total == 0 {
                break;
            }
            let blocks = pattern.unrank_block_values(n, rank);
            prop_assert_eq!(blocks.len(), pattern.num_blocks());
            for (i, &b) in blocks.iter().enumerate() {
                prop_assert!(b < n);
                prop_assert!(!blocks[..i].contains(&b), "block values must be distinct");
            }
            let tuple = pattern.tuple_from_block_values(&blocks);
            prop_assert!(pattern.matches(&tuple));
        }
    }

    #[test]
    fn density_quantile_inverts_the_cdf(
        c0 in 0.05f64..2.0,
        c1 in 0.0f64..2.0,
        c2 in 0.0f64..2.0,
        u in 0.0f64..1.0,
    ) {
        let d = Density::new(&DensitySpec::Poly { coeffs: vec![c0, c1, c2] }).unwrap();
        let x = d.quantile(u);
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((d.cdf(x) - u).abs() <= 1e-6);
    }
}

/// Kolmogorov–Smirnov check of the inverse-CDF sampler against the exact
/// CDF for a non-uniform density (pdf 2v, cdf v²). With 4000 draws the
/// 99.9% KS radius is 1.949/sqrt(4000) ≈ 0.031.
#[test]
fn sampler_matches_the_cdf() {
    let d = Density::new(&DensitySpec::Poly {
        coeffs: vec![0.0, 2.0],
    })
    .unwrap();
    let mut rng = task_rng(41, "ks");
    let mut draws: Vec<f64> = (0..4000).map(|_| d.sample_value(&mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    let stat = draws
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            let c = d.cdf(v);
            (c - lo).abs().max((hi - c).abs())
        })
        .fold(0.0, f64::max);
    assert!(stat < 0.035, "KS statistic {stat} too large");
}
