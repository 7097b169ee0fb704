//! Independent oracles for enumeration and generated-algebra dimensions.

use std::collections::BTreeSet;

use genrank::linalg::rank_complex;
use genrank::matalg::{generated_algebra, is_generating};
use genrank::sampling::{gue_tuple, rng_from_seed};
use genrank::strata::enumerate_orbit_types;
use genrank::{CMat64, MatrixTuple64, OrbitType};
use nalgebra::DMatrix;

/// Every ordered list of pairs with `sum a*b = remaining`.
fn ordered_pair_lists(remaining: usize) -> Vec<Vec<(usize, usize)>> {
    if remaining == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for a in 1..=remaining {
        for b in 1..=remaining / a {
            for mut rest in ordered_pair_lists(remaining - a * b) {
                rest.insert(0, (a, b));
                out.push(rest);
            }
        }
    }
    out
}

fn brute_force_types(d: usize) -> BTreeSet<Vec<(usize, usize)>> {
    ordered_pair_lists(d)
        .into_iter()
        .map(|mut v| {
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        })
        .collect()
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 1..=7 {
        let fast: BTreeSet<Vec<(usize, usize)>> = enumerate_orbit_types(d)
            .iter()
            .map(|o| o.pairs().to_vec())
            .collect();
        assert_eq!(fast, brute_force_types(d), "d = {d}");
        assert_eq!(enumerate_orbit_types(d).len(), fast.len(), "duplicates at d = {d}");
    }
}

#[test]
fn enumeration_counts_frozen() {
    // counts produced by the brute-force oracle above
    let counts: Vec<usize> = (1..=7).map(|d| enumerate_orbit_types(d).len()).collect();
    assert_eq!(counts, vec![1, 3, 5, 11, 17, 34, 52]);
}

#[test]
fn enumeration_order_is_deterministic_and_sorted() {
    let a = enumerate_orbit_types(6);
    let b = enumerate_orbit_types(6);
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0] > w[1]));
    assert_eq!(a[0], OrbitType::trivial(6));
    assert!(a.iter().all(|o| o.size() == 6));
}

/// Dimension of the span of all words of length <= max_len in the entries,
/// via one SVD rank computation.
fn word_span_dim(t: &MatrixTuple64, unital: bool, max_len: usize) -> usize {
    let d = t.d();
    let mut words: Vec<CMat64> = t.entries().to_vec();
    let mut frontier = words.clone();
    for _ in 1..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in t.entries() {
                next.push(w * a);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    if unital {
        words.push(CMat64::identity(d, d));
    }
    let cols: Vec<_> = words.iter().flat_map(|w| w.iter().copied().collect::<Vec<_>>()).collect();
    let m = DMatrix::from_column_slice(d * d, words.len(), &cols);
    rank_complex(&m, 1e-9, 0.0)
}

#[test]
fn saturation_agrees_with_word_span() {
    let mut rng = rng_from_seed(77);
    for d in 1..=3 {
        for len in 1..=2 {
            let t: MatrixTuple64 = gue_tuple(d, len, &mut rng);
            for unital in [false, true] {
                assert_eq!(
                    generated_algebra(&t, unital).dim(),
                    word_span_dim(&t, unital, d * d),
                    "d = {d}, len = {len}, unital = {unital}"
                );
            }
        }
    }
    // diag(1,1,2) with e13 + e31: words stay inside a 5-dimensional algebra
    let mut a = CMat64::zeros(3, 3);
    a[(0, 0)] = 1.0.into();
    a[(1, 1)] = 1.0.into();
    a[(2, 2)] = 2.0.into();
    let mut b = CMat64::zeros(3, 3);
    b[(0, 2)] = 1.0.into();
    b[(2, 0)] = 1.0.into();
    let t = MatrixTuple64::new(vec![a, b]).unwrap();
    let oracle = word_span_dim(&t, true, 9);
    assert_eq!(oracle, 5);
    assert_eq!(generated_algebra(&t, true).dim(), oracle);
    assert!(!is_generating(&t));
}
