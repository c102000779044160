mod common;

use std::cmp::Ordering;

use common::pred;
use lexmv_core::lexscalar::{lex_compare, violation_cost, word_width, DiscretizationScheme, Layout, ScalarCost, Spec, SpecSet};
use lexmv_core::robustness::{ExtReal, Measure};
use lexmv_core::stl::{Formula, Trace};
use num_bigint::BigUint;
use proptest::prelude::*;

fn layout_and_vectors() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, Vec<u64>)> {
    prop::collection::vec(1u64..2000, 1..8).prop_flat_map(|m| {
        let comps = |m: &Vec<u64>| m.iter().map(|&mi| 0..=mi).collect::<Vec<_>>();
        (Just(m.clone()), comps(&m), comps(&m))
    })
}

/// `sum v_i 2^{B_i}` recomputed from scratch.
fn reference_pack(m: &[u64], v: &[u64]) -> BigUint {
    let widths: Vec<u32> = m.iter().map(|&x| (x as f64 + 1.0).log2().ceil() as u32).collect();
    let mut acc = BigUint::from(0u8);
    for (i, &x) in v.iter().enumerate() {
        let shift: u32 = widths[i + 1..].iter().sum();
        acc += BigUint::from(x) << shift;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn packing_preserves_lexicographic_order((m, a, b) in layout_and_vectors()) {
        let l = Layout::new(&m).unwrap();
        let (sa, sb) = (l.pack(&a).unwrap(), l.pack(&b).unwrap());
        prop_assert_eq!(sa.cmp(&sb), lex_compare(&a, &b).unwrap());
        prop_assert_eq!(sa.as_biguint(), &reference_pack(&m, &a));
        prop_assert_eq!(l.unpack(&sa).unwrap(), a);
    }

    #[test]
    fn word_width_is_minimal(m in 1u64..1_000_000) {
        let b = word_width(m);
        prop_assert!(m < (1u64 << b));
        prop_assert!(b == 1 || m >= (1u64 << (b - 1)));
    }

    #[test]
    fn discretization_is_monotone(c_bar in 0.1f64..100.0, m in 2usize..40, x in 0.0f64..200.0, y in 0.0f64..200.0) {
        let s = DiscretizationScheme::uniform(c_bar, m).unwrap();
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(s.discretize(lo) <= s.discretize(hi));
        prop_assert!(s.discretize(hi) <= m as u64);
        let xi = s.discretize(hi);
        prop_assert!(hi <= s.upper_bound(xi as usize));
        prop_assert!(xi == 0 || hi > s.upper_bound(xi as usize - 1));
    }
}

#[test]
fn exhaustive_running_example_layout() {
    let m = [1u64, 6, 3];
    let l = Layout::new(&m).unwrap();
    let all: Vec<Vec<u64>> = (0..=1).flat_map(|a| (0..=6).flat_map(move |b| (0..=3).map(move |c| vec![a, b, c]))).collect();
    for a in &all {
        for b in &all {
            assert_eq!(l.pack(a).unwrap().cmp(&l.pack(b).unwrap()), a.cmp(b));
        }
    }
}

#[test]
fn running_example_golden_values() {
    let l = Layout::new(&[1, 6, 3]).unwrap();
    assert_eq!(l.widths(), &[1, 3, 2]);
    let vectors = [("b", [0, 1, 1]), ("a", [0, 1, 2]), ("c", [0, 2, 0]), ("e", [0, 5, 0]), ("d", [1, 4, 0])];
    let packed: Vec<u64> = vectors.iter().map(|(_, v)| l.pack(v).unwrap().to_string().parse().unwrap()).collect();
    assert_eq!(packed, vec![5, 6, 8, 20, 48]);
    assert!(packed.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn cost_examples() {
    assert_eq!(violation_cost(ExtReal::from_float(-6.5)), 6.5);
    assert_eq!(violation_cost(ExtReal::from_float(3.0)), 0.0);
    assert_eq!(violation_cost::<f64>(ExtReal::NegInf), f64::INFINITY);
    // an interval covering (5, 7] merges the two progress costs
    let s = DiscretizationScheme::new(vec![5.0, 7.0]).unwrap();
    assert_eq!((s.discretize(5.8), s.discretize(6.5)), (2, 2));
    let s = DiscretizationScheme::new(vec![7.0]).unwrap();
    assert_eq!((s.discretize(5.8), s.discretize(6.5)), (1, 1));
    assert_eq!(lex_compare(&[0, 1, 1], &[0, 1, 2]).unwrap(), Ordering::Less);
    assert_eq!(lex_compare(&[1, 4, 0], &[0, 5, 0]).unwrap(), Ordering::Greater);
}

#[test]
fn running_example_trace_pipeline() {
    // coll m=1, prog m=6 over [0, 30], lane m=3 over [0, 3]
    let set = SpecSet::new(vec![
        Spec::new("coll", Formula::globally(None, pred(0)), Measure::Space.config(), DiscretizationScheme::single()),
        Spec::new("prog", Formula::eventually(None, pred(1)), Measure::Space.config(), DiscretizationScheme::uniform(30.0, 6).unwrap()),
        Spec::new("lane", Formula::globally(None, pred(2)), Measure::Space.config(), DiscretizationScheme::uniform(3.0, 3).unwrap()),
    ])
    .unwrap();
    // collision-free, progress short by 5.5, lane violated by 0.9
    let t = Trace::from_rows(&[vec![1.0, -9.0, 0.0], vec![1.0, -5.5, -0.9]], 0.2).unwrap();
    let e = set.evaluate(&t).unwrap();
    assert_eq!(e.discrete, vec![0, 1, 1]);
    assert_eq!(e.scalar, ScalarCost::from_u64(5));
}
