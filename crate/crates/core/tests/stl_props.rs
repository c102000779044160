mod common;

use common::{naive_sat, pred, random_formula, random_trace, rng};
use lexmv_core::stl::{boolean_sat, boolean_sat_all_times, parse_formula, Formula, Interval, Predicate, PredicateRegistry, Trace};
use lexmv_core::Error;
use proptest::prelude::*;

const N_Y: usize = 3;

fn registry() -> PredicateRegistry<f64> {
    let mut reg = PredicateRegistry::new();
    for i in 0..N_Y {
        reg.insert(Predicate::channel_at_least(format!("p{i}"), i, 0.0));
    }
    reg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn monitor_matches_definitions(seed in any::<u64>(), horizon in 1usize..8) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, 4, N_Y, horizon, false);
        let t = random_trace(&mut r, N_Y, horizon);
        for k in 0..=horizon {
            prop_assert_eq!(boolean_sat(&f, &t, k).unwrap(), naive_sat(&f, &t, k), "{} at {}", f, k);
        }
    }

    #[test]
    fn normalization_preserves_verdicts(seed in any::<u64>(), horizon in 1usize..8) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, 4, N_Y, horizon, false);
        let t = random_trace(&mut r, N_Y, horizon);
        let n = f.normalize();
        prop_assert!(n.is_core());
        prop_assert_eq!(boolean_sat_all_times(&f, &t), boolean_sat_all_times(&n, &t));
    }

    #[test]
    fn de_morgan(seed in any::<u64>(), horizon in 1usize..8) {
        let mut r = rng(seed);
        let a = random_formula(&mut r, 3, N_Y, horizon, false);
        let b = random_formula(&mut r, 3, N_Y, horizon, false);
        let t = random_trace(&mut r, N_Y, horizon);
        let lhs = a.clone().and(b.clone()).not();
        let rhs = a.not().or(b.not());
        prop_assert_eq!(boolean_sat_all_times(&lhs, &t), boolean_sat_all_times(&rhs, &t));
    }

    #[test]
    fn display_parses_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, 4, N_Y, 6, false);
        let text = f.to_string();
        let g = parse_formula(&text, &registry()).unwrap();
        prop_assert_eq!(g.to_string(), text);
        prop_assert!(f.same_shape(&g));
    }
}

#[test]
fn derived_operators_rewrite_to_core() {
    let mu = pred(0);
    let f = Formula::eventually(Interval::new(0, 3), mu.clone()).normalize();
    let expected = Formula::True.until(Interval::new(0, 3), mu.clone());
    assert!(f.same_shape(&expected), "{f}");
    let g = Formula::globally(None, mu.clone()).normalize();
    let expected = Formula::True.until(None, mu.clone().not()).not();
    assert!(g.same_shape(&expected), "{g}");
    assert!(mu.normalize().same_shape(&mu));
}

#[test]
fn predicate_boundary_is_satisfied() {
    let t = Trace::from_signal(&[0.0, -1.0], 1.0).unwrap();
    assert!(boolean_sat(&pred(0), &t, 0).unwrap());
    assert!(!boolean_sat(&pred(0), &t, 1).unwrap());
    let all_one = Trace::from_signal(&[1.0; 5], 1.0).unwrap();
    assert!(boolean_sat(&Formula::globally(None, pred(0)), &all_one, 0).unwrap());
}

#[test]
fn empty_windows() {
    let t = Trace::from_signal(&[1.0, 1.0, 1.0], 1.0).unwrap();
    let window = Interval::new(5, 7);
    assert!(!boolean_sat(&Formula::True.until(window, pred(0)), &t, 0).unwrap());
    assert!(!boolean_sat(&Formula::eventually(window, pred(0)), &t, 0).unwrap());
    assert!(boolean_sat(&Formula::globally(window, pred(0).not()), &t, 0).unwrap());
    assert!(!boolean_sat(&Formula::once(Interval::new(3, 4), pred(0)), &t, 2).unwrap());
    assert!(boolean_sat(&Formula::historically(Interval::new(3, 4), pred(0).not()), &t, 2).unwrap());
}

#[test]
fn time_out_of_range() {
    let t = Trace::from_signal(&[1.0, 1.0], 1.0).unwrap();
    assert!(matches!(boolean_sat(&pred(0), &t, 2), Err(Error::TimeOutOfRange { k: 2, horizon: 1 })));
}

#[test]
fn parse_errors_are_anchored() {
    let reg = registry();
    match parse_formula::<f64>("G(\n  and(p0, nope))", &reg) {
        Err(Error::UnknownPredicate(id)) => assert_eq!(id, "nope"),
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse_formula::<f64>("G(p0", &reg), Err(Error::Parse { line: 1, .. })));
}
