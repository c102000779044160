//! Shared generators and definitional oracles for the integration tests.
#![allow(dead_code)]

use lexmv_core::robustness::{CompiledFormula, Measure, PredicateMeasure};
use lexmv_core::stl::{resolve, Formula, Interval, Predicate, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Values in `[-2, 2]` with exact zeros and signed zeros mixed in, so sign boundaries get exercised.
pub fn random_value(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..10) {
        0 => 0.0,
        1 => -0.0,
        2 => rng.random_range(-2i32..=2) as f64,
        _ => rng.random_range(-2.0..2.0),
    }
}

pub fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| random_value(rng)).collect()
}

pub fn random_trace(rng: &mut ChaCha8Rng, n_y: usize, horizon: usize) -> Trace<f64> {
    let rows: Vec<Vec<f64>> = (0..=horizon).map(|_| random_signal(rng, n_y)).collect();
    Trace::from_rows(&rows, 0.1).unwrap()
}

/// `p{i}`: channel `i` is nonnegative.
pub fn pred(i: usize) -> Formula<f64> {
    Formula::pred(Predicate::channel_at_least(format!("p{i}"), i, 0.0))
}

fn random_interval(rng: &mut ChaCha8Rng, horizon: usize) -> Option<Interval> {
    match rng.random_range(0..4) {
        0 => None,
        1 => Some(Interval::from(rng.random_range(0..=horizon))),
        _ => {
            // up to horizon + 2 so some windows fall outside the trace
            let lo = rng.random_range(0..=horizon + 2);
            let hi = rng.random_range(lo..=horizon + 3);
            Interval::new(lo, hi)
        }
    }
}

/// Random formula over `n_preds` predicates using every constructor. With `nnf`, only
/// conjunction, until, since, eventually and once are used, so the normalized formula
/// negates nothing but predicates.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize, n_preds: usize, horizon: usize, nnf: bool) -> Formula<f64> {
    if depth == 0 || rng.random_range(0..4) == 0 {
        let p = pred(rng.random_range(0..n_preds));
        return match rng.random_range(0..8) {
            0 => Formula::True,
            1 | 2 => p.not(),
            _ => p,
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, n_preds, horizon, nnf);
    let op = if nnf { [0, 2, 3, 4, 6][rng.random_range(0..5)] } else { rng.random_range(0..12) };
    match op {
        0 => sub(rng).and(sub(rng)),
        1 => sub(rng).or(sub(rng)),
        2 => {
            let i = random_interval(rng, horizon);
            sub(rng).until(i, sub(rng))
        }
        3 => {
            let i = random_interval(rng, horizon);
            sub(rng).since(i, sub(rng))
        }
        4 => Formula::eventually(random_interval(rng, horizon), sub(rng)),
        5 => Formula::globally(random_interval(rng, horizon), sub(rng)),
        6 => Formula::once(random_interval(rng, horizon), sub(rng)),
        7 => Formula::historically(random_interval(rng, horizon), sub(rng)),
        8 | 9 => sub(rng).and(sub(rng)),
        10 => sub(rng).not(),
        _ => sub(rng).implies(sub(rng)),
    }
}

fn future(k: usize, i: Option<Interval>, horizon: usize) -> Vec<usize> {
    let (lo, hi) = resolve(i, horizon);
    (0..=horizon).filter(|&kp| kp >= k && kp - k >= lo && kp - k <= hi).collect()
}

fn past(k: usize, i: Option<Interval>, horizon: usize) -> Vec<usize> {
    let (lo, hi) = resolve(i, horizon);
    (0..=horizon).filter(|&kp| kp <= k && k - kp >= lo && k - kp <= hi).collect()
}

/// Textbook Boolean semantics, straight from the definitions; no memoization or windows helpers.
pub fn naive_sat(f: &Formula<f64>, t: &Trace<f64>, k: usize) -> bool {
    let horizon = t.horizon();
    match f {
        Formula::True => true,
        Formula::Predicate(p) => p.eval(t, k) >= 0.0,
        Formula::Not(a) => !naive_sat(a, t, k),
        Formula::And(a, b) => naive_sat(a, t, k) && naive_sat(b, t, k),
        Formula::Or(a, b) => naive_sat(a, t, k) || naive_sat(b, t, k),
        Formula::Implies(a, b) => !naive_sat(a, t, k) || naive_sat(b, t, k),
        Formula::Until(i, a, b) => future(k, *i, horizon)
            .into_iter()
            .any(|kp| naive_sat(b, t, kp) && (k..kp).all(|j| naive_sat(a, t, j))),
        Formula::Since(i, a, b) => past(k, *i, horizon)
            .into_iter()
            .any(|kp| naive_sat(b, t, kp) && (kp + 1..=k).all(|j| naive_sat(a, t, j))),
        Formula::Eventually(i, a) => future(k, *i, horizon).into_iter().any(|kp| naive_sat(a, t, kp)),
        Formula::Globally(i, a) => future(k, *i, horizon).into_iter().all(|kp| naive_sat(a, t, kp)),
        Formula::Once(i, a) => past(k, *i, horizon).into_iter().any(|kp| naive_sat(a, t, kp)),
        Formula::Historically(i, a) => past(k, *i, horizon).into_iter().all(|kp| naive_sat(a, t, kp)),
    }
}

fn sign(v: f64) -> bool {
    v >= 0.0
}

/// Predicate robustness by trying every `tau` in `0..=K` and keeping the best admissible one.
///
/// Windows are clipped to `[0, K]`, and `tau` only ranges over shifts that stay inside the
/// trace on at least one side, so the result is finite.
pub fn brute_predicate(measure: PredicateMeasure, p: &[f64], k: usize) -> f64 {
    let horizon = p.len() - 1;
    let s = sign(p[k]);
    let same = |lo: isize, hi: isize| -> bool {
        (lo.max(0)..=hi.min(horizon as isize)).all(|j| sign(p[j as usize]) == s)
    };
    let signed = |m: f64| if s { m } else { -m };
    let k_i = k as isize;
    match measure {
        PredicateMeasure::Space => p[k] + 0.0,
        PredicateMeasure::LeftTime => {
            let best = (0..=horizon - k).filter(|&tau| same(k_i, k_i + tau as isize)).max().unwrap();
            signed(best as f64)
        }
        PredicateMeasure::RightTime => {
            let best = (0..=k).filter(|&tau| same(k_i - tau as isize, k_i)).max().unwrap();
            signed(best as f64)
        }
        PredicateMeasure::CombTime => {
            let cap = k.max(horizon - k);
            let best = (0..=cap).filter(|&tau| same(k_i - tau as isize, k_i + tau as isize)).max().unwrap();
            signed(best as f64)
        }
        PredicateMeasure::SpaceLeftTime => {
            let best = (0..=horizon - k)
                .filter(|&tau| same(k_i, k_i + tau as isize))
                .map(|tau| tau as f64 + p[k + tau].abs())
                .fold(f64::NEG_INFINITY, f64::max);
            signed(best)
        }
    }
}

/// Robustness with the exact minimum and maximum, from the recursive definition.
/// Empty maxima are `-inf`, empty minima `+inf`.
pub fn naive_robustness(measure: PredicateMeasure, f: &Formula<f64>, t: &Trace<f64>, k: usize) -> f64 {
    let horizon = t.horizon();
    let rec = |g: &Formula<f64>, j: usize| naive_robustness(measure, g, t, j);
    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let min_of = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
    match f {
        Formula::True => f64::INFINITY,
        Formula::Predicate(p) => {
            let signal: Vec<f64> = (0..=horizon).map(|j| p.eval(t, j)).collect();
            brute_predicate(measure, &signal, k)
        }
        Formula::Not(a) => -rec(a, k),
        Formula::And(a, b) => rec(a, k).min(rec(b, k)),
        Formula::Or(a, b) => rec(a, k).max(rec(b, k)),
        Formula::Implies(a, b) => (-rec(a, k)).max(rec(b, k)),
        Formula::Until(i, a, b) => max_of(
            &mut future(k, *i, horizon).into_iter().map(|kp| rec(b, kp).min(min_of(&mut (k..kp).map(|j| rec(a, j))))),
        ),
        Formula::Since(i, a, b) => max_of(
            &mut past(k, *i, horizon).into_iter().map(|kp| rec(b, kp).min(min_of(&mut (kp + 1..=k).map(|j| rec(a, j))))),
        ),
        Formula::Eventually(i, a) => max_of(&mut future(k, *i, horizon).into_iter().map(|kp| rec(a, kp))),
        Formula::Globally(i, a) => min_of(&mut future(k, *i, horizon).into_iter().map(|kp| rec(a, kp))),
        Formula::Once(i, a) => max_of(&mut past(k, *i, horizon).into_iter().map(|kp| rec(a, kp))),
        Formula::Historically(i, a) => min_of(&mut past(k, *i, horizon).into_iter().map(|kp| rec(a, kp))),
    }
}

/// Soundness on random pairs, reading `+0` as satisfied and `-0` as violated; negation-normal formulas only for the smooth measure.
pub fn soundness_violations(measure: Measure, cases: usize, seed: u64) -> (usize, usize) {
    let mut r = rng(seed);
    let c = measure.config();
    let (mut sound, mut reverse) = (0, 0);
    for _ in 0..cases {
        let horizon = r.random_range(1..=6);
        let f = random_formula(&mut r, 3, 3, horizon, measure == Measure::Smooth);
        assert!(measure != Measure::Smooth || f.normalize().is_negation_normal());
        let t = random_trace(&mut r, 3, horizon);
        let eta = CompiledFormula::new(&f).robustness(&c, &t, 0).unwrap();
        let sat = naive_sat(&f, &t, 0);
        if eta.is_sat() && !sat {
            sound += 1;
        }
        if measure.is_reverse_sound() && eta.is_neg() && sat {
            reverse += 1;
        }
    }
    (sound, reverse)
}
