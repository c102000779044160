use std::collections::{HashMap, HashSet};

use lexmv_core::bench::{
    composition_count, discretization_study, fan_comparison, measure_benchmark, optimality_gap, robustness_comparison, sample_compositions,
    sample_distinct_compositions, solver_ablation, AblationParams, DiscretizationParams, FanInstant, MeasureBenchParams, Strategy,
};
use lexmv_core::lexscalar::ScalarCost;
use lexmv_core::robustness::{CompiledFormula, Measure};
use lexmv_core::stl::{parse_formula, Trace};
use lexmv_core::systems::running_example::overtaking;
use proptest::prelude::*;

proptest! {
    #[test]
    fn compositions_are_positive_and_sum_to_the_budget(n in 1usize..10, extra in 0usize..60, seed in any::<u64>()) {
        let m_total = n + extra;
        for c in sample_compositions(m_total, n, 20, seed).unwrap() {
            prop_assert_eq!(c.parts.len(), n);
            prop_assert!(c.parts.iter().all(|p| *p >= 1));
            prop_assert_eq!(c.total(), m_total);
        }
        for s in Strategy::ALL {
            let c = s.composition(m_total, n).unwrap();
            prop_assert_eq!(c.total(), m_total);
            prop_assert!(c.parts.iter().all(|p| *p >= 1));
            let p = &c.parts;
            match s {
                Strategy::Even => prop_assert!(p.iter().max().unwrap() - p.iter().min().unwrap() <= 1),
                Strategy::LinearIncrease => prop_assert!(p.windows(2).all(|w| w[0] <= w[1])),
                Strategy::LinearDecrease => prop_assert!(p.windows(2).all(|w| w[0] >= w[1])),
            }
        }
    }
}

/// `C(a, b)` by Pascal's triangle.
fn binomial(a: usize, b: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..a {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(b).copied().unwrap_or(0)
}

#[test]
fn composition_counts_and_uniformity() {
    for m in 1..30 {
        for n in 1..=m {
            assert_eq!(composition_count(m, n), binomial(m - 1, n - 1));
        }
    }
    // 10 compositions of 6 into 3 parts, each expected 3000 times out of 30000
    let draws = sample_compositions(6, 3, 30_000, 9).unwrap();
    let mut freq: HashMap<Vec<usize>, usize> = HashMap::new();
    for c in draws {
        *freq.entry(c.parts).or_default() += 1;
    }
    assert_eq!(freq.len(), 10);
    let chi2: f64 = freq.values().map(|&f| (f as f64 - 3000.0).powi(2) / 3000.0).sum();
    // 9 degrees of freedom; 27.9 is the 0.999 quantile
    assert!(chi2 < 27.9, "chi2 = {chi2}");

    let distinct = sample_distinct_compositions(6, 3, 100, 1).unwrap();
    assert_eq!(distinct.len(), 10);
    assert_eq!(distinct.iter().collect::<HashSet<_>>().len(), 10);
    assert!(sample_compositions(2, 3, 1, 0).is_err());
}

#[test]
fn small_discretization_study_is_consistent() {
    let params = DiscretizationParams { scenarios: 12, m_totals: vec![8, 24], compositions: 15, n_specs: 8, seed: 2 };
    let rows = discretization_study(&params).unwrap();
    assert_eq!(rows.len(), 8);
    for chunk in rows.chunks(4) {
        assert_eq!(chunk[0].strategy, "best");
        assert!(chunk[1..].iter().all(|r| chunk[0].mean <= r.mean));
        assert!(chunk.iter().all(|r| r.mean >= 0.0 && r.std >= 0.0));
        let parts: usize = chunk[0].composition.split('-').map(|p| p.parse::<usize>().unwrap()).sum();
        assert_eq!(parts, chunk[0].m_total);
    }
}

#[test]
fn small_ablation_is_consistent() {
    let params = AblationParams { scenarios: 6, n_specs: 4, iterations: 6, m_init: 60, m_final: 30, ..AblationParams::default() };
    let report = solver_ablation(&params).unwrap();
    assert_eq!(report.rows.len(), 9);
    let baseline = &report.rows[0];
    assert_eq!(baseline.method, "baseline");
    assert_eq!((baseline.p_equal, baseline.mean_gap_delta), (100.0, 0.0));
    let optimum = report.rows.last().unwrap();
    assert_eq!((optimum.p_optimal, optimum.mean_gap), (100.0, 0.0));
    for s in &report.scenarios {
        // nothing beats the exact optimum
        assert!(s.costs.iter().all(|c| *c >= s.optimum));
    }
    for r in &report.rows {
        assert!((r.p_lower + r.p_equal + r.p_higher - 100.0).abs() < 1e-9);
    }
    assert_eq!(report.rows[7].samples_per_solve, params.solver_config(lexmv_core::bench::AblationConfig::all()[7], 0).unwrap().sample_rule.total(6));
}

#[test]
fn optimality_gap_cases() {
    let s = ScalarCost::from_u64;
    assert_eq!(optimality_gap(&s(0), &s(0)), Some(0.0));
    assert_eq!(optimality_gap(&s(3), &s(0)), None);
    assert_eq!(optimality_gap(&s(15), &s(10)), Some(50.0));
}

#[test]
fn measure_benchmark_call_counts() {
    let params = MeasureBenchParams {
        measures: vec![Measure::Space, Measure::SpaceLeftTime, Measure::CombTime],
        trajectories: 20,
        repeats: 2,
        warmup: 0,
        solves: 1,
        ..MeasureBenchParams::default()
    };
    let rows = measure_benchmark(&params).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[0].calls.mean, rows[0].calls.std), (16.0, 0.0));
    assert_eq!(rows[0].calls_uncached.mean, 16.0);
    for r in &rows {
        assert_eq!(r.calls.mean, 16.0, "{:?}", r.measure);
        // one-sided scans stay triangular; comb-time scans both sides, up to (K+1)^2
        let cap = if r.measure == Measure::CombTime { 256.0 } else { 136.0 };
        assert!(r.calls_uncached.mean >= 16.0 && r.calls_uncached.mean <= cap, "{:?}", r);
        assert!(r.t_rob_ms.mean > 0.0 && r.t_sol_ms.mean > 0.0);
    }
}

#[test]
fn fan_tables_are_normalized() {
    let measures = [Measure::Space, Measure::SpaceLeftTime, Measure::CombTime, Measure::Smooth];
    for instant in [FanInstant::T1, FanInstant::T2] {
        let t = fan_comparison(instant, &measures).unwrap();
        assert_eq!(t.raw.len(), measures.len());
        for (i, col) in t.normalized.iter().enumerate() {
            assert_eq!(col.len(), 21);
            if !t.skipped.contains(&measures[i]) {
                assert!(col.iter().all(|v| v.abs() <= 1.0));
                assert!(col.iter().any(|v| v.abs() == 1.0));
            }
            // scaling keeps signs
            assert!(col.iter().zip(&t.raw[i]).all(|(n, r)| n.signum() == r.signum() || *r == 0.0));
        }
    }
}

#[test]
fn identical_samples_give_constant_columns() {
    let s = overtaking().unwrap();
    let f = parse_formula("G(and(left_bound, right_bound))", &s.registry_at(0.0).unwrap()).unwrap();
    let rows: Vec<Vec<f64>> = (0..16).map(|k| vec![k as f64, 0.0, 0.0, 0.0, 10.0, 0.0, 0.0]).collect();
    let t = Trace::from_rows(&rows, 0.2).unwrap();
    let table = robustness_comparison(&CompiledFormula::new(&f), &vec![t; 5], &Measure::ALL).unwrap();
    for col in &table.raw {
        assert!(col.windows(2).all(|w| w[0] == w[1]));
    }
    assert!(robustness_comparison(&CompiledFormula::new(&f), &[], &Measure::ALL).is_err());
}
