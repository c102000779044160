//! Exact lexicographic optima of the scalar integrator benchmark.
//!
//! Each specification constrains the output at exactly one time step and its cost
//! is monotone in that output, so the preemptive scheme reduces to interval
//! arithmetic: forward/backward reachability projects the constraint chain onto a
//! time step, the minimal cost sits at an interval endpoint, and fixing that cost
//! tightens the constraint at the target time. This is only valid under that
//! single-time, monotone, scalar structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexscalar::{DiscretizationScheme, Layout, ScalarCost, Spec, SpecSet};
use crate::robustness::Measure;
use crate::stl::{Formula, Interval, Predicate, Trace};

/// Closed interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub const ALL: Span = Span { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn point(x: f64) -> Self {
        Span { lo: x, hi: x }
    }

    fn widen(self, b: f64) -> Self {
        Span { lo: self.lo - b, hi: self.hi + b }
    }

    fn meet(self, o: Span) -> Self {
        Span { lo: self.lo.max(o.lo), hi: self.hi.min(o.hi) }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Whether the integer cost of each specification is minimized or the raw continuous one.
#[derive(Debug, Clone, Copy)]
pub enum CostMode<'a> {
    Continuous,
    Discretized(&'a [DiscretizationScheme<f64>]),
}

/// Integrator `x' = x + u` with `|u| <= bound`, from `x0`, and one specification per
/// time `k = 1..=K`: `y_k < r_k` for odd `k`, `y_k >= r_k` for even `k`.
///
/// Boundary values count as satisfied with zero margin, so the cost of an odd-`k`
/// specification is `max(0, y_k - r_k)` and of an even one `max(0, r_k - y_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearBenchmark {
    pub thresholds: Vec<f64>,
    pub bound: f64,
    pub x0: f64,
    pub c_bar: f64,
}

/// Result of the preemptive scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexOptimum {
    /// Minimal continuous cost per specification under the higher-priority constraints.
    pub continuous: Vec<f64>,
    /// Optimal discrete vector (discretized mode only).
    pub discrete: Option<Vec<u64>>,
    /// Set of optimal states per time `0..=K`.
    pub feasible: Vec<Span>,
    /// `(min, max)` continuous cost of each specification over the optimal set.
    pub cost_range: Vec<(f64, f64)>,
    /// One optimal input plan `u_0..=u_K` (`u_K = 0`).
    pub witness: Vec<f64>,
}

impl LinearBenchmark {
    /// `K = thresholds.len()`, bound 1.35, `x0 = 0`, `c_bar = 10`.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        let b = Self { thresholds, bound: 1.35, x0: 0.0, c_bar: 10.0 };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() {
            return Err(Error::Config("benchmark needs at least one threshold".into()));
        }
        if self.thresholds.iter().any(|r| !r.is_finite()) || !self.x0.is_finite() {
            return Err(Error::Config("thresholds and initial state must be finite".into()));
        }
        if !(self.bound.is_finite() && self.bound >= 0.0 && self.c_bar.is_finite() && self.c_bar > 0.0) {
            return Err(Error::Config("bound must be nonnegative and c_bar positive".into()));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.thresholds.len()
    }

    /// True when the specification at time `k` is an upper bound (`y_k < r_k`).
    pub fn is_upper(k: usize) -> bool {
        k % 2 == 1
    }

    /// Continuous violation cost of the specification at time `k` (1-based) for output `y`.
    pub fn cost(&self, k: usize, y: f64) -> f64 {
        let r = self.thresholds[k - 1];
        let margin = if Self::is_upper(k) { r - y } else { y - r };
        if margin < 0.0 {
            -margin
        } else {
            0.0
        }
    }

    /// Uniform schemes on `[0, c_bar]` for the given per-specification interval counts.
    pub fn schemes(&self, m: &[usize]) -> Result<Vec<DiscretizationScheme<f64>>> {
        if m.len() != self.horizon() {
            return Err(Error::Config(format!("expected {} interval counts, got {}", self.horizon(), m.len())));
        }
        m.iter().map(|&mi| DiscretizationScheme::uniform_or_single(self.c_bar, mi)).collect()
    }

    /// The benchmark as STL: `F_[k,k](mu_k)` under space robustness, priority by `k`.
    pub fn spec_set(&self, m: &[usize]) -> Result<SpecSet<f64>> {
        let schemes = self.schemes(m)?;
        let specs = schemes
            .into_iter()
            .enumerate()
            .map(|(i, scheme)| {
                let k = i + 1;
                let r = self.thresholds[i];
                let id = format!("mu_{k}");
                let p = if Self::is_upper(k) {
                    Predicate::channel_at_most(id, 0, r)
                } else {
                    Predicate::channel_at_least(id, 0, r)
                };
                let f = Formula::eventually(Some(Interval::point(k)), Formula::pred(p));
                Spec::new(format!("phi_{k}"), f, Measure::Space.config(), scheme)
            })
            .collect();
        SpecSet::new(specs)
    }

    /// Direct evaluation of the packed cost; agrees with [`spec_set`](Self::spec_set).
    pub fn cost_function(&self, m: &[usize]) -> Result<impl Fn(&Trace<f64>) -> Result<ScalarCost> + Sync + '_> {
        let schemes = self.schemes(m)?;
        let layout = Layout::new(&m.iter().map(|&v| v as u64).collect::<Vec<_>>())?;
        Ok(move |trace: &Trace<f64>| {
            if trace.horizon() < self.horizon() {
                return Err(Error::TimeOutOfRange { k: self.horizon(), horizon: trace.horizon() });
            }
            let d: Vec<u64> = (1..=self.horizon()).map(|k| schemes[k - 1].discretize(self.cost(k, trace.get(k, 0)))).collect();
            layout.pack(&d)
        })
    }

    /// Projection of per-time constraints onto the states reachable under all of them.
    fn project(&self, constraints: &[Span]) -> Vec<Span> {
        let k_max = self.horizon();
        let mut fwd = Vec::with_capacity(k_max + 1);
        fwd.push(constraints[0]);
        for k in 1..=k_max {
            fwd.push(fwd[k - 1].widen(self.bound).meet(constraints[k]));
        }
        let mut out = fwd.clone();
        for k in (0..k_max).rev() {
            out[k] = fwd[k].meet(out[k + 1].widen(self.bound));
        }
        out
    }

    /// Largest (upper spec) or smallest (lower spec) `y` in `span` whose discrete cost is `<= xi`.
    fn discrete_boundary(&self, k: usize, span: Span, scheme: &DiscretizationScheme<f64>, xi: u64) -> Span {
        if xi as usize >= scheme.m() {
            return span;
        }
        let alpha = scheme.upper_bound(xi as usize);
        let r = self.thresholds[k - 1];
        let ok = |y: f64| scheme.discretize(self.cost(k, y)) <= xi;
        if Self::is_upper(k) {
            let mut h = r + alpha;
            while !ok(h) {
                h = h.next_down();
            }
            while ok(h.next_up()) {
                h = h.next_up();
            }
            span.meet(Span { lo: f64::NEG_INFINITY, hi: h })
        } else {
            let mut l = r - alpha;
            while !ok(l) {
                l = l.next_up();
            }
            while ok(l.next_down()) {
                l = l.next_down();
            }
            span.meet(Span { lo: l, hi: f64::INFINITY })
        }
    }

    /// Preemptive lexicographic optimum, one specification at a time in priority order.
    pub fn exact_lex_optimum(&self, mode: CostMode<'_>) -> Result<LexOptimum> {
        self.validate()?;
        let k_max = self.horizon();
        if let CostMode::Discretized(s) = mode {
            if s.len() != k_max {
                return Err(Error::Config(format!("expected {k_max} schemes, got {}", s.len())));
            }
        }
        let mut constraints = vec![Span::ALL; k_max + 1];
        constraints[0] = Span::point(self.x0);
        let mut continuous = Vec::with_capacity(k_max);
        let mut discrete = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let p = self.project(&constraints)[k];
            debug_assert!(!p.is_empty());
            let upper = Self::is_upper(k);
            let best_y = if upper { p.lo } else { p.hi };
            let c = self.cost(k, best_y);
            continuous.push(c);
            constraints[k] = match mode {
                CostMode::Continuous => {
                    let r = self.thresholds[k - 1];
                    if c > 0.0 {
                        Span::point(best_y)
                    } else if upper {
                        p.meet(Span { lo: f64::NEG_INFINITY, hi: r })
                    } else {
                        p.meet(Span { lo: r, hi: f64::INFINITY })
                    }
                }
                CostMode::Discretized(schemes) => {
                    let xi = schemes[k - 1].discretize(c);
                    discrete.push(xi);
                    self.discrete_boundary(k, p, &schemes[k - 1], xi)
                }
            };
        }
        let feasible = self.project(&constraints);
        let cost_range = (1..=k_max)
            .map(|k| {
                let (a, b) = (self.cost(k, feasible[k].lo), self.cost(k, feasible[k].hi));
                (a.min(b), a.max(b))
            })
            .collect();
        let witness = self.witness(&feasible);
        Ok(LexOptimum {
            continuous,
            discrete: matches!(mode, CostMode::Discretized(_)).then_some(discrete),
            feasible,
            cost_range,
            witness,
        })
    }

    /// Greedy forward plan through the optimal sets, aiming at interval midpoints.
    fn witness(&self, feasible: &[Span]) -> Vec<f64> {
        let mut x = self.x0;
        let mut u = Vec::with_capacity(feasible.len());
        for span in &feasible[1..] {
            let allowed = span.meet(Span::point(x).widen(self.bound));
            let target = if allowed.is_empty() { span.lo.clamp(x - self.bound, x + self.bound) } else { 0.5 * (allowed.lo + allowed.hi) };
            let step = (target - x).clamp(-self.bound, self.bound);
            u.push(step);
            x += step;
        }
        u.push(0.0);
        u
    }
}

/// `(1/N) sum_i max(0, max_{disc-optimal} c_i - min_{cont-optimal} c_i)`.
pub fn violation_error(continuous: &LexOptimum, discretized: &LexOptimum) -> f64 {
    let n = continuous.cost_range.len();
    let total: f64 = continuous
        .cost_range
        .iter()
        .zip(&discretized.cost_range)
        .map(|(c, d)| (d.1 - c.0).max(0.0))
        .sum();
    total / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_thresholds_give_zero_cost() {
        let b = LinearBenchmark::new((1..=8).map(|k| if k % 2 == 1 { 100.0 } else { -100.0 }).collect()).unwrap();
        let o = b.exact_lex_optimum(CostMode::Continuous).unwrap();
        assert!(o.continuous.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn single_spec_endpoint() {
        let b = LinearBenchmark::new(vec![-2.0]).unwrap();
        let o = b.exact_lex_optimum(CostMode::Continuous).unwrap();
        assert!((o.continuous[0] - 0.65).abs() < 1e-12);
        assert_eq!(o.witness[0], -1.35);
    }

    #[test]
    fn identical_optima_have_zero_error() {
        let b = LinearBenchmark::new(vec![-2.0, 3.0, 1.0]).unwrap();
        let o = b.exact_lex_optimum(CostMode::Continuous).unwrap();
        assert_eq!(violation_error(&o, &o), 0.0);
    }
}
