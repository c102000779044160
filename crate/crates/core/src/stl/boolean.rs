//! Qualitative (Boolean) STL semantics, evaluated directly on the syntax tree.
//!
//! Derived operators are evaluated natively rather than through their core
//! rewrite, so this monitor doubles as an oracle for [`Formula::normalize`].
//! Windows are clipped to `[0, K]`; an empty window makes `U`, `S`, `F`, `O`
//! false and `G`, `H` true.

use std::collections::HashMap;

use crate::error::Result;
use crate::scalar::Real;
use crate::stl::formula::{resolve, Formula};
use crate::stl::trace::Trace;

/// Boolean verdict `(y, k) |= phi`. A predicate holds iff `p(y, k) >= 0`.
pub fn boolean_sat<F: Real>(formula: &Formula<F>, trace: &Trace<F>, k: usize) -> Result<bool> {
    trace.check_time(k)?;
    let mut monitor = BooleanMonitor::new(trace);
    Ok(monitor.sat(formula, k))
}

/// Verdicts at every time step.
pub fn boolean_sat_all_times<F: Real>(formula: &Formula<F>, trace: &Trace<F>) -> Vec<bool> {
    let mut monitor = BooleanMonitor::new(trace);
    (0..=trace.horizon()).map(|k| monitor.sat(formula, k)).collect()
}

/// Memoizing Boolean monitor bound to one trace.
pub struct BooleanMonitor<'t, F> {
    trace: &'t Trace<F>,
    memo: HashMap<(usize, usize), bool>,
}

/// Future window `(k + [lo, hi]) ∩ [0, K]` as an inclusive range, or `None` if empty.
pub(crate) fn future_window(k: usize, lo: usize, hi: usize, horizon: usize) -> Option<(usize, usize)> {
    let a = k.checked_add(lo)?;
    if a > horizon {
        return None;
    }
    let b = k.saturating_add(hi).min(horizon);
    Some((a, b))
}

/// Past window `(k - [lo, hi]) ∩ [0, K]` as an inclusive range, or `None` if empty.
pub(crate) fn past_window(k: usize, lo: usize, hi: usize) -> Option<(usize, usize)> {
    if lo > k {
        return None;
    }
    let b = k - lo;
    let a = k.saturating_sub(hi);
    Some((a, b))
}

impl<'t, F: Real> BooleanMonitor<'t, F> {
    pub fn new(trace: &'t Trace<F>) -> Self {
        Self { trace, memo: HashMap::new() }
    }

    pub fn sat(&mut self, formula: &Formula<F>, k: usize) -> bool {
        let key = (formula as *const Formula<F> as usize, k);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let horizon = self.trace.horizon();
        let v = match formula {
            Formula::True => true,
            Formula::Predicate(p) => p.eval(self.trace, k) >= F::zero(),
            Formula::Not(a) => !self.sat(a, k),
            Formula::And(a, b) => self.sat(a, k) && self.sat(b, k),
            Formula::Or(a, b) => self.sat(a, k) || self.sat(b, k),
            Formula::Implies(a, b) => !self.sat(a, k) || self.sat(b, k),
            Formula::Until(i, a, b) => {
                let (lo, hi) = resolve(*i, horizon);
                match future_window(k, lo, hi, horizon) {
                    None => false,
                    Some((s, e)) => (s..=e).any(|kp| self.sat(b, kp) && (k..kp).all(|kpp| self.sat(a, kpp))),
                }
            }
            Formula::Since(i, a, b) => {
                let (lo, hi) = resolve(*i, horizon);
                match past_window(k, lo, hi) {
                    None => false,
                    Some((s, e)) => {
                        (s..=e).any(|kp| self.sat(b, kp) && (kp + 1..=k).all(|kpp| self.sat(a, kpp)))
                    }
                }
            }
            Formula::Eventually(i, a) => {
                let (lo, hi) = resolve(*i, horizon);
                future_window(k, lo, hi, horizon).is_some_and(|(s, e)| (s..=e).any(|kp| self.sat(a, kp)))
            }
            Formula::Globally(i, a) => {
                let (lo, hi) = resolve(*i, horizon);
                future_window(k, lo, hi, horizon).is_none_or(|(s, e)| (s..=e).all(|kp| self.sat(a, kp)))
            }
            Formula::Once(i, a) => {
                let (lo, hi) = resolve(*i, horizon);
                past_window(k, lo, hi).is_some_and(|(s, e)| (s..=e).any(|kp| self.sat(a, kp)))
            }
            Formula::Historically(i, a) => {
                let (lo, hi) = resolve(*i, horizon);
                past_window(k, lo, hi).is_none_or(|(s, e)| (s..=e).all(|kp| self.sat(a, kp)))
            }
        };
        self.memo.insert(key, v);
        v
    }
}
