//! Predicate robustness functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robustness::ext::ExtReal;
use crate::scalar::Real;

/// How a raw predicate value `p(y, k)` is turned into robustness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateMeasure {
    Space,
    LeftTime,
    RightTime,
    CombTime,
    SpaceLeftTime,
}

impl PredicateMeasure {
    pub const ALL: [PredicateMeasure; 5] = [
        PredicateMeasure::Space,
        PredicateMeasure::LeftTime,
        PredicateMeasure::RightTime,
        PredicateMeasure::CombTime,
        PredicateMeasure::SpaceLeftTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredicateMeasure::Space => "space",
            PredicateMeasure::LeftTime => "left-time",
            PredicateMeasure::RightTime => "right-time",
            PredicateMeasure::CombTime => "comb-time",
            PredicateMeasure::SpaceLeftTime => "space-left-time",
        }
    }

    /// True if the value at `k` depends on other time steps.
    pub fn is_temporal(self) -> bool {
        !matches!(self, PredicateMeasure::Space)
    }
}

impl fmt::Display for PredicateMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredicateMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PredicateMeasure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

#[inline]
fn positive<F: Real>(v: F) -> bool {
    v >= F::zero()
}

#[inline]
fn signed<F: Real>(pos: bool, magnitude: F) -> ExtReal<F> {
    ExtReal::from_float(if pos { magnitude } else { -magnitude })
}

/// Predicate robustness at `k` on a horizon `K`, reading raw values through `p`.
///
/// `sign(v) = +1` iff `v >= 0`. The time measures return the signed length of
/// the longest same-signed window around `k`; the window stops growing once it
/// hits the trace boundary, so `tau` is capped at `K - k` (left), `k` (right) and
/// `max(k, K - k)` (combined, clipping each side independently). A violated
/// predicate with `tau = 0` yields `-0`. Scans stop at the first sign change and
/// only call `p` on time steps they inspect.
pub fn predicate_robustness<F: Real>(
    measure: PredicateMeasure,
    p: &mut impl FnMut(usize) -> F,
    k: usize,
    horizon: usize,
) -> ExtReal<F> {
    let pk = p(k);
    if pk.is_nan() {
        return ExtReal::NegInf;
    }
    let s = positive(pk);
    match measure {
        // -0 is a satisfied predicate; report it as +0
        PredicateMeasure::Space => ExtReal::from_float(pk + F::zero()),
        PredicateMeasure::LeftTime => {
            let tau = (k + 1..=horizon).take_while(|&kp| positive(p(kp)) == s).count();
            signed(s, F::from_usize_lossy(tau))
        }
        PredicateMeasure::RightTime => {
            let tau = (0..k).rev().take_while(|&kp| positive(p(kp)) == s).count();
            signed(s, F::from_usize_lossy(tau))
        }
        PredicateMeasure::CombTime => {
            let cap = k.max(horizon - k);
            let mut tau = 0;
            for t in 1..=cap {
                let left_ok = t > k || positive(p(k - t)) == s;
                if !left_ok {
                    break;
                }
                let right_ok = k + t > horizon || positive(p(k + t)) == s;
                if !right_ok {
                    break;
                }
                tau = t;
            }
            signed(s, F::from_usize_lossy(tau))
        }
        PredicateMeasure::SpaceLeftTime => {
            let mut best = pk.abs();
            for kp in k + 1..=horizon {
                let v = p(kp);
                if positive(v) != s {
                    break;
                }
                best = best.max(F::from_usize_lossy(kp - k) + v.abs());
            }
            signed(s, best)
        }
    }
}

/// Convenience wrapper over a slice of predicate values.
pub fn predicate_robustness_of_signal<F: Real>(measure: PredicateMeasure, signal: &[F], k: usize) -> Result<ExtReal<F>> {
    if signal.is_empty() || k >= signal.len() {
        return Err(Error::TimeOutOfRange { k, horizon: signal.len().saturating_sub(1) });
    }
    Ok(predicate_robustness(measure, &mut |i| signal[i], k, signal.len() - 1))
}
