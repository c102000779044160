use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robustness::ExtReal;
use crate::scalar::Real;

/// Continuous violation cost `-min(0, eta)`. `+inf` for `eta = -inf`.
pub fn violation_cost<F: Real>(eta: ExtReal<F>) -> F {
    match eta {
        ExtReal::PosInf => F::zero(),
        ExtReal::NegInf => F::infinity(),
        ExtReal::Finite(v) => {
            if v < F::zero() {
                -v
            } else {
                F::zero()
            }
        }
    }
}

/// Quantization of the cost axis into `m` violation intervals.
///
/// Interval `0` is `[0, 0]`, interval `xi` in `1..m` is `(a_{xi-1}, a_xi]` with
/// `a_0 = 0`, and interval `m` is `(a_{m-1}, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<F>", into = "Vec<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct DiscretizationScheme<F> {
    thresholds: Vec<F>,
}

impl<F: Real> DiscretizationScheme<F> {
    /// Thresholds `a_1 < ... < a_{m-1}`, all positive and finite.
    pub fn new(thresholds: Vec<F>) -> Result<Self> {
        for (i, a) in thresholds.iter().enumerate() {
            if !(a.is_finite() && *a > F::zero()) {
                return Err(Error::Config(format!("threshold {} must be positive and finite, got {a}", i + 1)));
            }
            if i > 0 && !(thresholds[i - 1] < *a) {
                return Err(Error::Config("thresholds must be strictly increasing".into()));
            }
        }
        Ok(Self { thresholds })
    }

    /// `m = 1`: satisfied (0) versus violated (1).
    pub fn single() -> Self {
        Self { thresholds: Vec::new() }
    }

    /// `m` equally sized intervals over `[0, c_bar]`: `a_xi = c_bar / (m - 1) * xi`.
    pub fn uniform(c_bar: F, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::SingleIntervalScheme);
        }
        if !(c_bar.is_finite() && c_bar > F::zero()) {
            return Err(Error::Config(format!("c_bar must be positive and finite, got {c_bar}")));
        }
        let step = c_bar / F::from_usize_lossy(m - 1);
        Self::new((1..m).map(|xi| step * F::from_usize_lossy(xi)).collect())
    }

    /// [`uniform`](Self::uniform) for `m >= 2`, [`single`](Self::single) for `m = 1`.
    pub fn uniform_or_single(c_bar: F, m: usize) -> Result<Self> {
        match m {
            0 => Err(Error::Config("a scheme needs at least one violation interval".into())),
            1 => Ok(Self::single()),
            _ => Self::uniform(c_bar, m),
        }
    }

    /// Number of violation intervals `m`.
    pub fn m(&self) -> usize {
        self.thresholds.len() + 1
    }

    pub fn thresholds(&self) -> &[F] {
        &self.thresholds
    }

    /// Upper bound `a_xi` of interval `xi` (`0` for `xi = 0`, `inf` for `xi = m`).
    pub fn upper_bound(&self, xi: usize) -> F {
        match xi {
            0 => F::zero(),
            x if x < self.m() => self.thresholds[x - 1],
            _ => F::infinity(),
        }
    }

    /// Interval index of a nonnegative cost. Negative or NaN input is treated as `0`.
    pub fn discretize(&self, cost: F) -> u64 {
        if !(cost > F::zero()) {
            return 0;
        }
        (self.thresholds.partition_point(|a| *a < cost) + 1) as u64
    }
}

impl<F: Real> TryFrom<Vec<F>> for DiscretizationScheme<F> {
    type Error = Error;
    fn try_from(v: Vec<F>) -> Result<Self> {
        Self::new(v)
    }
}

impl<F> From<DiscretizationScheme<F>> for Vec<F> {
    fn from(s: DiscretizationScheme<F>) -> Self {
        s.thresholds
    }
}
