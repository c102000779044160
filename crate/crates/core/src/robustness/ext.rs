use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use crate::scalar::Real;

/// Extended real `R ∪ {-inf, +inf}`.
///
/// Zero is signed: `Finite(-0.0)` counts as a (marginal) violation and
/// `Finite(+0.0)` as a (marginal) satisfaction. See [`ExtReal::is_sat`].
#[derive(Debug, Clone, Copy)]
pub enum ExtReal<F> {
    NegInf,
    Finite(F),
    PosInf,
}

impl<F: Real> ExtReal<F> {
    /// Converts a float, mapping `±inf` to the infinite variants and NaN to `-inf`.
    #[inline]
    pub fn from_float(v: F) -> Self {
        if v.is_finite() {
            ExtReal::Finite(v)
        } else if v.is_nan() || v < F::zero() {
            ExtReal::NegInf
        } else {
            ExtReal::PosInf
        }
    }

    /// Float view with `±inf` for the infinite variants.
    #[inline]
    pub fn to_float(self) -> F {
        match self {
            ExtReal::NegInf => F::neg_infinity(),
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => F::infinity(),
        }
    }

    pub fn finite(self) -> Option<F> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Satisfaction reading of a robustness value: `+0` and above.
    #[inline]
    pub fn is_sat(self) -> bool {
        match self {
            ExtReal::NegInf => false,
            ExtReal::Finite(v) => !v.is_sign_negative(),
            ExtReal::PosInf => true,
        }
    }

    /// Negation of [`is_sat`](Self::is_sat): `-0` and below.
    #[inline]
    pub fn is_neg(self) -> bool {
        !self.is_sat()
    }

    /// Total order with `-inf < ... < -0 < +0 < ... < +inf`.
    #[inline]
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.total_order(b),
        }
    }

    #[inline]
    pub fn min(self, other: Self) -> Self {
        if other.total_cmp(&self).is_lt() {
            other
        } else {
            self
        }
    }

    #[inline]
    pub fn max(self, other: Self) -> Self {
        if other.total_cmp(&self).is_gt() {
            other
        } else {
            self
        }
    }

    pub fn zero() -> Self {
        ExtReal::Finite(F::zero())
    }
}

impl<F: Real> Neg for ExtReal<F> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

/// Numeric equality: `-0 == +0`.
impl<F: Real> PartialEq for ExtReal<F> {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

/// Numeric order: `-0` and `+0` compare equal.
impl<F: Real> PartialOrd for ExtReal<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            _ => Some(self.total_cmp(other)),
        }
    }
}

impl<F: Real> From<F> for ExtReal<F> {
    fn from(v: F) -> Self {
        Self::from_float(v)
    }
}

impl<F: Real> fmt::Display for ExtReal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}
