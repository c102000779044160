//! Minimum / maximum operator families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robustness::ext::ExtReal;
use crate::scalar::Real;

/// Min/max operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorFamily {
    Std,
    Dur,
    DurSev,
    Smooth,
    Agm,
    New,
    Pm,
}

impl OperatorFamily {
    pub const ALL: [OperatorFamily; 7] = [
        OperatorFamily::Std,
        OperatorFamily::Dur,
        OperatorFamily::DurSev,
        OperatorFamily::Smooth,
        OperatorFamily::Agm,
        OperatorFamily::New,
        OperatorFamily::Pm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorFamily::Std => "std",
            OperatorFamily::Dur => "dur",
            OperatorFamily::DurSev => "dur-sev",
            OperatorFamily::Smooth => "smooth",
            OperatorFamily::Agm => "agm",
            OperatorFamily::New => "new",
            OperatorFamily::Pm => "pm",
        }
    }

    /// Families whose maximum is defined as `-amin(-k)`.
    pub fn max_is_dual(self) -> bool {
        !matches!(self, OperatorFamily::Smooth)
    }
}

impl fmt::Display for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// Tuning constants `nu1..nu5` of the smooth, new and power-mean operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct Nu<F> {
    pub nu1: F,
    pub nu2: F,
    pub nu3: F,
    pub nu4: F,
    pub nu5: F,
}

impl<F: Real> Default for Nu<F> {
    fn default() -> Self {
        Self { nu1: F::lit(10.0), nu2: F::lit(10.0), nu3: F::one(), nu4: F::lit(2.0), nu5: F::lit(2.0) }
    }
}

impl<F: Real> Nu<F> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("nu1", self.nu1), ("nu2", self.nu2), ("nu3", self.nu3), ("nu4", self.nu4), ("nu5", self.nu5)] {
            if !(v > F::zero() && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Minimum operator of `family` over `values`.
pub fn amin<F: Real>(family: OperatorFamily, values: &[ExtReal<F>], nu: &Nu<F>) -> Result<ExtReal<F>> {
    if values.is_empty() {
        return Err(Error::EmptyOperands);
    }
    Ok(match family {
        OperatorFamily::Std => min_std(values),
        OperatorFamily::Dur => min_dur(values),
        OperatorFamily::DurSev => with_min_conventions(values, min_dur_sev),
        OperatorFamily::Smooth => with_min_conventions(values, |v| min_smooth(v, nu.nu1)),
        OperatorFamily::Agm => with_min_conventions(values, min_agm),
        OperatorFamily::New => with_min_conventions(values, |v| min_new(v, nu.nu3)),
        OperatorFamily::Pm => with_min_conventions(values, |v| min_pm(v, nu.nu4, nu.nu5)),
    })
}

/// Maximum operator of `family` over `values`.
pub fn amax<F: Real>(family: OperatorFamily, values: &[ExtReal<F>], nu: &Nu<F>) -> Result<ExtReal<F>> {
    if values.is_empty() {
        return Err(Error::EmptyOperands);
    }
    match family {
        OperatorFamily::Std => Ok(values.iter().copied().fold(ExtReal::NegInf, ExtReal::max)),
        OperatorFamily::Smooth => Ok(max_smooth(values, nu.nu2)),
        _ => {
            let negated: Vec<ExtReal<F>> = values.iter().map(|v| -*v).collect();
            Ok(-amin(family, &negated, nu)?)
        }
    }
}

#[inline]
fn min_std<F: Real>(values: &[ExtReal<F>]) -> ExtReal<F> {
    values.iter().copied().fold(ExtReal::PosInf, ExtReal::min)
}

/// Applies the extended-real conventions: any `-inf` gives `-inf`, all `+inf`
/// gives `+inf`. Otherwise `body` sees at least one finite value.
fn with_min_conventions<F: Real>(values: &[ExtReal<F>], body: impl FnOnce(&[ExtReal<F>]) -> ExtReal<F>) -> ExtReal<F> {
    if values.iter().any(|v| matches!(v, ExtReal::NegInf)) {
        ExtReal::NegInf
    } else if values.iter().all(|v| matches!(v, ExtReal::PosInf)) {
        ExtReal::PosInf
    } else {
        body(values)
    }
}

#[inline]
fn strictly_positive<F: Real>(v: ExtReal<F>) -> bool {
    v > ExtReal::zero()
}

fn z_of<F: Real>(values: &[ExtReal<F>]) -> F {
    F::from_usize_lossy(values.len())
}

fn min_dur<F: Real>(values: &[ExtReal<F>]) -> ExtReal<F> {
    let kmin = min_std(values);
    if strictly_positive(kmin) {
        return kmin;
    }
    let negatives = values.iter().filter(|v| v.is_neg()).count();
    if negatives == 0 {
        ExtReal::zero()
    } else {
        ExtReal::Finite(-F::from_usize_lossy(negatives) / z_of(values))
    }
}

/// `(1/z) * sum(min(k_i, 0))` over finite inputs; keeps the sign of zero so that a
/// marginally violated operand still yields a violated result.
fn mean_negative_part<F: Real>(values: &[ExtReal<F>]) -> ExtReal<F> {
    let mut any = false;
    let mut acc = -F::zero();
    for v in values {
        if v.is_neg() {
            any = true;
            acc = acc + v.to_float();
        }
    }
    if any {
        ExtReal::Finite(acc / z_of(values))
    } else {
        ExtReal::zero()
    }
}

fn min_dur_sev<F: Real>(values: &[ExtReal<F>]) -> ExtReal<F> {
    let kmin = min_std(values);
    if strictly_positive(kmin) {
        kmin
    } else {
        mean_negative_part(values)
    }
}

fn min_agm<F: Real>(values: &[ExtReal<F>]) -> ExtReal<F> {
    let kmin = min_std(values);
    if !strictly_positive(kmin) {
        return mean_negative_part(values);
    }
    // z-th root of prod(1 + k_i), minus one, in log space
    let mean_log = values.iter().map(|v| v.to_float().ln_1p()).sum::<F>() / z_of(values);
    ExtReal::from_float(mean_log.exp_m1())
}

fn min_new<F: Real>(values: &[ExtReal<F>], nu3: F) -> ExtReal<F> {
    let kmin = match min_std(values) {
        ExtReal::Finite(v) => v,
        other => return other,
    };
    if kmin == F::zero() {
        return ExtReal::Finite(kmin);
    }
    // kt_i = (k_i - kmin) / kmin; +inf entries give kt = -inf (kmin < 0) or +inf (kmin > 0)
    let tilde = |v: &ExtReal<F>| match v {
        ExtReal::PosInf => {
            if kmin < F::zero() {
                F::neg_infinity()
            } else {
                F::infinity()
            }
        }
        other => (other.to_float() - kmin) / kmin,
    };
    if kmin < F::zero() {
        let (mut num, mut den) = (F::zero(), F::zero());
        for v in values {
            let t = tilde(v);
            num = num + ((F::one() + nu3) * t).exp();
            den = den + (nu3 * t).exp();
        }
        ExtReal::Finite(kmin * num / den)
    } else {
        let (mut num, mut den) = (F::zero(), F::zero());
        for v in values {
            let w = (-nu3 * tilde(v)).exp();
            if w > F::zero() {
                num = num + v.to_float() * w;
            }
            den = den + w;
        }
        ExtReal::from_float(num / den)
    }
}

/// `(mean(a_i^p))^(1/p)` for nonnegative finite `a_i`, scaled by the maximum.
fn power_mean<F: Real>(a: impl Iterator<Item = F> + Clone, z: F, p: F) -> F {
    let scale = a.clone().fold(F::zero(), F::max);
    if scale == F::zero() {
        return F::zero();
    }
    let s = a.map(|x| (x / scale).powf(p)).sum::<F>() / z;
    scale * s.powf(F::one() / p)
}

fn min_pm<F: Real>(values: &[ExtReal<F>], nu4: F, nu5: F) -> ExtReal<F> {
    let kmin = min_std(values);
    let z = z_of(values);
    if strictly_positive(kmin) {
        if values.iter().any(|v| matches!(v, ExtReal::PosInf)) {
            return ExtReal::PosInf;
        }
        return ExtReal::Finite(power_mean(values.iter().map(|v| v.to_float()), z, nu4));
    }
    if !values.iter().any(|v| v.is_neg()) {
        return ExtReal::zero();
    }
    let parts = values.iter().map(|v| if v.is_neg() { -v.to_float() } else { F::zero() });
    ExtReal::Finite(-power_mean(parts, z, nu5))
}

fn min_smooth<F: Real>(values: &[ExtReal<F>], nu1: F) -> ExtReal<F> {
    // -(1/nu1) log sum exp(-nu1 k_i), shifted by the smallest value
    let a = match min_std(values) {
        ExtReal::Finite(v) => v,
        other => return other,
    };
    let s: F = values
        .iter()
        .filter_map(|v| v.finite())
        .map(|v| (-nu1 * (v - a)).exp())
        .sum();
    ExtReal::Finite(a - s.ln() / nu1)
}

fn max_smooth<F: Real>(values: &[ExtReal<F>], nu2: F) -> ExtReal<F> {
    if values.iter().any(|v| matches!(v, ExtReal::PosInf)) {
        return ExtReal::PosInf;
    }
    if values.iter().all(|v| matches!(v, ExtReal::NegInf)) {
        return ExtReal::NegInf;
    }
    // softmax-weighted mean, shifted by the largest finite value
    let b = values.iter().filter_map(|v| v.finite()).fold(F::neg_infinity(), F::max);
    // num starts at -0 so that an all -0 operand list stays violated
    let (mut num, mut den) = (-F::zero(), F::zero());
    for v in values.iter().filter_map(|v| v.finite()) {
        let w = (nu2 * (v - b)).exp();
        num = num + v * w;
        den = den + w;
    }
    ExtReal::Finite(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[f64]) -> Vec<ExtReal<f64>> {
        v.iter().map(|x| ExtReal::from_float(*x)).collect()
    }

    fn val(r: Result<ExtReal<f64>>) -> f64 {
        r.unwrap().to_float()
    }

    #[test]
    fn singleton_std() {
        assert_eq!(val(amin(OperatorFamily::Std, &e(&[3.0]), &Nu::default())), 3.0);
    }

    #[test]
    fn power_mean_conjunction() {
        let nu = Nu { nu5: 1.0, ..Nu::default() };
        assert!((val(amin(OperatorFamily::Pm, &e(&[-100.0, 0.1]), &nu)) + 50.0).abs() < 1e-12);
    }

    #[test]
    fn empty_is_error() {
        for fam in OperatorFamily::ALL {
            assert_eq!(amin::<f64>(fam, &[], &Nu::default()), Err(Error::EmptyOperands));
            assert_eq!(amax::<f64>(fam, &[], &Nu::default()), Err(Error::EmptyOperands));
        }
    }

    #[test]
    fn infinity_conventions() {
        let nu = Nu::default();
        for fam in [OperatorFamily::DurSev, OperatorFamily::Smooth, OperatorFamily::Agm, OperatorFamily::New, OperatorFamily::Pm] {
            assert!(matches!(amin(fam, &e(&[1.0, f64::NEG_INFINITY]), &nu).unwrap(), ExtReal::NegInf), "{fam}");
            assert!(matches!(amin(fam, &e(&[f64::INFINITY; 3]), &nu).unwrap(), ExtReal::PosInf), "{fam}");
        }
        assert!(matches!(amax(OperatorFamily::Smooth, &e(&[1.0, f64::INFINITY]), &nu).unwrap(), ExtReal::PosInf));
        assert!(matches!(amax(OperatorFamily::Smooth, &e(&[f64::NEG_INFINITY; 2]), &nu).unwrap(), ExtReal::NegInf));
    }

    #[test]
    fn new_zero_branch_keeps_sign() {
        let nu = Nu::default();
        assert!(amin(OperatorFamily::New, &e(&[0.0, 2.0]), &nu).unwrap().is_sat());
        assert!(amin(OperatorFamily::New, &e(&[-0.0, 2.0]), &nu).unwrap().is_neg());
    }

    #[test]
    fn new_all_equal_negative() {
        let r = val(amin(OperatorFamily::New, &e(&[-2.0, -2.0, -2.0]), &Nu::default()));
        assert!((r + 2.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_is_stable_for_large_inputs() {
        let nu = Nu::default();
        let r = val(amin(OperatorFamily::Smooth, &e(&[1e6, 1e6 + 1.0]), &nu));
        assert!(r.is_finite() && r <= 1e6);
        let r = val(amax(OperatorFamily::Smooth, &e(&[-1e6, -1e6 + 1.0]), &nu));
        assert!(r.is_finite() && r <= -1e6 + 1.0);
    }
}
