use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Packed lexicographic cost.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ScalarCost(pub BigUint);

impl ScalarCost {
    pub fn zero() -> Self {
        ScalarCost(BigUint::zero())
    }

    pub fn from_u64(v: u64) -> Self {
        ScalarCost(BigUint::from(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// `self - floor` as `f64`, saturating to `+inf`. Requires `floor <= self`.
    pub fn offset_f64(&self, floor: &ScalarCost) -> f64 {
        if self.0 <= floor.0 {
            return 0.0;
        }
        let diff = &self.0 - &floor.0;
        diff.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for ScalarCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ScalarCost {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BigUint::from_str(s)
            .map(ScalarCost)
            .map_err(|e| Error::Config(format!("invalid scalar cost `{s}`: {e}")))
    }
}

impl Serialize for ScalarCost {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarCost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bit layout of the packed cost: word widths `b_i = ceil(log2(m_i + 1))` and
/// offsets `B_i = sum_{j > i} b_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    m: Vec<u64>,
    widths: Vec<u32>,
    offsets: Vec<u32>,
}

/// Bits needed to represent `0..=m`.
pub fn word_width(m: u64) -> u32 {
    64 - m.leading_zeros()
}

impl Layout {
    /// Layout for interval counts `m`, highest priority first.
    pub fn new(m: &[u64]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::ContractViolation("a layout needs at least one component".into()));
        }
        if let Some(i) = m.iter().position(|&x| x == 0) {
            return Err(Error::ContractViolation(format!("component {i} has m = 0")));
        }
        let widths: Vec<u32> = m.iter().map(|&x| word_width(x)).collect();
        let mut layout = Self::from_widths(&widths)?;
        layout.m = m.to_vec();
        Ok(layout)
    }

    /// Layout with explicit word widths; each component admits values up to `2^b - 1`.
    pub fn from_widths(widths: &[u32]) -> Result<Self> {
        if widths.is_empty() || widths.contains(&0) {
            return Err(Error::ContractViolation("word widths must be nonempty and positive".into()));
        }
        let mut offsets = vec![0u32; widths.len()];
        for i in (0..widths.len() - 1).rev() {
            offsets[i] = offsets[i + 1] + widths[i + 1];
        }
        let m = widths
            .iter()
            .map(|&b| if b >= 64 { u64::MAX } else { (1u64 << b) - 1 })
            .collect();
        Ok(Self { m, widths: widths.to_vec(), offsets })
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn m(&self) -> &[u64] {
        &self.m
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    /// Total number of bits, `sum b_i`.
    pub fn total_bits(&self) -> u32 {
        self.offsets[0] + self.widths[0]
    }

    fn check_len(&self, v: &[u64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::ContractViolation(format!(
                "cost vector has {} components, layout has {}",
                v.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// `sum v_i * 2^{B_i}`, rejecting components above `m_i`.
    pub fn pack(&self, v: &[u64]) -> Result<ScalarCost> {
        self.check_len(v)?;
        if let Some(i) = (0..v.len()).find(|&i| v[i] > self.m[i]) {
            return Err(Error::ContractViolation(format!(
                "component {i} is {} but its maximum is {}",
                v[i], self.m[i]
            )));
        }
        Ok(self.weighted_sum_unchecked(v))
    }

    /// `sum v_i * 2^{B_i}` without bounds checks. Out-of-range components spill into
    /// the next word, so the result no longer represents the lexicographic order.
    pub fn weighted_sum(&self, v: &[u64]) -> Result<ScalarCost> {
        self.check_len(v)?;
        Ok(self.weighted_sum_unchecked(v))
    }

    fn weighted_sum_unchecked(&self, v: &[u64]) -> ScalarCost {
        let mut acc = BigUint::zero();
        for (x, &b) in v.iter().zip(&self.offsets) {
            if *x != 0 {
                acc += BigUint::from(*x) << b;
            }
        }
        ScalarCost(acc)
    }

    /// Inverse of [`pack`](Self::pack).
    pub fn unpack(&self, s: &ScalarCost) -> Result<Vec<u64>> {
        if s.0.bits() > u64::from(self.total_bits()) {
            return Err(Error::ContractViolation(format!(
                "scalar cost {s} needs more than {} bits",
                self.total_bits()
            )));
        }
        let out: Vec<u64> = self
            .widths
            .iter()
            .zip(&self.offsets)
            .map(|(&b, &off)| {
                let mask = (BigUint::from(1u8) << b) - 1u8;
                ((&s.0 >> off) & mask).to_u64().unwrap_or(u64::MAX)
            })
            .collect();
        if let Some(i) = (0..out.len()).find(|&i| out[i] > self.m[i]) {
            return Err(Error::ContractViolation(format!("decoded component {i} exceeds m = {}", self.m[i])));
        }
        Ok(out)
    }

    /// `sum_{i > i*} (2^{b_i} - 1) * 2^{B_i}`, the largest lower-priority residual below index `i_star`.
    pub fn residual_bound(&self, i_star: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for i in i_star + 1..self.len() {
            acc += ((BigUint::from(1u8) << self.widths[i]) - 1u8) << self.offsets[i];
        }
        acc
    }
}

/// Lexicographic comparison of two discrete cost vectors.
pub fn lex_compare(a: &[u64], b: &[u64]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::ContractViolation(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    Ok(a.cmp(b))
}
