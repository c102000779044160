//! Allocation of a total interval budget across specifications.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive parts summing to `m_total`, one per specification in priority order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositionSample {
    pub parts: Vec<usize>,
}

impl CompositionSample {
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

fn check(m_total: usize, n: usize) -> Result<()> {
    if n == 0 || m_total < n {
        return Err(Error::ContractViolation(format!("cannot split {m_total} into {n} positive parts")));
    }
    Ok(())
}

/// Number of compositions `C(m_total - 1, n - 1)`, saturating.
pub fn composition_count(m_total: usize, n: usize) -> u128 {
    if n == 0 || m_total < n {
        return 0;
    }
    let (a, b) = (m_total as u128 - 1, n as u128 - 1);
    let b = b.min(a - b);
    let mut c: u128 = 1;
    for i in 0..b {
        c = match c.checked_mul(a - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

/// Uniform composition via stars and bars: `n - 1` distinct cut points among `m_total - 1` gaps.
pub fn sample_composition(m_total: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<CompositionSample> {
    check(m_total, n)?;
    let mut cuts: Vec<usize> = sample(rng, m_total - 1, n - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(m_total)) {
        parts.push(c - prev);
        prev = c;
    }
    Ok(CompositionSample { parts })
}

/// `count` independent uniform compositions, deterministic per seed.
pub fn sample_compositions(m_total: usize, n: usize, count: usize, seed: u64) -> Result<Vec<CompositionSample>> {
    check(m_total, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_composition(m_total, n, &mut rng)).collect()
}

/// Up to `count` pairwise distinct uniform compositions; all of them when fewer exist.
pub fn sample_distinct_compositions(m_total: usize, n: usize, count: usize, seed: u64) -> Result<Vec<CompositionSample>> {
    check(m_total, n)?;
    let available = composition_count(m_total, n);
    let target = (count as u128).min(available) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(target);
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let c = sample_composition(m_total, n, &mut rng)?;
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Fixed allocation strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Even,
    LinearIncrease,
    LinearDecrease,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Even, Strategy::LinearIncrease, Strategy::LinearDecrease];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Even => "even",
            Strategy::LinearIncrease => "linear-increase",
            Strategy::LinearDecrease => "linear-decrease",
        }
    }

    /// One interval per specification plus the remainder apportioned by weights
    /// (`1` for even, `i` or `n + 1 - i` for the linear ones) with largest remainders;
    /// ties go to the higher-priority specification.
    pub fn composition(&self, m_total: usize, n: usize) -> Result<CompositionSample> {
        check(m_total, n)?;
        let weights: Vec<usize> = (1..=n)
            .map(|i| match self {
                Strategy::Even => 1,
                Strategy::LinearIncrease => i,
                Strategy::LinearDecrease => n + 1 - i,
            })
            .collect();
        Ok(CompositionSample { parts: apportion(m_total - n, &weights).into_iter().map(|p| p + 1).collect() })
    }
}

/// Largest-remainder apportionment of `total` by integer weights.
fn apportion(total: usize, weights: &[usize]) -> Vec<usize> {
    let w_sum: usize = weights.iter().sum();
    let mut parts: Vec<usize> = weights.iter().map(|w| total * w / w_sum).collect();
    let mut rest = total - parts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse((total * weights[i]) % w_sum));
    for i in order {
        if rest == 0 {
            break;
        }
        parts[i] += 1;
        rest -= 1;
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_composition() {
        let c = sample_compositions(8, 8, 5, 1).unwrap();
        assert!(c.iter().all(|c| c.parts == vec![1; 8]));
        assert!(sample_compositions(7, 8, 1, 1).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(composition_count(10, 2), 9);
        assert_eq!(composition_count(8, 8), 1);
        assert_eq!(composition_count(20, 3), 171);
        assert_eq!(sample_distinct_compositions(10, 2, 100, 3).unwrap().len(), 9);
    }

    #[test]
    fn strategies() {
        assert_eq!(Strategy::Even.composition(40, 8).unwrap().parts, vec![5; 8]);
        let inc = Strategy::LinearIncrease.composition(44, 8).unwrap().parts;
        assert_eq!(inc, vec![2, 3, 4, 5, 6, 7, 8, 9]);
        assert!(inc.windows(2).all(|w| w[0] <= w[1]));
        let dec = Strategy::LinearDecrease.composition(44, 8).unwrap().parts;
        assert!(dec.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(Strategy::LinearIncrease.composition(8, 8).unwrap().parts, vec![1; 8]);
    }
}
