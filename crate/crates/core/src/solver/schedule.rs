//! Decay rules for the temperature/covariance factor and the sample count.

use std::f64::consts::PI;

/// Cosine progress `½(1 − cos(π(j−1)/(J−1)))` in `[0, 1]`; `0` when `J = 1`.
fn cosine_progress(j: usize, iterations: usize) -> f64 {
    if iterations <= 1 {
        return 0.0;
    }
    let t = (j.saturating_sub(1)) as f64 / (iterations - 1) as f64;
    0.5 * (1.0 - (PI * t).cos())
}

/// `1 − (1 − β_min)·½(1 − cos(π(j−1)/(J−1)))` for `1 ≤ j ≤ J`.
pub fn beta_cosine(j: usize, iterations: usize, beta_min: f64) -> f64 {
    1.0 - (1.0 - beta_min) * cosine_progress(j, iterations)
}

/// `sqrt(γ^(j−1))`.
pub fn beta_exponential(j: usize, gamma: f64) -> f64 {
    gamma.powf(j.saturating_sub(1) as f64 / 2.0)
}

/// `ceil(M_init − (M_init − M_final)·½(1 − cos(π(j−1)/(J−1))))`.
///
/// Values within `1e-9` of an integer are snapped before the ceiling so that
/// `cos(π/2) ≈ 6e-17` does not bump an exact midpoint up by one.
pub fn sample_count_cosine(j: usize, iterations: usize, m_init: usize, m_final: usize) -> usize {
    let v = m_init as f64 - (m_init as f64 - m_final as f64) * cosine_progress(j, iterations);
    let r = v.round();
    let c = if (v - r).abs() < 1e-9 { r } else { v.ceil() };
    c.max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert_eq!(beta_cosine(1, 20, 1e-6), 1.0);
        assert!((beta_cosine(20, 20, 1e-6) - 1e-6).abs() < 1e-15);
        assert!((beta_exponential(3, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(beta_exponential(1, 0.6), 1.0);
        assert_eq!(beta_cosine(1, 1, 1e-6), 1.0);
    }

    #[test]
    fn sample_examples() {
        assert_eq!(sample_count_cosine(1, 20, 400, 250), 400);
        assert_eq!(sample_count_cosine(20, 20, 400, 250), 250);
        assert_eq!(sample_count_cosine(11, 21, 400, 250), 325);
        assert_eq!(sample_count_cosine(11, 21, 401, 250), 326);
        let seq: Vec<_> = (1..=20).map(|j| sample_count_cosine(j, 20, 1000, 100)).collect();
        assert!(seq.windows(2).all(|w| w[0] >= w[1]));
    }
}
