use crate::error::{Error, Result};
use crate::scalar::Real;

/// Output trajectory sampled at times `0..=K` with a fixed increment `dt`.
///
/// Values are stored time-major: row `k` holds the `n_y` output channels at step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<F> {
    values: Vec<F>,
    n_y: usize,
    dt: F,
}

impl<F: Real> Trace<F> {
    /// Builds a trace from time-major rows. Requires at least two rows, equal
    /// row widths, finite entries and `dt > 0`.
    pub fn from_rows(rows: &[Vec<F>], dt: F) -> Result<Self> {
        let n_y = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * n_y);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n_y {
                return Err(Error::InvalidTrace(format!(
                    "row {k} has {} channels, expected {n_y}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(values, n_y, dt)
    }

    /// Builds a trace from a flat time-major buffer.
    pub fn from_flat(values: Vec<F>, n_y: usize, dt: F) -> Result<Self> {
        if n_y == 0 {
            return Err(Error::InvalidTrace("no output channels".into()));
        }
        if values.len() % n_y != 0 {
            return Err(Error::InvalidTrace(format!(
                "buffer length {} is not a multiple of {n_y}",
                values.len()
            )));
        }
        if values.len() / n_y < 2 {
            return Err(Error::InvalidTrace("horizon K must be at least 1".into()));
        }
        if !(dt > F::zero()) || !dt.is_finite() {
            return Err(Error::InvalidTrace(format!("dt must be positive, got {dt}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTrace(format!(
                "non-finite value at step {}, channel {}",
                i / n_y,
                i % n_y
            )));
        }
        Ok(Self { values, n_y, dt })
    }

    /// Single-channel trace.
    pub fn from_signal(signal: &[F], dt: F) -> Result<Self> {
        Self::from_flat(signal.to_vec(), 1, dt)
    }

    /// Final time index `K`.
    #[inline]
    pub fn horizon(&self) -> usize {
        self.values.len() / self.n_y - 1
    }

    /// Number of samples, `K + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len() / self.n_y
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn n_y(&self) -> usize {
        self.n_y
    }

    #[inline]
    pub fn dt(&self) -> F {
        self.dt
    }

    /// Output vector at step `k`. Panics if `k > K`.
    #[inline]
    pub fn row(&self, k: usize) -> &[F] {
        &self.values[k * self.n_y..(k + 1) * self.n_y]
    }

    /// Single channel value. Panics on out-of-range indices.
    #[inline]
    pub fn get(&self, k: usize, channel: usize) -> F {
        self.values[k * self.n_y + channel]
    }

    /// One channel over all time steps.
    pub fn channel(&self, channel: usize) -> Vec<F> {
        (0..self.len()).map(|k| self.get(k, channel)).collect()
    }

    pub fn as_flat(&self) -> &[F] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.values.chunks_exact(self.n_y)
    }

    /// Returns `Err` unless `0 <= k <= K`.
    pub fn check_time(&self, k: usize) -> Result<()> {
        if k > self.horizon() {
            Err(Error::TimeOutOfRange { k, horizon: self.horizon() })
        } else {
            Ok(())
        }
    }
}
