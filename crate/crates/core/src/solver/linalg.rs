//! Small dense symmetric-matrix helpers for input covariances.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Real> SquareMatrix<F> {
    pub fn from_row_major(n: usize, data: Vec<F>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Config(format!("expected {n}x{n} matrix, got {} entries", data.len())));
        }
        Ok(Self { n, data })
    }

    pub fn diagonal(diag: &[F]) -> Self {
        let n = diag.len();
        let mut data = vec![F::zero(); n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![F::one(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[F] {
        &self.data
    }

    pub fn scaled(&self, s: F) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| *v * s).collect() }
    }

    /// `out = A x`.
    pub fn mul_vec(&self, x: &[F], out: &mut [F]) {
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            out[i] = row.iter().zip(x).fold(F::zero(), |acc, (a, b)| acc + *a * *b);
        }
    }

    /// `x^T A y`.
    pub fn quad(&self, x: &[F], y: &[F]) -> F {
        let mut acc = F::zero();
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let ay = row.iter().zip(y).fold(F::zero(), |a, (m, v)| a + *m * *v);
            acc = acc + x[i] * ay;
        }
        acc
    }

    fn is_symmetric(&self) -> bool {
        let tol = F::lit(1e-9);
        (0..self.n).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (self.get(i, j), self.get(j, i));
                (a - b).abs() <= tol * (F::one() + a.abs().max(b.abs()))
            })
        })
    }

    /// Lower Cholesky factor. Fails unless the matrix is symmetric positive definite.
    pub fn cholesky(&self) -> Result<Self> {
        if !self.is_symmetric() || self.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("covariance must be finite and symmetric".into()));
        }
        let n = self.n;
        let mut l = vec![F::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(s > F::zero()) {
                        return Err(Error::Config("covariance is not positive definite".into()));
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(Self { n, data: l })
    }

    /// Inverse of a symmetric positive definite matrix via its Cholesky factor.
    pub fn spd_inverse(&self) -> Result<Self> {
        let l = self.cholesky()?;
        let n = self.n;
        let mut inv = vec![F::zero(); n * n];
        let mut col = vec![F::zero(); n];
        for c in 0..n {
            // solve L z = e_c, then L^T x = z
            for i in 0..n {
                let mut s = if i == c { F::one() } else { F::zero() };
                for k in 0..i {
                    s = s - l.get(i, k) * col[k];
                }
                col[i] = s / l.get(i, i);
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in i + 1..n {
                    s = s - l.get(k, i) * col[k];
                }
                col[i] = s / l.get(i, i);
            }
            for i in 0..n {
                inv[i * n + c] = col[i];
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Largest absolute eigenvalue of a symmetric matrix, by power iteration.
    pub fn spectral_norm(&self) -> F {
        let n = self.n;
        if n == 1 {
            return self.data[0].abs();
        }
        let mut v: Vec<F> = (0..n).map(|i| F::one() + F::lit(0.1) * F::from_usize_lossy(i)).collect();
        let mut w = vec![F::zero(); n];
        let mut lambda = F::zero();
        for _ in 0..500 {
            self.mul_vec(&v, &mut w);
            let norm = w.iter().fold(F::zero(), |a, x| a + *x * *x).sqrt();
            if norm == F::zero() {
                return F::zero();
            }
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = *wi / norm;
            }
            if (norm - lambda).abs() <= F::lit(1e-14) * norm {
                return norm;
            }
            lambda = norm;
        }
        lambda
    }
}
