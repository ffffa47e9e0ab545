//! Tridiagonal systems.
//!
//! [`TridiagonalSystem::solve_thomas`] is the production path (no pivoting);
//! [`TridiagonalSystem::solve_dense_oracle`] expands to a dense matrix and
//! runs Gaussian elimination with partial pivoting, for verification.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `lower[i]` sits in row `i + 1`, `upper[i]` in row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub lower: Vec<T>,
    pub main: Vec<T>,
    pub upper: Vec<T>,
    pub rhs: Vec<T>,
}

/// Relative pivot guard for the Thomas sweep.
const PIVOT_TOL: f64 = 1e-14;

impl<T: Scalar> TridiagonalSystem<T> {
    pub fn new(lower: Vec<T>, main: Vec<T>, upper: Vec<T>, rhs: Vec<T>) -> Result<Self> {
        let sys = Self { lower, main, upper, rhs };
        sys.validate()?;
        Ok(sys)
    }

    pub fn zeros(m: usize) -> Self {
        let off = m.saturating_sub(1);
        Self {
            lower: vec![T::zero(); off],
            main: vec![T::zero(); m],
            upper: vec![T::zero(); off],
            rhs: vec![T::zero(); m],
        }
    }

    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let m = self.main.len();
        if m == 0 {
            return Err(Error::InvalidInput("empty tridiagonal system".into()));
        }
        for len in [self.lower.len(), self.upper.len()] {
            if len != m - 1 {
                return Err(Error::LengthMismatch { left: len, right: m - 1 });
            }
        }
        if self.rhs.len() != m {
            return Err(Error::LengthMismatch { left: self.rhs.len(), right: m });
        }
        let finite = |v: &[T]| v.iter().all(|x| x.is_finite());
        if !(finite(&self.lower) && finite(&self.main) && finite(&self.upper) && finite(&self.rhs)) {
            return Err(Error::InvalidInput("non-finite entry in tridiagonal system".into()));
        }
        Ok(())
    }

    fn row_max(&self, i: usize) -> T {
        let mut r = self.main[i].abs();
        if i > 0 {
            r = r.max(self.lower[i - 1].abs());
        }
        if i + 1 < self.len() {
            r = r.max(self.upper[i].abs());
        }
        r
    }

    /// Thomas algorithm. Fails with [`Error::Singular`] when a pivot falls
    /// below `1e-14` times the largest entry of its original row.
    pub fn solve_thomas(&self) -> Result<Vec<T>> {
        self.validate()?;
        let m = self.len();
        let tol = T::lit(PIVOT_TOL);
        let mut c = vec![T::zero(); m];
        let mut d = vec![T::zero(); m];

        let mut pivot = self.main[0];
        if pivot.abs() <= tol * self.row_max(0) || pivot == T::zero() {
            return Err(Error::Singular { row: 0, pivot: pivot.as_f64() });
        }
        if m > 1 {
            c[0] = self.upper[0] / pivot;
        }
        d[0] = self.rhs[0] / pivot;
        for i in 1..m {
            pivot = self.main[i] - self.lower[i - 1] * c[i - 1];
            if pivot.abs() <= tol * self.row_max(i) || pivot == T::zero() {
                return Err(Error::Singular { row: i, pivot: pivot.as_f64() });
            }
            if i + 1 < m {
                c[i] = self.upper[i] / pivot;
            }
            d[i] = (self.rhs[i] - self.lower[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..m - 1).rev() {
            d[i] = d[i] - c[i] * d[i + 1];
        }
        Ok(d)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let m = self.len();
        let mut a = vec![vec![T::zero(); m]; m];
        for i in 0..m {
            a[i][i] = self.main[i];
            if i + 1 < m {
                a[i][i + 1] = self.upper[i];
                a[i + 1][i] = self.lower[i];
            }
        }
        a
    }

    /// Dense Gaussian elimination with partial pivoting.
    pub fn solve_dense_oracle(&self) -> Result<Vec<T>> {
        self.validate()?;
        let m = self.len();
        let mut a = self.to_dense();
        let mut b = self.rhs.clone();
        let scale = a
            .iter()
            .flat_map(|row| row.iter())
            .fold(T::zero(), |acc, v| acc.max(v.abs()));
        for k in 0..m {
            let p = (k..m)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[p][k].abs() <= T::epsilon() * scale {
                return Err(Error::Singular { row: k, pivot: a[p][k].as_f64() });
            }
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..m {
                let f = a[i][k] / a[k][k];
                if f == T::zero() {
                    continue;
                }
                let (top, rest) = a.split_at_mut(i);
                for (x, &y) in rest[0][k..].iter_mut().zip(&top[k][k..]) {
                    *x = *x - f * y;
                }
                b[i] = b[i] - f * b[k];
            }
        }
        let mut x = vec![T::zero(); m];
        for i in (0..m).rev() {
            let mut s = b[i];
            for j in i + 1..m {
                s = s - a[i][j] * x[j];
            }
            x[i] = s / a[i][i];
        }
        Ok(x)
    }

    /// `T x` for the stored matrix.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let m = self.len();
        (0..m)
            .map(|i| {
                let mut s = self.main[i] * x[i];
                if i > 0 {
                    s = s + self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < m {
                    s = s + self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}
