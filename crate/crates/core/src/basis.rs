//! Extended cubic B-spline blending functions.
//!
//! `E_i` is supported on `[x_{i-2}, x_{i+2}]` and is a quartic on each of the
//! four cells. Writing `r = (x - x_k) / h` relative to the left knot of the
//! first cell, the knot `x_{i-1}`, the knot `x_{i+1}` and the right knot
//! `x_{i+2}` respectively, the branches of `24 E_i` are
//!
//! ```text
//! [x_{i-2}, x_{i-1}]   4(1-l) r^3 + 3l r^4
//! [x_{i-1}, x_i    ]   (4-l) + 12 r + 6(2+l) r^2 - 12 r^3 - 3l r^4
//! [x_i,     x_{i+1}]   (4-l) - 12 r + 6(2+l) r^2 + 12 r^3 - 3l r^4
//! [x_{i+1}, x_{i+2}]   4(l-1) r^3 + 3l r^4
//! ```
//!
//! with `l` the shape parameter. At `l = 0` this is the classical cubic
//! B-spline.
//!
//! Derivative sign convention: `E_i'(x_{i-1}) = +1/(2h)` and
//! `E_i'(x_{i+1}) = -1/(2h)`, which is what direct differentiation gives and
//! what the nodal relation `U'_i = -(d_{i-1} - d_{i+1}) / (2h)` relies on.
//! Some tabulations print the opposite signs for the first-derivative row.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedCubicBasis<T> {
    lambda: T,
    h: T,
}

/// Closed-form knot values of the basis and its first two derivatives.
///
/// For a coefficient triple `(d_{i-1}, d_i, d_{i+1})`:
/// `U_i = a1 d_{i-1} + a2 d_i + a1 d_{i+1}`,
/// `U'_i = b1 d_{i-1} - b1 d_{i+1}`,
/// `U''_i = g1 d_{i-1} + g2 d_i + g1 d_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalWeights<T> {
    pub a1: T,
    pub a2: T,
    pub b1: T,
    pub g1: T,
    pub g2: T,
}

/// Which quartic piece a point falls in, with its local coordinate `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece<T> {
    Outside,
    First(T),
    Second(T),
    Third(T),
    Fourth(T),
}

impl<T: Scalar> ExtendedCubicBasis<T> {
    pub fn new(lambda: T, h: T) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
        }
        if !(h.is_finite() && h > T::zero()) {
            return Err(Error::InvalidInput(format!("mesh spacing must be positive, got {h}")));
        }
        Ok(Self { lambda, h })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn h(&self) -> T {
        self.h
    }

    // Cells are half-open [x_k, x_{k+1}); the last support cell is closed.
    fn piece(&self, center: isize, x: T, knot0: T) -> Result<Piece<T>> {
        if !x.is_finite() || !knot0.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite abscissa {x}")));
        }
        let s = (x - knot0) / self.h - T::from_isize(center).expect("index");
        let two = T::lit(2.0);
        let one = T::one();
        let p = if s < -two || s > two {
            Piece::Outside
        } else if s < -one {
            Piece::First(s + two)
        } else if s < T::zero() {
            Piece::Second(s + one)
        } else if s < one {
            Piece::Third(s - one)
        } else {
            Piece::Fourth(s - two)
        };
        Ok(p)
    }

    /// `E_i(x)` where `i = center` and `knot0` is the coordinate of knot 0.
    pub fn eval(&self, center: isize, x: T, knot0: T) -> Result<T> {
        let l = self.lambda;
        let c = T::lit;
        let v = match self.piece(center, x, knot0)? {
            Piece::Outside => return Ok(T::zero()),
            Piece::First(r) => r * r * r * (c(4.0) * (T::one() - l) + c(3.0) * l * r),
            Piece::Second(r) => {
                (c(4.0) - l) + r * (c(12.0) + r * (c(6.0) * (c(2.0) + l) + r * (c(-12.0) - c(3.0) * l * r)))
            }
            Piece::Third(r) => {
                (c(4.0) - l) + r * (c(-12.0) + r * (c(6.0) * (c(2.0) + l) + r * (c(12.0) - c(3.0) * l * r)))
            }
            Piece::Fourth(r) => r * r * r * (c(4.0) * (l - T::one()) + c(3.0) * l * r),
        };
        Ok(v / c(24.0))
    }

    /// `dE_i/dx`.
    pub fn eval_d1(&self, center: isize, x: T, knot0: T) -> Result<T> {
        let l = self.lambda;
        let c = T::lit;
        let v = match self.piece(center, x, knot0)? {
            Piece::Outside => return Ok(T::zero()),
            Piece::First(r) => r * r * (c(12.0) * (T::one() - l) + c(12.0) * l * r),
            Piece::Second(r) => c(12.0) + r * (c(12.0) * (c(2.0) + l) + r * (c(-36.0) - c(12.0) * l * r)),
            Piece::Third(r) => c(-12.0) + r * (c(12.0) * (c(2.0) + l) + r * (c(36.0) - c(12.0) * l * r)),
            Piece::Fourth(r) => r * r * (c(12.0) * (l - T::one()) + c(12.0) * l * r),
        };
        Ok(v / (c(24.0) * self.h))
    }

    /// `d2E_i/dx2`.
    pub fn eval_d2(&self, center: isize, x: T, knot0: T) -> Result<T> {
        let l = self.lambda;
        let c = T::lit;
        let v = match self.piece(center, x, knot0)? {
            Piece::Outside => return Ok(T::zero()),
            Piece::First(r) => r * (c(24.0) * (T::one() - l) + c(36.0) * l * r),
            Piece::Second(r) => c(12.0) * (c(2.0) + l) + r * (c(-72.0) - c(36.0) * l * r),
            Piece::Third(r) => c(12.0) * (c(2.0) + l) + r * (c(72.0) - c(36.0) * l * r),
            Piece::Fourth(r) => r * (c(24.0) * (l - T::one()) + c(36.0) * l * r),
        };
        Ok(v / (c(24.0) * self.h * self.h))
    }

    pub fn nodal_weights(&self) -> NodalWeights<T> {
        let l = self.lambda;
        let h = self.h;
        let c = T::lit;
        NodalWeights {
            a1: (c(4.0) - l) / c(24.0),
            a2: (c(8.0) + l) / c(12.0),
            b1: -T::one() / (c(2.0) * h),
            g1: (c(2.0) + l) / (c(2.0) * h * h),
            g2: -(c(4.0) + c(2.0) * l) / (c(2.0) * h * h),
        }
    }
}
