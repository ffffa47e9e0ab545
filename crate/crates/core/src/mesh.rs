//! Uniform collocation mesh and the spline coefficient field on it.

use crate::basis::{ExtendedCubicBasis, NodalWeights};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMesh<T> {
    a: T,
    b: T,
    n_cells: usize,
    h: T,
}

impl<T: Scalar> UniformMesh<T> {
    pub fn new(a: T, b: T, n_cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(format!("mesh needs a < b, got [{a}, {b}]")));
        }
        if n_cells < 2 {
            return Err(Error::InvalidInput(format!("mesh needs at least 2 cells, got {n_cells}")));
        }
        let h = (b - a) / T::from_index(n_cells);
        Ok(Self { a, b, n_cells, h })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// Coordinate of knot `i`; `i` may run past `0..=N` for ghost knots.
    pub fn knot(&self, i: isize) -> T {
        if i == self.n_cells as isize {
            return self.b;
        }
        self.a + T::from_isize(i).expect("index") * self.h
    }

    pub fn knots(&self) -> Vec<T> {
        (0..=self.n_cells as isize).map(|i| self.knot(i)).collect()
    }
}

/// `U(x) = sum_{i=-1}^{N+1} d_i E_i(x)`.
///
/// Coefficients are stored with the two ghost entries `d_{-1}` and `d_{N+1}`;
/// `delta()[k]` holds `d_{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineField<T> {
    mesh: UniformMesh<T>,
    basis: ExtendedCubicBasis<T>,
    delta: Vec<T>,
}

impl<T: Scalar> SplineField<T> {
    pub fn new(mesh: UniformMesh<T>, lambda: T, delta: Vec<T>) -> Result<Self> {
        let basis = ExtendedCubicBasis::new(lambda, mesh.h())?;
        Self::with_basis(mesh, basis, delta)
    }

    pub(crate) fn with_basis(mesh: UniformMesh<T>, basis: ExtendedCubicBasis<T>, delta: Vec<T>) -> Result<Self> {
        if delta.len() != mesh.n_cells() + 3 {
            return Err(Error::LengthMismatch { left: delta.len(), right: mesh.n_cells() + 3 });
        }
        if let Some(k) = delta.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidInput(format!("coefficient d_{} is not finite", k as isize - 1)));
        }
        Ok(Self { mesh, basis, delta })
    }

    /// Field with every coefficient equal to `c`; reproduces the constant `c`.
    pub fn constant(mesh: UniformMesh<T>, lambda: T, c: T) -> Result<Self> {
        let n = mesh.n_cells() + 3;
        Self::new(mesh, lambda, vec![c; n])
    }

    pub fn mesh(&self) -> &UniformMesh<T> {
        &self.mesh
    }

    pub fn basis(&self) -> &ExtendedCubicBasis<T> {
        &self.basis
    }

    pub fn lambda(&self) -> T {
        self.basis.lambda()
    }

    pub fn weights(&self) -> NodalWeights<T> {
        self.basis.nodal_weights()
    }

    pub fn delta(&self) -> &[T] {
        &self.delta
    }

    pub fn into_delta(self) -> Vec<T> {
        self.delta
    }

    /// `d_i` for `i` in `-1..=N+1`.
    pub fn coef(&self, i: isize) -> T {
        self.delta[(i + 1) as usize]
    }

    fn check_knot(&self, i: usize) -> Result<()> {
        if i > self.mesh.n_cells() {
            return Err(Error::IndexOutOfRange { index: i as isize, max: self.mesh.n_cells() });
        }
        Ok(())
    }

    /// Coefficient triple `(d_{i-1}, d_i, d_{i+1})` around knot `i`.
    pub(crate) fn triple(&self, i: usize) -> (T, T, T) {
        (self.delta[i], self.delta[i + 1], self.delta[i + 2])
    }

    pub fn value_at_knot(&self, i: usize) -> Result<T> {
        self.check_knot(i)?;
        let w = self.weights();
        let (dm, d0, dp) = self.triple(i);
        Ok(w.a1 * dm + w.a2 * d0 + w.a1 * dp)
    }

    pub fn deriv_at_knot(&self, i: usize) -> Result<T> {
        self.check_knot(i)?;
        let w = self.weights();
        let (dm, _, dp) = self.triple(i);
        Ok(w.b1 * (dm - dp))
    }

    pub fn second_deriv_at_knot(&self, i: usize) -> Result<T> {
        self.check_knot(i)?;
        let w = self.weights();
        let (dm, d0, dp) = self.triple(i);
        Ok(w.g1 * (dm - (d0 + d0) + dp))
    }

    pub fn knot_values(&self) -> Vec<T> {
        let w = self.weights();
        (0..=self.mesh.n_cells())
            .map(|i| {
                let (dm, d0, dp) = self.triple(i);
                w.a1 * dm + w.a2 * d0 + w.a1 * dp
            })
            .collect()
    }

    /// `U(x)`, summing the (at most four) basis functions supported at `x`.
    pub fn eval(&self, x: T) -> Result<T> {
        let (a, b) = (self.mesh.a(), self.mesh.b());
        if !(x >= a && x <= b) {
            return Err(Error::OutOfDomain { x: x.as_f64(), a: a.as_f64(), b: b.as_f64() });
        }
        let n = self.mesh.n_cells();
        let cell = ((x - a) / self.mesh.h()).floor().to_usize().unwrap_or(0).min(n - 1);
        let mut acc = T::zero();
        for i in cell as isize - 1..=cell as isize + 2 {
            acc = acc + self.coef(i) * self.basis.eval(i, x, a)?;
        }
        Ok(acc)
    }

    pub fn eval_profile(&self, xs: &[T]) -> Result<Vec<T>> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}
