//! Initial coefficients from the initial profile.
//!
//! The `N + 3` coefficients are fixed by interpolating `u0` at the `N + 1`
//! knots plus matching `u0'` at both ends. The two end conditions eliminate
//! the ghost coefficients, leaving an `(N + 1)` tridiagonal system.

use std::fmt;
use std::sync::Arc;

use crate::basis::ExtendedCubicBasis;
use crate::error::Result;
use crate::mesh::{SplineField, UniformMesh};
use crate::scalar::Scalar;
use crate::tridiag::TridiagonalSystem;

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub struct InitialData<T> {
    pub u0: ScalarFn<T>,
    /// Spatial derivative of `u0`; only sampled at the end points. When
    /// absent a one-sided fourth-order difference with step `h/100` is used.
    pub du0: Option<ScalarFn<T>>,
}

impl<T> fmt::Debug for InitialData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialData").field("du0", &self.du0.is_some()).finish_non_exhaustive()
    }
}

impl<T: Scalar> InitialData<T> {
    pub fn new(u0: impl Fn(T) -> T + Send + Sync + 'static, du0: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { u0: Arc::new(u0), du0: Some(Arc::new(du0)) }
    }

    pub fn without_derivative(u0: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { u0: Arc::new(u0), du0: None }
    }

    /// `u0'(x)`; `dir` is +1 for a forward stencil and -1 for a backward one.
    fn derivative(&self, x: T, dir: T, k: T) -> T {
        if let Some(d) = &self.du0 {
            return d(x);
        }
        let c = T::lit;
        let f = |j: f64| (self.u0)(x + dir * c(j) * k);
        dir * (c(-25.0) * f(0.0) + c(48.0) * f(1.0) - c(36.0) * f(2.0) + c(16.0) * f(3.0) - c(3.0) * f(4.0))
            / (c(12.0) * k)
    }
}

pub fn fit_initial<T: Scalar>(mesh: &UniformMesh<T>, lambda: T, data: &InitialData<T>) -> Result<SplineField<T>> {
    let basis = ExtendedCubicBasis::new(lambda, mesh.h())?;
    let w = basis.nodal_weights();
    let n = mesh.n_cells();
    let k = mesh.h() / T::lit(100.0);
    let d_left = data.derivative(mesh.a(), T::one(), k);
    let d_right = data.derivative(mesh.b(), -T::one(), k);

    // Ghosts: d_{-1} = d_1 + u0'(a)/b1 and d_{N+1} = d_{N-1} - u0'(b)/b1.
    let ghost_left = d_left / w.b1;
    let ghost_right = -d_right / w.b1;

    let mut sys = TridiagonalSystem::zeros(n + 1);
    for i in 0..=n {
        sys.main[i] = w.a2;
        sys.rhs[i] = (data.u0)(mesh.knot(i as isize));
        if i > 0 {
            sys.lower[i - 1] = w.a1;
        }
        if i < n {
            sys.upper[i] = w.a1;
        }
    }
    sys.upper[0] = w.a1 + w.a1;
    sys.rhs[0] = sys.rhs[0] - w.a1 * ghost_left;
    sys.lower[n - 1] = w.a1 + w.a1;
    sys.rhs[n] = sys.rhs[n] - w.a1 * ghost_right;

    let inner = sys.solve_thomas()?;
    let mut delta = Vec::with_capacity(n + 3);
    delta.push(inner[1] + ghost_left);
    delta.extend_from_slice(&inner);
    delta.push(inner[n - 1] + ghost_right);
    SplineField::with_basis(*mesh, basis, delta)
}
