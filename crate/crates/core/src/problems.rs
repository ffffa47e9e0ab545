//! Benchmark problems on `[0, 1]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::analysis::SolveReport;
use crate::error::{Error, Result};
use crate::fit::{fit_initial, InitialData};
use crate::mesh::UniformMesh;
use crate::scalar::Scalar;
use crate::stepper::{integrate, StepParams};

pub type BoundaryFn<T> = Arc<dyn Fn(T) -> (T, T) + Send + Sync>;
pub type ExactFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// Travelling tanh wave with a closed-form solution.
    Example1,
    /// Gaussian pulse `exp(-40 x^2)`, no exact solution.
    Example2,
    /// `x (1 - x^2)` with homogeneous Dirichlet data, no exact solution.
    Example3,
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemId::Example1 => "example1",
            ProblemId::Example2 => "example2",
            ProblemId::Example3 => "example3",
        })
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "example1" | "1" => Ok(ProblemId::Example1),
            "example2" | "2" => Ok(ProblemId::Example2),
            "example3" | "3" => Ok(ProblemId::Example3),
            other => Err(Error::Config(format!("unknown problem '{other}'"))),
        }
    }
}

#[derive(Clone)]
pub struct ProblemSpec<T> {
    pub id: ProblemId,
    pub alpha: T,
    pub mu: T,
    pub eta: T,
    pub q: u32,
    pub a: T,
    pub b: T,
    pub initial: InitialData<T>,
    pub bc: BoundaryFn<T>,
    pub exact: Option<ExactFn<T>>,
    /// Closures and parameter choices that are not part of the problem
    /// statement itself; copied into run metadata.
    pub assumptions: Vec<String>,
}

impl<T> fmt::Debug for ProblemSpec<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("alpha", &self.alpha)
            .field("mu", &self.mu)
            .field("eta", &self.eta)
            .field("q", &self.q)
            .field("domain", &(&self.a, &self.b))
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl<T: Scalar> ProblemSpec<T> {
    pub fn step_params(&self, dt: T) -> Result<StepParams<T>> {
        StepParams::new(self.alpha, self.mu, self.eta, self.q, dt)
    }

    pub fn mesh(&self, n_cells: usize) -> Result<UniformMesh<T>> {
        UniformMesh::new(self.a, self.b, n_cells)
    }

    /// Fit the initial profile and integrate to `t_end`.
    pub fn solve(&self, n_cells: usize, lambda: T, dt: T, t_end: T, report_times: &[T]) -> Result<SolveReport<T>> {
        let mesh = self.mesh(n_cells)?;
        let field = fit_initial(&mesh, lambda, &self.initial)?;
        let params = self.step_params(dt)?;
        let bc = self.bc.clone();
        let bcs = move |t: T| bc(t);
        let exact = self.exact.clone();
        let exact_fn = exact.as_ref().map(|e| {
            let e = e.clone();
            move |x: T, t: T| e(x, t)
        });
        let exact_ref: Option<&dyn Fn(T, T) -> T> = exact_fn.as_ref().map(|f| f as &dyn Fn(T, T) -> T);
        let mut report = integrate(&field, &params, &bcs, exact_ref, t_end, report_times)?;
        report.meta.problem = self.id.to_string();
        report.meta.assumptions = self.assumptions.clone();
        Ok(report)
    }
}

/// Speed `alpha/(q+1) + eta (q+1)/alpha` of the travelling-wave solution.
pub fn wave_speed<T: Scalar>(alpha: T, eta: T, q: u32) -> Result<T> {
    if alpha == T::zero() {
        return Err(Error::InvalidInput("wave speed needs alpha != 0".into()));
    }
    if q < 1 {
        return Err(Error::InvalidInput("exponent q must be a positive integer".into()));
    }
    let q1 = T::from_u32(q + 1).expect("q");
    Ok(alpha / q1 + eta * q1 / alpha)
}

/// Travelling wave
/// `u(x, t) = (1/2 + 1/2 tanh(k (x - c t)))^(1/q)`, `k = -alpha q / (2 (q+1))`,
/// which solves the equation with `mu = 1`.
pub fn example1<T: Scalar>(alpha: T, eta: T, q: u32) -> Result<ProblemSpec<T>> {
    let c = wave_speed(alpha, eta, q)?;
    let qf = T::from_u32(q).expect("q");
    let half = T::lit(0.5);
    let k = -alpha * qf / (T::lit(2.0) * (qf + T::one()));
    let inv_q = T::one() / qf;

    let u = move |x: T, t: T| (half + half * (k * (x - c * t)).tanh()).powf(inv_q);
    let du = move |x: T, t: T| {
        let th = (k * (x - c * t)).tanh();
        let s = half + half * th;
        inv_q * s.powf(inv_q - T::one()) * half * k * (T::one() - th * th)
    };
    let (a, b) = (T::zero(), T::one());
    Ok(ProblemSpec {
        id: ProblemId::Example1,
        alpha,
        mu: T::one(),
        eta,
        q,
        a,
        b,
        initial: InitialData::new(move |x| u(x, T::zero()), move |x| du(x, T::zero())),
        bc: Arc::new(move |t| (u(a, t), u(b, t))),
        exact: Some(Arc::new(u)),
        assumptions: vec!["mu = 1 (the travelling-wave solution requires it)".into()],
    })
}

/// Gaussian pulse with Dirichlet data frozen at the initial end values.
pub fn example2<T: Scalar>(alpha: T, eta: T, mu: T) -> ProblemSpec<T> {
    let forty = T::lit(40.0);
    let u0 = move |x: T| (-forty * x * x).exp();
    let left = u0(T::zero());
    let right = u0(T::one());
    ProblemSpec {
        id: ProblemId::Example2,
        alpha,
        mu,
        eta,
        q: 1,
        a: T::zero(),
        b: T::one(),
        initial: InitialData::new(u0, move |x: T| -T::lit(80.0) * x * (-forty * x * x).exp()),
        bc: Arc::new(move |_| (left, right)),
        exact: None,
        assumptions: vec!["boundary values held at u0(0) = 1 and u0(1) = exp(-40)".into()],
    }
}

/// `u0 = x (1 - x^2)`, `u(0,t) = u(1,t) = 0`, with `alpha = 1`, `eta = 0`,
/// `q = 1`.
pub fn example3<T: Scalar>(mu: T) -> ProblemSpec<T> {
    ProblemSpec {
        id: ProblemId::Example3,
        alpha: T::one(),
        mu,
        eta: T::zero(),
        q: 1,
        a: T::zero(),
        b: T::one(),
        initial: InitialData::new(|x: T| x * (T::one() - x * x), |x: T| T::one() - T::lit(3.0) * x * x),
        bc: Arc::new(|_| (T::zero(), T::zero())),
        exact: None,
        assumptions: Vec::new(),
    }
}
