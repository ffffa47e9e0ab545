//! Linearised Crank-Nicolson collocation step.
//!
//! Time averaging the equation between levels `n` and `n + 1` and replacing
//! the level-`(n+1)` nonlinear products by their first-order expansions
//! about level `n`,
//!
//! ```text
//! (U^q U_x)^{n+1} ~ L1^q U_x^{n+1} + q L1^{q-1} L2 U^{n+1} - q L1^q L2
//! (U^{q+1})^{n+1} ~ (1+q) L1^q U^{n+1} - q L1^{q+1}
//! ```
//!
//! (`L1`, `L2` the nodal value and slope at level `n`), gives one linear
//! three-term equation per knot. The two ghost coefficients at level `n + 1`
//! are removed with the Dirichlet data, after which the system is
//! tridiagonal.

use crate::analysis::{RunMeta, Snapshot, SolveReport};
use crate::basis::NodalWeights;
use crate::error::{Error, Result};
use crate::mesh::SplineField;
use crate::scalar::{powi, Scalar};
use crate::tridiag::TridiagonalSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams<T> {
    pub alpha: T,
    pub mu: T,
    pub eta: T,
    pub q: u32,
    pub dt: T,
}

impl<T: Scalar> StepParams<T> {
    pub fn new(alpha: T, mu: T, eta: T, q: u32, dt: T) -> Result<Self> {
        let p = Self { alpha, mu, eta, q, dt };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.mu.is_finite() && self.eta.is_finite()) {
            return Err(Error::InvalidInput("alpha, mu and eta must be finite".into()));
        }
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::InvalidInput(format!("time step must be positive, got {}", self.dt)));
        }
        if self.q < 1 {
            return Err(Error::InvalidInput("exponent q must be a positive integer".into()));
        }
        Ok(())
    }
}

/// Level-`n` nodal value (`l1`) and slope (`l2`) used by the linearisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationTerms<T> {
    pub l1: T,
    pub l2: T,
}

pub fn linearization_terms<T: Scalar>(field: &SplineField<T>, i: usize) -> Result<LinearizationTerms<T>> {
    Ok(LinearizationTerms { l1: field.value_at_knot(i)?, l2: field.deriv_at_knot(i)? })
}

/// Coefficients of `(d_{i-1}, d_i, d_{i+1})` at level `n + 1` (left) and
/// level `n` (right) for one collocation row.
pub fn assemble_row<T: Scalar>(
    params: &StepParams<T>,
    w: &NodalWeights<T>,
    terms: &LinearizationTerms<T>,
) -> Result<([T; 3], [T; 3])> {
    let half = params.dt / T::lit(2.0);
    let q = T::from_u32(params.q).expect("q");
    let one = T::one();
    let l1q = powi(terms.l1, params.q);
    let l1qm1 = powi(terms.l1, params.q - 1);

    let adv = params.alpha * half;
    let diff = params.mu * half;
    let reac = params.eta * half;

    let a = one + adv * q * l1qm1 * terms.l2 - reac + reac * (one + q) * l1q;
    let b = one + reac - reac * (one - q) * l1q;
    let adv_new = adv * l1q * w.b1;
    let adv_old = adv * (one - q) * l1q * w.b1;

    let left = [
        a * w.a1 + adv_new - diff * w.g1,
        a * w.a2 - diff * w.g2,
        a * w.a1 - adv_new - diff * w.g1,
    ];
    let right = [
        b * w.a1 - adv_old + diff * w.g1,
        b * w.a2 + diff * w.g2,
        b * w.a1 + adv_old + diff * w.g1,
    ];
    if left.iter().chain(right.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NumericOverflow { node: 0 });
    }
    Ok((left, right))
}

/// Owns the per-step workspace for repeated steps on one mesh.
#[derive(Debug, Clone)]
pub struct CrankNicolson<T> {
    params: StepParams<T>,
    sys: TridiagonalSystem<T>,
}

impl<T: Scalar> CrankNicolson<T> {
    pub fn new(params: StepParams<T>, n_cells: usize) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, sys: TridiagonalSystem::zeros(n_cells + 1) })
    }

    pub fn params(&self) -> &StepParams<T> {
        &self.params
    }

    /// Advances `field` by one time step. `bc_left`/`bc_right` are the
    /// Dirichlet values at the new time level.
    pub fn step(&mut self, field: &SplineField<T>, bc_left: T, bc_right: T) -> Result<SplineField<T>> {
        let n = field.mesh().n_cells();
        if self.sys.len() != n + 1 {
            self.sys = TridiagonalSystem::zeros(n + 1);
        }
        let w = field.weights();
        if w.a1 == T::zero() {
            return Err(Error::DegenerateBoundary { lambda: field.lambda().as_f64() });
        }

        let mut ends = [([T::zero(); 3], [T::zero(); 3]); 2];
        for i in 0..=n {
            let (dm, d0, dp) = field.triple(i);
            let terms = LinearizationTerms { l1: w.a1 * dm + w.a2 * d0 + w.a1 * dp, l2: w.b1 * (dm - dp) };
            let (left, right) =
                assemble_row(&self.params, &w, &terms).map_err(|_| Error::NumericOverflow { node: i })?;
            self.sys.rhs[i] = right[0] * dm + right[1] * d0 + right[2] * dp;
            self.sys.main[i] = left[1];
            if i > 0 {
                self.sys.lower[i - 1] = left[0];
            }
            if i < n {
                self.sys.upper[i] = left[2];
            }
            if i == 0 {
                ends[0] = (left, right);
            } else if i == n {
                ends[1] = (left, right);
            }
        }

        // d_{-1} = (U_0 - a2 d_0 - a1 d_1)/a1
        let ([cm, c0, cp], right) = ends[0];
        let (main, off) = (c0 - cm * w.a2 / w.a1, cp - cm);
        if degenerate(main, off, &[cm, c0, cp]) {
            // Row has collapsed onto the Dirichlet condition. Carry the
            // ghost difference d_{-1} - d_1 forward with the same growth
            // factor the row applies to the nodal value instead.
            let (dm, _, dp) = field.triple(0);
            let growth = right[1] / c0;
            self.sys.main[0] = w.a2 / w.a1;
            self.sys.upper[0] = T::lit(2.0);
            self.sys.rhs[0] = bc_left / w.a1 - growth * (dm - dp);
        } else {
            self.sys.main[0] = main;
            self.sys.upper[0] = off;
            self.sys.rhs[0] = self.sys.rhs[0] - cm * bc_left / w.a1;
        }
        // d_{N+1} = (U_N - a1 d_{N-1} - a2 d_N)/a1
        let ([cm, c0, cp], right) = ends[1];
        let (main, off) = (c0 - cp * w.a2 / w.a1, cm - cp);
        if degenerate(main, off, &[cm, c0, cp]) {
            let (dm, _, dp) = field.triple(n);
            let growth = right[1] / c0;
            self.sys.main[n] = w.a2 / w.a1;
            self.sys.lower[n - 1] = T::lit(2.0);
            self.sys.rhs[n] = bc_right / w.a1 - growth * (dp - dm);
        } else {
            self.sys.main[n] = main;
            self.sys.lower[n - 1] = off;
            self.sys.rhs[n] = self.sys.rhs[n] - cp * bc_right / w.a1;
        }

        let inner = self.sys.solve_thomas()?;
        let mut delta = Vec::with_capacity(n + 3);
        delta.push((bc_left - w.a2 * inner[0] - w.a1 * inner[1]) / w.a1);
        delta.extend_from_slice(&inner);
        delta.push((bc_right - w.a1 * inner[n - 1] - w.a2 * inner[n]) / w.a1);
        if let Some(k) = delta.iter().position(|d| !d.is_finite()) {
            return Err(Error::NumericOverflow { node: k.saturating_sub(1).min(n) });
        }
        SplineField::with_basis(*field.mesh(), *field.basis(), delta)
    }
}

/// True when a boundary row, after ghost elimination, no longer constrains
/// the interior coefficients. This happens when neither advection nor
/// diffusion acts at the end knot.
fn degenerate<T: Scalar>(main: T, off: T, row: &[T; 3]) -> bool {
    let scale = row.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    main.abs().max(off.abs()) <= T::lit(1e-10) * scale
}

/// One Crank-Nicolson step with a throwaway workspace.
pub fn step<T: Scalar>(field: &SplineField<T>, params: &StepParams<T>, bc_left: T, bc_right: T) -> Result<SplineField<T>> {
    CrankNicolson::new(*params, field.mesh().n_cells())?.step(field, bc_left, bc_right)
}

/// Number of steps to reach `t`, if `t` lies on the `dt` grid.
fn steps_to(t: f64, dt: f64) -> Option<usize> {
    if t.is_nan() || t < 0.0 {
        return None;
    }
    let k = (t / dt).round();
    if (t - k * dt).abs() <= 1e-9 * t.max(dt) {
        Some(k as usize)
    } else {
        None
    }
}

/// Steps from `t = 0` to `t_end`, snapshotting at every report time.
///
/// `bcs(t)` gives the Dirichlet pair at time `t`; if `exact` is supplied the
/// knot-wise max error is recorded with each snapshot.
pub fn integrate<T: Scalar>(
    field: &SplineField<T>,
    params: &StepParams<T>,
    bcs: &dyn Fn(T) -> (T, T),
    exact: Option<&dyn Fn(T, T) -> T>,
    t_end: T,
    report_times: &[T],
) -> Result<SolveReport<T>> {
    params.validate()?;
    let dt = params.dt.as_f64();
    if t_end.is_nan() || t_end <= T::zero() {
        return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
    }
    let n_steps =
        steps_to(t_end.as_f64(), dt).ok_or_else(|| Error::Config(format!("t_end = {t_end} is not a multiple of dt = {dt}")))?;
    let mut targets = Vec::with_capacity(report_times.len());
    for (k, &t) in report_times.iter().enumerate() {
        let s = steps_to(t.as_f64(), dt)
            .ok_or_else(|| Error::Config(format!("report time {t} is not on the time grid (dt = {dt})")))?;
        if s > n_steps {
            return Err(Error::Config(format!("report time {t} is beyond t_end = {t_end}")));
        }
        if k > 0 && s <= targets[k - 1] {
            return Err(Error::Config("report times must be strictly increasing".into()));
        }
        targets.push(s);
    }

    let mesh = *field.mesh();
    let knots = mesh.knots();
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut errors = exact.map(|_| Vec::with_capacity(targets.len()));
    let mut record = |f: &SplineField<T>, s: usize| {
        let t = params.dt * T::from_index(s);
        let values = f.knot_values();
        if let (Some(u), Some(errs)) = (exact, errors.as_mut()) {
            let ex: Vec<T> = knots.iter().map(|&x| u(x, t)).collect();
            let e = values.iter().zip(&ex).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
            errs.push((t, e));
        }
        snapshots.push(Snapshot { t, knot_values: values, delta: f.delta().to_vec() });
    };

    let mut stepper = CrankNicolson::new(*params, mesh.n_cells())?;
    let mut current = field.clone();
    let mut next_target = 0;
    while next_target < targets.len() && targets[next_target] == 0 {
        record(&current, 0);
        next_target += 1;
    }
    for s in 1..=n_steps {
        let t = params.dt * T::from_index(s);
        let (l, r) = bcs(t);
        current = stepper.step(&current, l, r)?;
        if next_target < targets.len() && targets[next_target] == s {
            record(&current, s);
            next_target += 1;
        }
    }

    Ok(SolveReport {
        snapshots,
        errors,
        meta: RunMeta {
            problem: "custom".into(),
            alpha: params.alpha.as_f64(),
            mu: params.mu.as_f64(),
            eta: params.eta.as_f64(),
            q: params.q,
            n_cells: mesh.n_cells(),
            dt,
            lambda: field.lambda().as_f64(),
            t_end: t_end.as_f64(),
            assumptions: Vec::new(),
        },
    })
}
