//! Error norms, observed orders and the shape-parameter scan.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::ProblemSpec;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub knot_values: Vec<T>,
    /// Coefficients `d_{-1}..d_{N+1}`.
    pub delta: Vec<T>,
}

/// Parameter record for one run, kept as `f64` for output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub problem: String,
    pub alpha: f64,
    pub mu: f64,
    pub eta: f64,
    pub q: u32,
    pub n_cells: usize,
    pub dt: f64,
    pub lambda: f64,
    pub t_end: f64,
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    /// Sorted by time.
    pub snapshots: Vec<Snapshot<T>>,
    /// `(t, L_inf)` per snapshot; present iff an exact solution was given.
    pub errors: Option<Vec<(T, T)>>,
    pub meta: RunMeta,
}

impl<T: Scalar> SolveReport<T> {
    pub fn final_error(&self) -> Option<T> {
        self.errors.as_ref().and_then(|e| e.last()).map(|&(_, e)| e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult<T> {
    pub best_lambda: T,
    pub best_error: T,
    /// `(lambda, L_inf)` in grid order; `None` marks a failed run.
    pub trace: Vec<(T, Option<T>)>,
}

/// `max_j |numeric_j - exact_j|`.
pub fn linf_error<T: Scalar>(numeric: &[T], exact: &[T]) -> Result<T> {
    if numeric.len() != exact.len() {
        return Err(Error::LengthMismatch { left: numeric.len(), right: exact.len() });
    }
    Ok(numeric.iter().zip(exact).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs())))
}

/// `log2(E(h) / E(h/2))` for each adjacent pair of `(h, error)` entries;
/// `None` where either error is zero.
pub fn estimate_order<T: Scalar>(errors_by_h: &[(T, T)]) -> Result<Vec<Option<T>>> {
    if errors_by_h.len() < 2 {
        return Err(Error::InvalidInput("need at least two (h, error) pairs".into()));
    }
    let two = T::lit(2.0);
    errors_by_h
        .windows(2)
        .map(|w| {
            let ((h0, e0), (h1, e1)) = (w[0], w[1]);
            if ((h0 / h1) - two).abs() > T::lit(1e-9) * two {
                return Err(Error::InvalidInput(format!("h must halve between entries: {h0} -> {h1}")));
            }
            if e0 == T::zero() || e1 == T::zero() {
                return Ok(None);
            }
            Ok(Some((e0 / e1).log2()))
        })
        .collect()
}

/// Inclusive grid `lo, lo + step, ...` up to `hi`.
pub fn lambda_grid<T: Scalar>(lo: T, hi: T, step: T) -> Result<Vec<T>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Config(format!("scan interval [{lo}, {hi}] is empty")));
    }
    if !(step.is_finite() && step > T::zero()) {
        return Err(Error::Config(format!("scan step must be positive, got {step}")));
    }
    let count = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
    // on the lattice k/m (m = 1/step an integer) divide instead of
    // multiply so -3e-6 comes out as -3e-6
    let k0 = (lo / step).round();
    let m = step.recip().round();
    let exact = ((lo / step) - k0).abs() <= T::lit(1e-9) && m >= T::one() && (step * m - T::one()).abs() <= T::lit(1e-12);
    Ok((0..count)
        .map(|k| {
            let v = if exact { (k0 + T::from_index(k)) / m } else { lo + T::from_index(k) * step };
            // snap values that should be exactly zero
            if v.abs() <= T::lit(1e-9) * step {
                T::zero()
            } else {
                v
            }
        })
        .collect())
}

/// Exhaustive grid search over `lambda` for the smallest max error at
/// `t_end`. Runs are independent and execute in parallel; ties go to the
/// smallest `|lambda|`.
pub fn scan_lambda<T: Scalar>(
    problem: &ProblemSpec<T>,
    n_cells: usize,
    dt: T,
    t_end: T,
    lambda_lo: T,
    lambda_hi: T,
    lambda_step: T,
) -> Result<ScanResult<T>> {
    if problem.exact.is_none() {
        return Err(Error::Config(format!("{} has no exact solution to scan against", problem.id)));
    }
    let grid = lambda_grid(lambda_lo, lambda_hi, lambda_step)?;
    let trace: Vec<(T, Option<T>)> = grid
        .par_iter()
        .map(|&l| {
            let e = problem
                .solve(n_cells, l, dt, t_end, &[t_end])
                .ok()
                .and_then(|r| r.final_error())
                .filter(|e| e.is_finite());
            (l, e)
        })
        .collect();

    let mut best: Option<(T, T)> = None;
    for &(l, e) in &trace {
        let Some(e) = e else { continue };
        best = match best {
            Some((bl, be)) if e > be || (e == be && l.abs() >= bl.abs()) => Some((bl, be)),
            _ => Some((l, e)),
        };
    }
    let (best_lambda, best_error) = best.ok_or(Error::ScanFailed { runs: trace.len() })?;
    Ok(ScanResult { best_lambda, best_error, trace })
}
