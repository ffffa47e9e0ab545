//! Extended cubic B-spline collocation for the generalized Burgers-Fisher
//! equation
//!
//! ```text
//! u_t + alpha u^q u_x - mu u_xx = eta u (1 - u^q),   x in [a, b]
//! ```
//!
//! Space is discretised by collocation at the knots of a uniform mesh using a
//! one-parameter family of C2 quartic blending functions (the extended cubic
//! B-spline, which reduces to the classical cubic B-spline at `lambda = 0`).
//! Time is advanced by a linearised Crank-Nicolson scheme that needs a single
//! tridiagonal solve per step.
//!
//! All numerical code is generic over the scalar type through [`Scalar`];
//! the `*64` aliases below fix it to `f64`, which is what the CLI uses.

pub mod analysis;
pub mod basis;
pub mod cli;
mod error;
pub mod fit;
pub mod mesh;
pub mod problems;
mod scalar;
pub mod stepper;
pub mod tridiag;

pub use analysis::{estimate_order, linf_error, scan_lambda, RunMeta, ScanResult, Snapshot, SolveReport};
pub use basis::{ExtendedCubicBasis, NodalWeights};
pub use error::{Error, Result};
pub use fit::{fit_initial, InitialData};
pub use mesh::{SplineField, UniformMesh};
pub use problems::{example1, example2, example3, wave_speed, ProblemId, ProblemSpec};
pub use scalar::Scalar;
pub use stepper::{assemble_row, integrate, linearization_terms, step, CrankNicolson, LinearizationTerms, StepParams};
pub use tridiag::TridiagonalSystem;

pub type Basis64 = ExtendedCubicBasis<f64>;
pub type Weights64 = NodalWeights<f64>;
pub type Mesh64 = UniformMesh<f64>;
pub type Field64 = SplineField<f64>;
pub type Tridiag64 = TridiagonalSystem<f64>;
pub type Params64 = StepParams<f64>;
pub type Problem64 = ProblemSpec<f64>;
pub type Report64 = SolveReport<f64>;
pub type Scan64 = ScanResult<f64>;

pub type Basis32 = ExtendedCubicBasis<f32>;
pub type Mesh32 = UniformMesh<f32>;
pub type Field32 = SplineField<f32>;
pub type Problem32 = ProblemSpec<f32>;
