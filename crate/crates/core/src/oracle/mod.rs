//! Independent reference implementations used to cross-check the block
//! formulas: a dense density-matrix simulator, a Hermitian eigensolver and an
//! adaptive integrator for the time-local master equation.

pub mod dense;
pub mod jacobi;
pub mod ode;
pub mod verify;

pub use dense::{cfi_dense, prepare_rho3_dense, qfi_dense, run_pipeline, DenseState, GateSpec};
pub use jacobi::{hermitian_eigen, Eigen};
pub use ode::{integrate_time_local, OdeTolerance};
pub use verify::{verify, VerifyConfig, VerifyReport};
