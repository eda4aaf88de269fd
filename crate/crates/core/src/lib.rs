//! Vector-valued modular forms from Jacobi forms.
//!
//! The crate is organised bottom-up:
//!
//! - [`matgroup`]: exact symplectic, Heisenberg, Jacobi and parabolic group
//!   elements, their actions on Siegel space, cocycle and summand checks.
//! - [`polyharm`]: sparse polynomials on `C^{(m,n)}`, the operators
//!   `Δ_{i,j}`, pluriharmonic bases and the `GL(n)` action.
//! - [`forms`]: theta series of even unimodular lattices, degree-one
//!   Eisenstein series, the slash operator and invariance checks.
//! - [`lift`]: the lift `f ↦ f_P = P(∂_W) f |_{W=0}` and numerical
//!   certification of its modular transformation law.
//! - [`cli`]: the command-line front end, with [`sampling`] supplying
//!   seeded random inputs for property runs.

pub mod cli;
pub mod error;
pub mod forms;
pub mod json;
pub mod lift;
pub mod matgroup;
pub mod matrix;
pub mod polyharm;
pub mod report;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use matrix::{MatC, MatG, MatQ, Matrix};
pub use scalar::{GaussRational, Rat, Scalar};
