//! Polynomials on `C^{(m,n)}`, the operators `Δ_{i,j}` attached to a
//! positive definite `S`, pluriharmonic bases and the `GL(n) × O(S)` action.
//!
//! Coefficients stay exact (Gaussian rationals) throughout; approximate
//! polynomials appear only where complex matrices are substituted.

mod action;
mod harmonic;
mod lemma43;
mod poly;

pub use action::{express_in_basis, gl_action, gl_action_two_sided, tau_matrix};
pub use harmonic::{is_harmonic, is_pluriharmonic, laplacian_ij, pluriharmonic_basis, PluriharmonicBasis, QuadFormS};
pub use lemma43::{exponent_poly, lemma43_residual};
pub use poly::{apply_diff_op, bilinear_form, ApproxPoly, ExactPoly, Monomial, SparsePoly};
