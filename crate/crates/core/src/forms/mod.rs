//! Concrete Jacobi forms: theta series of even unimodular lattices and the
//! degree-one Eisenstein series, with truncation control, Fourier tables and
//! the slash operator.

mod eisenstein;
mod index;
mod lattice;
mod slash;
mod theta;

pub use eisenstein::{
    completion, coset_window, eisenstein_eval, eisenstein_eval_shifted, eisenstein_lift_eval, eisenstein_lift_eval_on, Coset,
    EisensteinSpec, EisensteinValue,
};
pub use index::{HalfIntegralIndex, TruncationPolicy};
pub use lattice::{lattice_points, ldl_upper, EvenUnimodularForm, ShortVectors};
pub use slash::{jacobi_invariance_check, slash_action, SlashType};
pub use theta::{theta_eval, theta_fourier, FourierCoeffTable, FourierKey, PolyGrowth, ThetaExpansion, ThetaForm, ThetaTerm, ThetaValue};
