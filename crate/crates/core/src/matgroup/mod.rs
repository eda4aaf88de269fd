//! Exact group elements (symplectic, Heisenberg, Jacobi, parabolic), their
//! actions on `H_n` and `H_n × C^{(m,n)}`, and cocycle verification.

mod jacobi;
mod parabolic;
mod psd;
mod siegel;
mod symplectic;

use num_complex::Complex64;

pub use jacobi::{det_j, HeisenbergElement, JacobiElement};
pub use parabolic::{auxiliary_t, embed_parabolic, factor_decomposition, FactorDecomposition, ParabolicElement};
pub use psd::{pd_check_exact, psd_check_exact};
pub use siegel::{mobius, JacobiDomainPoint, SiegelPoint};
pub use symplectic::{j_factor_scalar, j_form, siegel_action, siegel_action_exact, symplectic_check, SymplecticElement};

use crate::error::{Error, Result};
use crate::matrix::{MatC, MatQ};

/// A group acting on the left on `Point`.
pub trait GroupAction: Sized {
    type Point;

    fn compose(&self, other: &Self) -> Result<Self>;
    fn act(&self, p: &Self::Point) -> Result<Self::Point>;
}

impl GroupAction for SymplecticElement {
    type Point = SiegelPoint;

    fn compose(&self, other: &Self) -> Result<Self> {
        SymplecticElement::compose(self, other)
    }
    fn act(&self, p: &SiegelPoint) -> Result<SiegelPoint> {
        siegel_action(self, p)
    }
}

impl GroupAction for JacobiElement {
    type Point = JacobiDomainPoint;

    fn compose(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn act(&self, p: &JacobiDomainPoint) -> Result<JacobiDomainPoint> {
        JacobiElement::act(self, p)
    }
}

impl GroupAction for ParabolicElement {
    type Point = JacobiDomainPoint;

    fn compose(&self, other: &Self) -> Result<Self> {
        ParabolicElement::compose(self, other)
    }
    fn act(&self, p: &JacobiDomainPoint) -> Result<JacobiDomainPoint> {
        let t = auxiliary_t(p)?;
        let f = factor_decomposition(self, &p.z, &p.w, &t)?;
        JacobiDomainPoint::new(SiegelPoint::new(f.z)?, f.w)
    }
}

/// Max-norm of `J(g1·g2, p) − J(g1, g2·p)·J(g2, p)`.
pub fn cocycle_residual<G, F>(j: F, g1: &G, g2: &G, p: &G::Point) -> Result<f64>
where
    G: GroupAction,
    F: Fn(&G, &G::Point) -> Result<MatC>,
{
    let lhs = j(&g1.compose(g2)?, p)?;
    let rhs = j(g1, &g2.act(p)?)?.checked_mul(&j(g2, p)?)?;
    if lhs.shape() != rhs.shape() {
        return Err(Error::Dimension("automorphic factor values have different shapes".into()));
    }
    Ok(lhs.max_abs_diff(&rhs))
}

/// Additive counterpart: max-norm of `A(g1·g2, p) − A(g1, g2·p) − A(g2, p)`.
pub fn summand_residual<G, F>(a: F, g1: &G, g2: &G, p: &G::Point) -> Result<f64>
where
    G: GroupAction,
    F: Fn(&G, &G::Point) -> Result<MatC>,
{
    let lhs = a(&g1.compose(g2)?, p)?;
    let rhs = a(g1, &g2.act(p)?)?.checked_add(&a(g2, p)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// `J(M, Z) = CZ + D`.
pub fn symplectic_j(m: &SymplecticElement, z: &SiegelPoint) -> Result<MatC> {
    m.j_factor(z)
}

/// The summand of automorphy `c(g; Z, W)` on the Jacobi group.
pub fn jacobi_summand(g: &ParabolicElement, p: &JacobiDomainPoint) -> Result<MatC> {
    let t = auxiliary_t(p)?;
    Ok(factor_decomposition(g, &p.z, &p.w, &t)?.c)
}

/// Canonical automorphic factor `χ(c(g;Z,W))·ρ(a(g;Z))` with
/// `χ(X) = exp(2πi·σ(index·X))` on `m×m` values and `ρ = det^weight`.
pub fn canonical_factor(index: &MatQ, weight: i32) -> impl Fn(&ParabolicElement, &JacobiDomainPoint) -> Result<MatC> + '_ {
    move |g, p| {
        let t = auxiliary_t(p)?;
        let f = factor_decomposition(g, &p.z, &p.w, &t)?;
        let chi = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * index.to_c64().checked_mul(&f.c)?.trace()).exp();
        let rho = f.right_factor()?.det()?.powi(weight);
        MatC::from_vec(1, 1, vec![chi * rho])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_second_argument_gives_zero_residual() {
        let m1 = SymplecticElement::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let e = SymplecticElement::identity(1);
        let z = SiegelPoint::scalar(Complex64::new(0.3, 1.2)).unwrap();
        assert_eq!(cocycle_residual(symplectic_j, &m1, &e, &z).unwrap(), 0.0);
    }

    #[test]
    fn classical_cocycle() {
        let m1 = SymplecticElement::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let m2 = SymplecticElement::from_i64_rows(&[&[1, -3], &[1, -2]]).unwrap();
        let z = SiegelPoint::scalar(Complex64::i()).unwrap();
        assert!(cocycle_residual(symplectic_j, &m1, &m2, &z).unwrap() < 1e-12);
    }
}
