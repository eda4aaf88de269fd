use super::parabolic::embed_blocks;
use super::siegel::{mobius, JacobiDomainPoint, SiegelPoint};
use super::symplectic::{symplectic_check, SymplecticElement};
use crate::error::{Error, Result};
use crate::matrix::{MatG, MatQ, Matrix};
use crate::scalar::Scalar;

/// Heisenberg triple `(λ, μ, κ)` with `λ, μ` of shape `m×n` and `κ` of shape `m×m`.
///
/// Admissible triples are exactly those whose parabolic embedding
/// `[E, E, (λ, μ, κ)]` is symplectic, which amounts to `κ + μ·ᵗλ` being
/// symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergElement {
    pub lambda: MatQ,
    pub mu: MatQ,
    pub kappa: MatQ,
}

impl HeisenbergElement {
    pub fn new(lambda: MatQ, mu: MatQ, kappa: MatQ) -> Result<Self> {
        let (m, n) = lambda.shape();
        if mu.shape() != (m, n) || kappa.shape() != (m, m) || m == 0 || n == 0 {
            return Err(Error::Dimension(format!("Heisenberg triple shapes λ{:?} μ{:?} κ{:?}", lambda.shape(), mu.shape(), kappa.shape())));
        }
        let embedded = embed_blocks(&SymplecticElement::identity(n), &MatQ::identity(m), &lambda, &mu, &kappa)?;
        if !symplectic_check(&embedded)? {
            return Err(Error::InvalidElement("κ + μ·ᵗλ is not symmetric".into()));
        }
        Ok(HeisenbergElement { lambda, mu, kappa })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        HeisenbergElement { lambda: MatQ::zeros(m, n), mu: MatQ::zeros(m, n), kappa: MatQ::zeros(m, m) }
    }

    /// Triple with `κ` chosen so that `κ + μ·ᵗλ = sym`.
    pub fn with_symmetric_part(lambda: MatQ, mu: MatQ, sym: &MatQ) -> Result<Self> {
        if !sym.is_symmetric() {
            return Err(Error::InvalidElement("symmetric part is not symmetric".into()));
        }
        let kappa = sym.checked_sub(&mu.checked_mul(&lambda.transpose())?)?;
        Self::new(lambda, mu, kappa)
    }

    pub fn index_size(&self) -> usize {
        self.lambda.rows()
    }

    pub fn degree(&self) -> usize {
        self.lambda.cols()
    }

    pub fn is_integral(&self) -> bool {
        self.lambda.is_integral() && self.mu.is_integral() && self.kappa.is_integral()
    }
}

/// Element `(M, (λ, μ, κ))` of the Jacobi group `Sp(n) ⋉ H^{(n,m)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiElement {
    pub m: SymplecticElement,
    pub h: HeisenbergElement,
}

impl JacobiElement {
    pub fn new(m: SymplecticElement, h: HeisenbergElement) -> Result<Self> {
        if m.degree() != h.degree() {
            return Err(Error::Dimension(format!("symplectic degree {} vs Heisenberg degree {}", m.degree(), h.degree())));
        }
        Ok(JacobiElement { m, h })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        JacobiElement { m: SymplecticElement::identity(n), h: HeisenbergElement::zero(n, m) }
    }

    pub fn from_symplectic(m: SymplecticElement, index_size: usize) -> Self {
        let n = m.degree();
        JacobiElement { m, h: HeisenbergElement::zero(n, index_size) }
    }

    pub fn from_heisenberg(h: HeisenbergElement) -> Self {
        JacobiElement { m: SymplecticElement::identity(h.degree()), h }
    }

    pub fn degree(&self) -> usize {
        self.m.degree()
    }

    pub fn index_size(&self) -> usize {
        self.h.index_size()
    }

    pub fn is_integral(&self) -> bool {
        self.m.is_integral() && self.h.is_integral()
    }

    /// Group law: with `(λ̃, μ̃) = (λ, μ)·M'`,
    /// `(M, (λ,μ,κ))·(M', (λ',μ',κ')) = (MM', (λ̃+λ', μ̃+μ', κ+κ'+λ̃ᵗμ'−μ̃ᵗλ'))`.
    pub fn mul(&self, other: &JacobiElement) -> Result<JacobiElement> {
        if self.degree() != other.degree() || self.index_size() != other.index_size() {
            return Err(Error::Dimension("Jacobi elements with different (n, m)".into()));
        }
        let n = self.degree();
        let pair = MatQ::from_blocks(&[vec![&self.h.lambda, &self.h.mu]])?;
        let twisted = &pair * other.m.matrix();
        let m = self.index_size();
        let lt = twisted.block(0, 0, m, n);
        let mt = twisted.block(0, n, m, n);
        let (l2, m2, k2) = (&other.h.lambda, &other.h.mu, &other.h.kappa);
        let kappa = &(&(&self.h.kappa + k2) + &(&lt * &m2.transpose())) - &(&mt * &l2.transpose());
        Ok(JacobiElement { m: self.m.compose(&other.m)?, h: HeisenbergElement { lambda: &lt + l2, mu: &mt + m2, kappa } })
    }

    /// `(M<Z>, (W + λZ + μ)(CZ + D)^{-1})`.
    pub fn act(&self, p: &JacobiDomainPoint) -> Result<JacobiDomainPoint> {
        self.check_point(p.degree(), p.index_size())?;
        let (z, w) = (p.z.matrix(), &p.w);
        let (zt, wt) = act_generic(self, z, w, |q| q.to_c64())?;
        JacobiDomainPoint::new(SiegelPoint::new(zt)?, wt)
    }

    /// Exact action on Gaussian-rational `(Z, W)`.
    pub fn act_exact(&self, z: &MatG, w: &MatG) -> Result<(MatG, MatG)> {
        self.check_point(z.rows(), w.rows())?;
        if w.cols() != z.rows() {
            return Err(Error::Dimension("W must have n columns".into()));
        }
        act_generic(self, z, w, MatQ::to_gauss)
    }

    fn check_point(&self, n: usize, m: usize) -> Result<()> {
        if n != self.degree() || m != self.index_size() {
            return Err(Error::Dimension(format!("element for (n, m) = ({}, {}) applied at ({n}, {m})", self.degree(), self.index_size())));
        }
        Ok(())
    }
}

fn act_generic<T: Scalar>(
    g: &JacobiElement,
    z: &Matrix<T>,
    w: &Matrix<T>,
    conv: impl Fn(&MatQ) -> Matrix<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let (a, b, c, d) = (conv(&g.m.a()), conv(&g.m.b()), conv(&g.m.c()), conv(&g.m.d()));
    let zt = mobius(&a, &b, &c, &d, z)?;
    let shifted = &(w + &(&conv(&g.h.lambda) * z)) + &conv(&g.h.mu);
    let den = &(&c * z) + &d;
    // shifted · den^{-1}
    let wt = den.transpose().solve(&shifted.transpose())?.transpose();
    Ok((zt, wt))
}

/// The scalar `det(CZ+D)` shortcut for `n = 1` slashes and lifts.
pub fn det_j(m: &SymplecticElement, z: &SiegelPoint) -> Result<num_complex::Complex64> {
    m.j_factor(z)?.det()
}
