//! The parabolic subgroup `P(H_n) ⊂ Sp(m+n)` stabilizing the boundary
//! component `H_n`, and the quasilinear decomposition of its action
//! `(Z, W, T) ↦ (σ(Z), a(g;Z)(W) + b(g;Z), m_g(T) + c(g;Z,W))`.

use num_complex::Complex64;

use super::jacobi::{HeisenbergElement, JacobiElement};
use super::siegel::{mobius, JacobiDomainPoint, SiegelPoint};
use super::symplectic::{symplectic_check, SymplecticElement};
use crate::error::{Error, Result};
use crate::matrix::{MatC, MatQ};

/// Raw block matrix `[σ, u, (λ, μ, κ)]`, rows and columns ordered `(n, m, n, m)`:
///
/// ```text
/// | A    0  B    A·ᵗμ − B·ᵗλ |
/// | uλ   u  uμ   uκ          |
/// | C    0  D    C·ᵗμ − D·ᵗλ |
/// | 0    0  0    ᵗu⁻¹        |
/// ```
pub(crate) fn embed_blocks(sigma: &SymplecticElement, u: &MatQ, lambda: &MatQ, mu: &MatQ, kappa: &MatQ) -> Result<MatQ> {
    let n = sigma.degree();
    let m = u.rows();
    if !u.is_square() || lambda.shape() != (m, n) || mu.shape() != (m, n) || kappa.shape() != (m, m) {
        return Err(Error::Dimension("parabolic embedding block shapes".into()));
    }
    let ut_inv = u.inverse().map_err(|_| Error::Singular("u is not invertible".into()))?.transpose();
    let (a, b, c, d) = (sigma.a(), sigma.b(), sigma.c(), sigma.d());
    let (lt, mt) = (lambda.transpose(), mu.transpose());
    let top_right = &(&a * &mt) - &(&b * &lt);
    let third_right = &(&c * &mt) - &(&d * &lt);
    let znm = MatQ::zeros(n, m);
    let zmn = MatQ::zeros(m, n);
    let zmm = MatQ::zeros(m, m);
    MatQ::from_blocks(&[
        vec![&a, &znm, &b, &top_right],
        vec![&(u * lambda), u, &(u * mu), &(u * kappa)],
        vec![&c, &znm, &d, &third_right],
        vec![&zmn, &zmm, &zmn, &ut_inv],
    ])
}

/// `[σ, u, (λ, μ, κ)] ∈ Sp(m+n)` as a `2(m+n)`-square rational matrix.
pub fn embed_parabolic(sigma: &SymplecticElement, u: &MatQ, h: &HeisenbergElement) -> Result<MatQ> {
    if h.degree() != sigma.degree() || h.index_size() != u.rows() {
        return Err(Error::Dimension("Heisenberg part does not match (n, m)".into()));
    }
    embed_blocks(sigma, u, &h.lambda, &h.mu, &h.kappa)
}

/// Element of `P(H_n)` kept as its `Sp(m+n)` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicElement {
    g: MatQ,
    n: usize,
    m: usize,
}

impl ParabolicElement {
    pub fn new(g: MatQ, n: usize, m: usize) -> Result<Self> {
        if g.shape() != (2 * (n + m), 2 * (n + m)) {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix", 2 * (n + m))));
        }
        if !symplectic_check(&g)? {
            return Err(Error::InvalidElement("matrix is not symplectic".into()));
        }
        // Zero pattern of the block display: column block 2 vanishes outside
        // row block 2, and row block 4 vanishes outside column block 4.
        let col2_ok =
            (0..2 * (n + m)).filter(|r| !(n..n + m).contains(r)).all(|r| (n..n + m).all(|c| num_traits::Zero::is_zero(&g[(r, c)])));
        let row4_ok = (2 * n + m..2 * (n + m)).all(|r| (0..2 * n + m).all(|c| num_traits::Zero::is_zero(&g[(r, c)])));
        if !col2_ok || !row4_ok {
            return Err(Error::InvalidElement("matrix does not normalize H_n".into()));
        }
        Ok(ParabolicElement { g, n, m })
    }

    pub fn embed(sigma: &SymplecticElement, u: &MatQ, h: &HeisenbergElement) -> Result<Self> {
        Self::new(embed_parabolic(sigma, u, h)?, sigma.degree(), u.rows())
    }

    /// Jacobi-group element `[σ, E, (λ, μ, κ)]`.
    pub fn from_jacobi(g: &JacobiElement) -> Result<Self> {
        Self::embed(&g.m, &MatQ::identity(g.index_size()), &g.h)
    }

    pub fn matrix(&self) -> &MatQ {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn index_size(&self) -> usize {
        self.m
    }

    pub fn u(&self) -> MatQ {
        self.g.block(self.n, self.n, self.m, self.m)
    }

    pub fn compose(&self, other: &ParabolicElement) -> Result<ParabolicElement> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::Dimension("parabolic elements with different (n, m)".into()));
        }
        Ok(ParabolicElement { g: &self.g * &other.g, n: self.n, m: self.m })
    }

    /// Möbius action of the full matrix on `Ω = [[Z, ᵗW], [W, T]]`, unchecked.
    fn act_on_big(&self, omega: &MatC) -> Result<MatC> {
        let big = self.n + self.m;
        let g = self.g.to_c64();
        mobius(&g.block(0, 0, big, big), &g.block(0, big, big, big), &g.block(big, 0, big, big), &g.block(big, big, big, big), omega)
    }
}

pub(crate) fn assemble_big(z: &MatC, w: &MatC, t: &MatC) -> Result<MatC> {
    MatC::from_blocks(&[vec![z, &w.transpose()], vec![w, t]])
}

/// A `T ∈ H_m` making `(Z, W, T)` a point of `H_{m+n}`.
pub fn auxiliary_t(p: &JacobiDomainPoint) -> Result<MatC> {
    let y = p.z.matrix().im().map(|v| Complex64::new(*v, 0.0));
    let v = p.w.im().map(|x| Complex64::new(*x, 0.0));
    let schur = &(&v * &y.inverse()?) * &v.transpose();
    let t = 1.0 + schur.frobenius();
    Ok(MatC::identity(p.index_size()).scale(&Complex64::new(0.0, t)))
}

/// Output of [`factor_decomposition`].
#[derive(Clone, Debug)]
pub struct FactorDecomposition {
    pub z: MatC,
    pub w: MatC,
    pub t: MatC,
    /// Linear part `a(g;Z)` as an `mn×mn` matrix on row-major `vec(W)`.
    pub a: MatC,
    pub b: MatC,
    pub c: MatC,
    n: usize,
    m: usize,
}

impl FactorDecomposition {
    /// The `n×n` matrix `R` with `a(g;Z)(W) = W·R`, available when `u = E`.
    pub fn right_factor(&self) -> Result<MatC> {
        let (n, m) = (self.n, self.m);
        // a(E_{0l}) has first row R_{l,·}.
        let r = MatC::from_fn(n, n, |l, j| self.a[(j, l)]);
        let scale = self.a.max_magnitude().max(1.0);
        for k in 0..m {
            for l in 0..n {
                for kk in 0..m {
                    for j in 0..n {
                        let expected = if kk == k { r[(l, j)] } else { Complex64::new(0.0, 0.0) };
                        if (self.a[(kk * n + j, k * n + l)] - expected).norm() > 1e-10 * scale {
                            return Err(Error::InvalidElement("a(g;Z) is not a right multiplication".into()));
                        }
                    }
                }
            }
        }
        Ok(r)
    }
}

/// Apply `g` to `(Z, W, T)` and read off `a`, `b`, `c`.
///
/// `a` comes from evaluating at `W = 0` and at the `mn` matrix units
/// (the action is affine in `W`); `c = T̃ − u·T·ᵗu`.
pub fn factor_decomposition(g: &ParabolicElement, z: &SiegelPoint, w: &MatC, t: &MatC) -> Result<FactorDecomposition> {
    let (n, m) = (g.n, g.m);
    if z.degree() != n || w.shape() != (m, n) || t.shape() != (m, m) {
        return Err(Error::Dimension("(Z, W, T) does not match the element's (n, m)".into()));
    }
    let omega = SiegelPoint::new(assemble_big(z.matrix(), w, t)?)?;
    let image = g.act_on_big(omega.matrix())?;
    let zt = image.block(0, 0, n, n);
    let wt = image.block(n, 0, m, n);
    let tt = image.block(n, n, m, m);

    let w_part = |wv: &MatC| -> Result<MatC> {
        let img = g.act_on_big(&assemble_big(z.matrix(), wv, t)?)?;
        Ok(img.block(n, 0, m, n))
    };
    let b = w_part(&MatC::zeros(m, n))?;
    let mut a = MatC::zeros(m * n, m * n);
    for k in 0..m {
        for l in 0..n {
            let col = &w_part(&MatC::unit(m, n, k, l))? - &b;
            for (idx, v) in col.iter().enumerate() {
                a[(idx, k * n + l)] = *v;
            }
        }
    }
    let u = g.u().to_c64();
    let c = &tt - &(&(&u * t) * &u.transpose());
    Ok(FactorDecomposition { z: zt, w: wt, t: tt, a, b, c, n, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_embedding() {
        let g = embed_parabolic(&SymplecticElement::identity(1), &MatQ::identity(1), &HeisenbergElement::zero(1, 1)).unwrap();
        assert_eq!(g, MatQ::identity(4));
    }

    #[test]
    fn singular_u_is_rejected() {
        let r = embed_parabolic(&SymplecticElement::identity(1), &MatQ::zeros(1, 1), &HeisenbergElement::zero(1, 1));
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn non_symmetric_kappa_breaks_symplecticity() {
        // m = 2, n = 1, λ = e_1, μ = 0, κ = [[0,1],[0,0]].
        let lambda = MatQ::from_rows(vec![vec![rat_int(1)], vec![rat_int(0)]]).unwrap();
        let kappa = MatQ::from_i64_rows(&[&[0, 1], &[0, 0]]).unwrap();
        let g = embed_blocks(&SymplecticElement::identity(1), &MatQ::identity(2), &lambda, &MatQ::zeros(2, 1), &kappa).unwrap();
        assert!(!symplectic_check(&g).unwrap());
    }

    #[test]
    fn identity_decomposition() {
        let g = ParabolicElement::embed(&SymplecticElement::identity(1), &MatQ::identity(1), &HeisenbergElement::zero(1, 1)).unwrap();
        let z = SiegelPoint::scalar(c(0.1, 1.2)).unwrap();
        let w = MatC::from_vec(1, 1, vec![c(0.3, -0.2)]).unwrap();
        let t = MatC::from_vec(1, 1, vec![c(0.0, 3.0)]).unwrap();
        let f = factor_decomposition(&g, &z, &w, &t).unwrap();
        assert!(f.a.max_abs_diff(&MatC::identity(1)) < 1e-14);
        assert!(f.b.max_magnitude() < 1e-14);
        assert!(f.c.max_magnitude() < 1e-14);
    }

    #[test]
    fn pure_heisenberg_translation() {
        let h = HeisenbergElement::new(MatQ::from_i64_rows(&[&[2]]).unwrap(), MatQ::zeros(1, 1), MatQ::zeros(1, 1)).unwrap();
        let g = ParabolicElement::embed(&SymplecticElement::identity(1), &MatQ::identity(1), &h).unwrap();
        let zv = c(-0.2, 1.5);
        let z = SiegelPoint::scalar(zv).unwrap();
        let w = MatC::from_vec(1, 1, vec![c(0.1, 0.1)]).unwrap();
        let t = MatC::from_vec(1, 1, vec![c(0.0, 4.0)]).unwrap();
        let f = factor_decomposition(&g, &z, &w, &t).unwrap();
        assert!((f.b[(0, 0)] - zv * 2.0).norm() < 1e-13);
    }

    #[test]
    fn u_scales_w_and_t() {
        let u = MatQ::from_i64_rows(&[&[2]]).unwrap();
        let g = ParabolicElement::embed(&SymplecticElement::identity(1), &u, &HeisenbergElement::zero(1, 1)).unwrap();
        let z = SiegelPoint::scalar(c(0.0, 1.0)).unwrap();
        let w = MatC::from_vec(1, 1, vec![c(0.3, 0.1)]).unwrap();
        let t = MatC::from_vec(1, 1, vec![c(0.0, 2.0)]).unwrap();
        let f = factor_decomposition(&g, &z, &w, &t).unwrap();
        assert!((f.w[(0, 0)] - c(0.6, 0.2)).norm() < 1e-14);
        assert!((f.t[(0, 0)] - c(0.0, 8.0)).norm() < 1e-13);
        assert!(f.c.max_magnitude() < 1e-13);
    }

    #[test]
    fn non_parabolic_matrix_rejected() {
        // The full inversion of Sp(2) does not normalize H_1.
        let g = SymplecticElement::inversion(2).matrix().clone();
        assert!(matches!(ParabolicElement::new(g, 1, 1), Err(Error::InvalidElement(_))));
    }
}
