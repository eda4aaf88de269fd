use num_complex::Complex64;

use super::harmonic::QuadFormS;
use super::poly::{ApproxPoly, ExactPoly, Monomial};
use crate::error::{Error, Result};
use crate::matrix::MatC;
use crate::scalar::Scalar;

/// The quadratic exponent `h(W) = σ(W C ᵗW S^{-1})` as a polynomial.
pub fn exponent_poly(s: &QuadFormS, c: &MatC, n: usize) -> Result<ApproxPoly> {
    let m = s.size();
    if c.shape() != (n, n) {
        return Err(Error::Dimension(format!("C must be {n}x{n}, got {:?}", c.shape())));
    }
    let t = s.t().to_c64();
    let mut terms = Vec::new();
    for k in 0..m {
        for q in 0..m {
            for l in 0..n {
                for p in 0..n {
                    let coeff = c[(l, p)] * t[(q, k)];
                    if coeff == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut e = vec![0; m * n];
                    e[k * n + l] += 1;
                    e[q * n + p] += 1;
                    terms.push((Monomial::new(e), coeff));
                }
            }
        }
    }
    ApproxPoly::from_terms(m, n, terms)
}

/// `|P(∂_W) e^h − P(2 S^{-1} W C) e^h|` at `w`, with `h = σ(W C ᵗW S^{-1})`.
///
/// The left side is obtained symbolically: every derivative of `e^h · Q`
/// equals `e^h · (∂h · Q + ∂Q)`, so applying the monomials of `P` one
/// variable at a time yields a finite polynomial prefactor.
pub fn lemma43_residual(p: &ExactPoly, s: &QuadFormS, c: &MatC, w: &MatC) -> Result<f64> {
    let (m, n) = p.shape();
    if s.size() != m || w.shape() != (m, n) {
        return Err(Error::Dimension("P, S and W have inconsistent shapes".into()));
    }
    if !c.is_symmetric() {
        return Err(Error::InvalidInput("C must be symmetric".into()));
    }
    let h = exponent_poly(s, c, n)?;
    let dh: Vec<ApproxPoly> = (0..m * n).map(|v| h.derivative(v)).collect();

    let mut prefactor = ApproxPoly::zero(m, n);
    for (mono, coeff) in p.terms() {
        let mut q = ApproxPoly::one(m, n);
        for (v, &e) in mono.exponents().iter().enumerate() {
            for _ in 0..e {
                q = dh[v].mul(&q)?.add(&q.derivative(v))?;
            }
        }
        prefactor = prefactor.add(&q.scale(&coeff.to_c64()))?;
    }
    let eh = h.eval(w)?.exp();
    let lhs = prefactor.eval(w)? * eh;

    let arg = &(&s.t().to_c64() * w) * c;
    let rhs = p.eval(&arg.scale(&Complex64::new(2.0, 0.0)))? * eh;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyharm::harmonic::pluriharmonic_basis;
    use crate::scalar::GaussRational;

    fn c1(re: f64, im: f64) -> MatC {
        MatC::from_vec(1, 1, vec![Complex64::new(re, im)]).unwrap()
    }

    #[test]
    fn hand_computed_degree_one() {
        // P = W, S = 1: both sides are 2cW e^{cW²}.
        let p = ExactPoly::var(1, 1, 0, 0);
        let s = QuadFormS::identity(1);
        for (c, w) in [((0.3, -0.2), (0.5, 0.1)), ((-1.0, 0.4), (0.2, -0.9))] {
            let r = lemma43_residual(&p, &s, &c1(c.0, c.1), &c1(w.0, w.1)).unwrap();
            assert!(r < 1e-12, "{r}");
        }
    }

    #[test]
    fn trivial_cases() {
        let s = QuadFormS::identity(2);
        let basis = pluriharmonic_basis(&s, 2, 2).unwrap();
        let w = MatC::from_fn(2, 2, |i, j| Complex64::new(0.1 * i as f64, -0.2 * j as f64 + 0.05));
        for p in &basis.elements {
            assert!(lemma43_residual(p, &s, &MatC::zeros(2, 2), &w).unwrap() < 1e-14);
        }
        let k = ExactPoly::constant(2, 2, GaussRational::from_i64(3));
        let c = MatC::from_fn(2, 2, |i, j| Complex64::new((i + j) as f64 * 0.3, 0.1));
        assert!(lemma43_residual(&k, &s, &c, &w).unwrap() < 1e-13);
    }

    #[test]
    fn non_pluriharmonic_fails_and_asymmetric_c_errors() {
        let p = ExactPoly::var(1, 1, 0, 0).pow(2);
        let s = QuadFormS::identity(1);
        assert!(lemma43_residual(&p, &s, &c1(0.5, 0.0), &c1(0.3, 0.0)).unwrap() > 0.5);
        let s2 = QuadFormS::identity(1);
        let p2 = ExactPoly::var(1, 2, 0, 0);
        let c = MatC::from_fn(2, 2, |i, j| Complex64::new((2 * i + j) as f64, 0.0));
        assert!(lemma43_residual(&p2, &s2, &c, &MatC::zeros(1, 2)).is_err());
    }
}
