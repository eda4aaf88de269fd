use super::harmonic::{coefficient_matrix, PluriharmonicBasis};
use super::poly::{Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::matrix::{MatC, MatG, MatQ, Matrix};
use crate::scalar::{GaussRational, Scalar};

/// `(τ(A)P)(W) = P(WA)`.
pub fn gl_action<K: Scalar>(a: &Matrix<K>, p: &SparsePoly<K>) -> Result<SparsePoly<K>> {
    gl_action_two_sided(a, None, p)
}

/// `P(ᵗB W A)`; `B` is `m×m` and is meant to lie in `O(S)`.
pub fn gl_action_two_sided<K: Scalar>(a: &Matrix<K>, b: Option<&Matrix<K>>, p: &SparsePoly<K>) -> Result<SparsePoly<K>> {
    let (m, n) = p.shape();
    if a.shape() != (n, n) {
        return Err(Error::Dimension(format!("A must be {n}x{n}, got {:?}", a.shape())));
    }
    if let Some(b) = b {
        if b.shape() != (m, m) {
            return Err(Error::Dimension(format!("B must be {m}x{m}, got {:?}", b.shape())));
        }
    }
    let left = |r: usize, k: usize| match b {
        Some(b) => b[(r, k)].clone(),
        None if r == k => K::one(),
        None => K::zero(),
    };
    // Image of each coordinate: W_kl ↦ Σ_{r,q} B_rk W_rq A_ql.
    let images: Vec<SparsePoly<K>> = (0..m)
        .flat_map(|k| (0..n).map(move |l| (k, l)))
        .map(|(k, l)| {
            let terms = (0..m).flat_map(|r| (0..n).map(move |q| (r, q))).filter_map(|(r, q)| {
                let c = left(r, k) * a[(q, l)].clone();
                if c.is_zero() {
                    return None;
                }
                let mut e = vec![0; m * n];
                e[r * n + q] = 1;
                Some((Monomial::new(e), c))
            });
            SparsePoly::from_terms(m, n, terms.collect::<Vec<_>>()).expect("shape")
        })
        .collect();
    let mut powers: Vec<Vec<SparsePoly<K>>> = images.iter().map(|img| vec![SparsePoly::one(m, n), img.clone()]).collect();
    let mut acc = SparsePoly::zero(m, n);
    for (mono, c) in p.terms() {
        let mut term = SparsePoly::constant(m, n, c.clone());
        for (v, &e) in mono.exponents().iter().enumerate() {
            let e = e as usize;
            while powers[v].len() <= e {
                let next = powers[v].last().expect("non-empty").mul(&images[v])?;
                powers[v].push(next);
            }
            if e > 0 {
                term = term.mul(&powers[v][e])?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Coordinates of `target` in the span of `basis`.
///
/// Exact scalars demand an exact solution; approximate ones accept a
/// residual up to `1e-9` relative to the target's size.
pub fn express_in_basis<K: Scalar>(basis: &[SparsePoly<K>], target: &SparsePoly<K>) -> Result<Vec<K>> {
    let mut monos: Vec<Monomial> = basis.iter().chain(std::iter::once(target)).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    monos.reverse();
    let b = coefficient_matrix(basis, &monos);
    let aug =
        Matrix::from_fn(monos.len(), basis.len() + 1, |r, c| if c < basis.len() { b[(r, c)].clone() } else { target.coeff(&monos[r]) });
    let (r, pivots) = aug.rref();
    if pivots.len() != basis.len() + usize::from(pivots.last() == Some(&basis.len())) {
        return Err(Error::InvalidInput("basis polynomials are linearly dependent".into()));
    }
    if pivots.contains(&basis.len()) && K::EXACT {
        return Err(Error::NotInSpan);
    }
    let coords: Vec<K> = (0..basis.len()).map(|i| r[(i, basis.len())].clone()).collect();
    if !K::EXACT {
        let mut fit = SparsePoly::zero(target.shape().0, target.shape().1);
        for (p, c) in basis.iter().zip(&coords) {
            fit = fit.add(&p.scale(c))?;
        }
        let scale = target.l1_norm().max(1.0);
        if fit.sub(target)?.l1_norm() > 1e-9 * scale {
            return Err(Error::NotInSpan);
        }
    }
    Ok(coords)
}

/// Matrix of `τ(A)` on `span(basis)`: column `j` holds the coordinates of `τ(A)P_j`.
pub fn tau_matrix<K: Scalar>(a: &Matrix<K>, basis: &[SparsePoly<K>]) -> Result<Matrix<K>> {
    let d = basis.len();
    let mut out = Matrix::zeros(d, d);
    for (j, p) in basis.iter().enumerate() {
        let coords = express_in_basis(basis, &gl_action(a, p)?)?;
        for (i, c) in coords.into_iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    Ok(out)
}

impl PluriharmonicBasis {
    pub fn tau_exact(&self, a: &MatQ) -> Result<MatG> {
        tau_matrix(&a.to_gauss(), &self.elements)
    }

    pub fn tau_approx(&self, a: &MatC) -> Result<MatC> {
        tau_matrix(a, &self.approx_elements())
    }

    pub fn approx_elements(&self) -> Vec<SparsePoly<num_complex::Complex64>> {
        self.elements.iter().map(SparsePoly::<GaussRational>::to_approx).collect()
    }
}
