use std::collections::HashMap;

use num_traits::{One, Zero};

use super::poly::{ExactPoly, Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::matgroup::pd_check_exact;
use crate::matrix::{MatQ, Matrix};
use crate::scalar::{GaussRational, Rat, Scalar};

/// A positive definite rational `S` together with `T = S^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadFormS {
    s: MatQ,
    t_inv: MatQ,
}

impl QuadFormS {
    pub fn new(s: MatQ) -> Result<Self> {
        if !s.is_square() || s.rows() == 0 {
            return Err(Error::Dimension(format!("S must be square, got {:?}", s.shape())));
        }
        if !s.is_symmetric() {
            return Err(Error::InvalidInput("S is not symmetric".into()));
        }
        if !pd_check_exact(&s)? {
            return Err(Error::InvalidInput("S is not positive definite".into()));
        }
        let t_inv = s.inverse()?;
        Ok(QuadFormS { s, t_inv })
    }

    /// `S = E_m`.
    pub fn identity(m: usize) -> Self {
        QuadFormS { s: MatQ::identity(m), t_inv: MatQ::identity(m) }
    }

    pub fn s(&self) -> &MatQ {
        &self.s
    }

    /// The inverse `T = (t_pq)` of `S`.
    pub fn t(&self) -> &MatQ {
        &self.t_inv
    }

    pub fn size(&self) -> usize {
        self.s.rows()
    }
}

fn check_ring<K: Scalar>(s: &QuadFormS, p: &SparsePoly<K>) -> Result<()> {
    if p.shape().0 != s.size() {
        return Err(Error::Dimension(format!("S is {}x{} but the polynomial lives on {:?} matrices", s.size(), s.size(), p.shape())));
    }
    Ok(())
}

/// `Δ_{i,j} P = Σ_{p,q} t_pq ∂²P / ∂W_{pi} ∂W_{qj}` with zero-based `i, j`.
pub fn laplacian_ij<K: Scalar>(s: &QuadFormS, i: usize, j: usize, p: &SparsePoly<K>) -> Result<SparsePoly<K>> {
    check_ring(s, p)?;
    let (m, n) = p.shape();
    if i >= n || j >= n {
        return Err(Error::InvalidInput(format!("Laplacian index ({i}, {j}) outside 0..{n}")));
    }
    let mut acc = SparsePoly::zero(m, n);
    for a in 0..m {
        let first = p.derivative(a * n + i);
        if first.is_zero() {
            continue;
        }
        for b in 0..m {
            let t = &s.t()[(a, b)];
            if t.is_zero() {
                continue;
            }
            let second = first.derivative(b * n + j);
            acc = acc.add(&second.scale(&K::from_rat(t)))?;
        }
    }
    Ok(acc)
}

/// `Δ_{i,j} P = 0` for every pair `i, j`.
pub fn is_pluriharmonic<K: Scalar>(s: &QuadFormS, p: &SparsePoly<K>) -> Result<bool> {
    let n = p.shape().1;
    for i in 0..n {
        // Δ_{j,i} = Δ_{i,j} because T is symmetric.
        for j in i..n {
            if !laplacian_ij(s, i, j, p)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ_i Δ_{i,i} P = 0`.
pub fn is_harmonic<K: Scalar>(s: &QuadFormS, p: &SparsePoly<K>) -> Result<bool> {
    let (m, n) = p.shape();
    let mut acc = SparsePoly::zero(m, n);
    for i in 0..n {
        acc = acc.add(&laplacian_ij(s, i, i, p)?)?;
    }
    Ok(acc.is_zero())
}

/// Basis of the homogeneous degree-`d` pluriharmonic polynomials on `C^{(m,n)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PluriharmonicBasis {
    pub s: QuadFormS,
    pub n: usize,
    pub degree: u32,
    pub elements: Vec<ExactPoly>,
}

impl PluriharmonicBasis {
    /// Tag recorded alongside serialized bases.
    pub const MONOMIAL_ORDER: &'static str = "grlex";

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.s.size(), self.n)
    }

    /// Re-validate the invariants: homogeneity, pluriharmonicity and full rank.
    pub fn validate(&self) -> Result<()> {
        let (m, n) = self.shape();
        for p in &self.elements {
            if p.shape() != (m, n) || p.homogeneous_degree() != Some(self.degree) {
                return Err(Error::InvalidInput("basis element is not homogeneous of the basis degree".into()));
            }
            if !is_pluriharmonic(&self.s, p)? {
                return Err(Error::InvalidInput("basis element is not pluriharmonic".into()));
            }
        }
        let monos = Monomial::all_of_degree(m * n, self.degree);
        if coefficient_matrix(&self.elements, &monos).rank() != self.dim() {
            return Err(Error::InvalidInput("basis elements are linearly dependent".into()));
        }
        Ok(())
    }
}

/// Columns are the polynomials, rows the given monomials.
pub(crate) fn coefficient_matrix<K: Scalar>(polys: &[SparsePoly<K>], monos: &[Monomial]) -> Matrix<K> {
    Matrix::from_fn(monos.len(), polys.len(), |r, c| polys[c].coeff(&monos[r]))
}

/// Exact kernel of the stacked maps `Δ_{i,j}` (`i ≤ j`) on degree-`d` forms.
///
/// Columns follow the descending graded-lexicographic monomial order, and
/// the returned basis is the reduced row-echelon kernel basis.
pub fn pluriharmonic_basis(s: &QuadFormS, n: usize, d: u32) -> Result<PluriharmonicBasis> {
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    let m = s.size();
    let vars = m * n;
    let monos = Monomial::all_of_degree(vars, d);
    let elements: Vec<ExactPoly> = if d < 2 {
        monos.iter().map(|mono| ExactPoly::monomial(m, n, mono.exponents().to_vec(), GaussRational::one()).expect("shape")).collect()
    } else {
        let targets = Monomial::all_of_degree(vars, d - 2);
        let target_index: HashMap<&Monomial, usize> = targets.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut op = MatQ::zeros(pairs.len() * targets.len(), monos.len());
        for (col, mono) in monos.iter().enumerate() {
            let p = SparsePoly::<Rat>::monomial(m, n, mono.exponents().to_vec(), Rat::one()).expect("shape");
            for (block, &(i, j)) in pairs.iter().enumerate() {
                for (image_mono, c) in laplacian_ij(s, i, j, &p)?.terms() {
                    op[(block * targets.len() + target_index[image_mono], col)] = c.clone();
                }
            }
        }
        op.kernel_basis()
            .into_iter()
            .map(|v| {
                let terms = monos.iter().cloned().zip(v.iter().map(GaussRational::from_rat));
                ExactPoly::from_terms(m, n, terms).expect("shape")
            })
            .collect()
    };
    Ok(PluriharmonicBasis { s: s.clone(), n, degree: d, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type P = ExactPoly;

    fn s1(v: (i64, i64)) -> QuadFormS {
        QuadFormS::new(MatQ::from_vec(1, 1, vec![rat(v.0, v.1)]).unwrap()).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let w = P::var(1, 1, 0, 0);
        let two = P::constant(1, 1, GaussRational::from_i64(2));
        assert_eq!(laplacian_ij(&s1((1, 1)), 0, 0, &w.pow(2)).unwrap(), two);
        assert_eq!(laplacian_ij(&s1((1, 2)), 0, 0, &w.pow(2)).unwrap(), two.scale(&GaussRational::from_i64(2)));
        let e2 = QuadFormS::identity(2);
        let h = P::var(2, 1, 0, 0).pow(2).sub(&P::var(2, 1, 1, 0).pow(2)).unwrap();
        assert!(laplacian_ij(&e2, 0, 0, &h).unwrap().is_zero());
        assert!(laplacian_ij(&e2, 1, 0, &h).is_err());
    }

    #[test]
    fn pluriharmonic_versus_harmonic() {
        let s = s1((1, 1));
        let x = P::var(1, 2, 0, 0).mul(&P::var(1, 2, 0, 1)).unwrap();
        assert!(!is_pluriharmonic(&s, &x).unwrap());
        assert!(is_harmonic(&s, &x).unwrap());
        let w2 = P::var(1, 1, 0, 0).pow(2);
        assert!(!is_pluriharmonic(&s, &w2).unwrap());
        assert!(!is_harmonic(&s, &w2).unwrap());
        assert!(is_pluriharmonic(&QuadFormS::identity(3), &P::var(3, 2, 2, 1)).unwrap());
    }

    #[test]
    fn laplacians_commute() {
        let s = QuadFormS::new(MatQ::from_vec(2, 2, vec![rat(2, 1), rat(1, 2), rat(1, 2), rat(1, 1)]).unwrap()).unwrap();
        let p = P::var(2, 2, 0, 0)
            .pow(2)
            .mul(&P::var(2, 2, 1, 1).pow(2))
            .unwrap()
            .add(&P::var(2, 2, 0, 1).mul(&P::var(2, 2, 1, 0).pow(3)).unwrap())
            .unwrap();
        for (i, j, k, l) in [(0, 1, 1, 1), (0, 0, 1, 0), (1, 1, 0, 0)] {
            let a = laplacian_ij(&s, i, j, &laplacian_ij(&s, k, l, &p).unwrap()).unwrap();
            let b = laplacian_ij(&s, k, l, &laplacian_ij(&s, i, j, &p).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn basis_dimensions() {
        let e1 = QuadFormS::identity(1);
        assert_eq!(pluriharmonic_basis(&e1, 1, 0).unwrap().dim(), 1);
        assert_eq!(pluriharmonic_basis(&e1, 1, 2).unwrap().dim(), 0);
        assert_eq!(pluriharmonic_basis(&e1, 2, 1).unwrap().dim(), 2);
        let b = pluriharmonic_basis(&QuadFormS::identity(2), 1, 3).unwrap();
        assert_eq!(b.dim(), 2);
        b.validate().unwrap();
    }

    #[test]
    fn rejects_indefinite_s() {
        let s = MatQ::from_i64_rows(&[&[1, 2], &[2, 1]]).unwrap();
        assert!(QuadFormS::new(s).is_err());
    }
}
