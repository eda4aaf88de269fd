use num_complex::Complex64;
use num_traits::{One, Zero};

use super::siegel::{mobius, SiegelPoint};
use crate::error::{Error, Result};
use crate::matrix::{MatC, MatG, MatQ};
use crate::scalar::Rat;

/// `J_n = [[0, E], [-E, 0]]`.
pub fn j_form(n: usize) -> MatQ {
    MatQ::from_fn(2 * n, 2 * n, |r, c| {
        if c == r + n {
            Rat::one()
        } else if r == c + n {
            -Rat::one()
        } else {
            Rat::zero()
        }
    })
}

/// `ᵗM·J·M = J`, decided exactly.
pub fn symplectic_check(m: &MatQ) -> Result<bool> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(Error::Dimension(format!("symplectic check needs a square matrix of even size, got {:?}", m.shape())));
    }
    let j = j_form(m.rows() / 2);
    Ok(&(&m.transpose() * &j) * m == j)
}

/// Element of `Sp(n, Q)` with exact entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticElement {
    m: MatQ,
}

impl SymplecticElement {
    pub fn new(m: MatQ) -> Result<Self> {
        if !symplectic_check(&m)? {
            return Err(Error::InvalidElement("matrix is not symplectic".into()));
        }
        Ok(SymplecticElement { m })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(MatQ::from_i64_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymplecticElement { m: MatQ::identity(2 * n) }
    }

    /// `[[E, B], [0, E]]` for symmetric `B`.
    pub fn translation(b: &MatQ) -> Result<Self> {
        if !b.is_symmetric() {
            return Err(Error::InvalidElement("translation needs a symmetric matrix".into()));
        }
        let n = b.rows();
        let (e, z) = (MatQ::identity(n), MatQ::zeros(n, n));
        Self::new(MatQ::from_blocks(&[vec![&e, b], vec![&z, &e]])?)
    }

    /// `[[0, -E], [E, 0]]`, acting as `Z ↦ -Z^{-1}`.
    pub fn inversion(n: usize) -> Self {
        SymplecticElement { m: j_form(n).transpose() }
    }

    /// `[[U, 0], [0, ᵗU^{-1}]]`, acting as `Z ↦ U Z ᵗU`.
    pub fn rotation(u: &MatQ) -> Result<Self> {
        let n = u.rows();
        let ut_inv = u.inverse()?.transpose();
        let z = MatQ::zeros(n, n);
        Self::new(MatQ::from_blocks(&[vec![u, &z], vec![&z, &ut_inv]])?)
    }

    pub fn degree(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn matrix(&self) -> &MatQ {
        &self.m
    }

    pub fn a(&self) -> MatQ {
        let n = self.degree();
        self.m.block(0, 0, n, n)
    }

    pub fn b(&self) -> MatQ {
        let n = self.degree();
        self.m.block(0, n, n, n)
    }

    pub fn c(&self) -> MatQ {
        let n = self.degree();
        self.m.block(n, 0, n, n)
    }

    pub fn d(&self) -> MatQ {
        let n = self.degree();
        self.m.block(n, n, n, n)
    }

    pub fn is_integral(&self) -> bool {
        self.m.is_integral()
    }

    pub fn compose(&self, other: &SymplecticElement) -> Result<SymplecticElement> {
        if self.degree() != other.degree() {
            return Err(Error::Dimension("symplectic elements of different degree".into()));
        }
        // Closed under products; no recheck needed.
        Ok(SymplecticElement { m: &self.m * &other.m })
    }

    /// `M^{-1} = [[ᵗD, -ᵗB], [-ᵗC, ᵗA]]`.
    pub fn inverse(&self) -> SymplecticElement {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let m = MatQ::from_blocks(&[vec![&d.transpose(), &(-&b.transpose())], vec![&(-&c.transpose()), &a.transpose()]])
            .expect("block shapes agree");
        SymplecticElement { m }
    }

    /// Automorphic factor `j(M, Z) = CZ + D`.
    pub fn j_factor(&self, z: &SiegelPoint) -> Result<MatC> {
        self.check_degree(z.degree())?;
        Ok(&(&self.c().to_c64() * z.matrix()) + &self.d().to_c64())
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n != self.degree() {
            return Err(Error::Dimension(format!("element of degree {} applied to a point of degree {n}", self.degree())));
        }
        Ok(())
    }
}

/// `M<Z> = (AZ+B)(CZ+D)^{-1}`, revalidated as a Siegel point.
pub fn siegel_action(m: &SymplecticElement, z: &SiegelPoint) -> Result<SiegelPoint> {
    m.check_degree(z.degree())?;
    let img = mobius(&m.a().to_c64(), &m.b().to_c64(), &m.c().to_c64(), &m.d().to_c64(), z.matrix())?;
    SiegelPoint::new(img)
}

/// Exact Möbius action on a Gaussian-rational point.
pub fn siegel_action_exact(m: &SymplecticElement, z: &MatG) -> Result<MatG> {
    m.check_degree(z.rows())?;
    mobius(&m.a().to_gauss(), &m.b().to_gauss(), &m.c().to_gauss(), &m.d().to_gauss(), z)
}

/// Scalar shorthand used throughout the degree-one code paths.
pub fn j_factor_scalar(m: &SymplecticElement, z: Complex64) -> Complex64 {
    let c = crate::scalar::rat_to_f64(&m.c()[(0, 0)]);
    let d = crate::scalar::rat_to_f64(&m.d()[(0, 0)]);
    z * c + d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basic_symplectic_checks() {
        assert!(symplectic_check(&j_form(1)).unwrap());
        assert!(symplectic_check(&MatQ::identity(2)).unwrap());
        assert!(symplectic_check(&MatQ::identity(4)).unwrap());
        let bad = MatQ::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(!symplectic_check(&bad).unwrap());
        assert!(matches!(symplectic_check(&MatQ::identity(3)), Err(Error::Dimension(_))));
        assert!(matches!(symplectic_check(&MatQ::zeros(2, 4)), Err(Error::Dimension(_))));
    }

    #[test]
    fn generator_words_stay_symplectic() {
        let t = SymplecticElement::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let s = SymplecticElement::from_i64_rows(&[&[0, 1], &[-1, 0]]).unwrap();
        let mut w = SymplecticElement::identity(1);
        for g in [&t, &s, &t, &t, &s, &s, &t] {
            w = w.compose(g).unwrap();
            assert!(symplectic_check(w.matrix()).unwrap());
        }
        assert_eq!(w.compose(&w.inverse()).unwrap(), SymplecticElement::identity(1));
    }

    #[test]
    fn action_examples() {
        let i = SiegelPoint::scalar(c(0.0, 1.0)).unwrap();
        let id = SymplecticElement::identity(1);
        assert!(siegel_action(&id, &i).unwrap().matrix().max_abs_diff(i.matrix()) < 1e-15);
        let s = SymplecticElement::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap();
        assert!(siegel_action(&s, &i).unwrap().matrix().max_abs_diff(i.matrix()) < 1e-15);
        let t = SymplecticElement::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let img = siegel_action(&t, &i).unwrap();
        assert!((img.matrix()[(0, 0)] - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn degree_two_generators() {
        let b = MatQ::from_i64_rows(&[&[1, 2], &[2, -1]]).unwrap();
        let t = SymplecticElement::translation(&b).unwrap();
        let u = MatQ::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let r = SymplecticElement::rotation(&u).unwrap();
        let s = SymplecticElement::inversion(2);
        let w = t.compose(&r).unwrap().compose(&s).unwrap();
        assert!(w.is_integral());
        assert_eq!(w.degree(), 2);
        assert!(SymplecticElement::translation(&MatQ::from_i64_rows(&[&[0, 1], &[0, 0]]).unwrap()).is_err());
        assert_eq!(SymplecticElement::inversion(1).c()[(0, 0)], rat_int(1));
    }
}
