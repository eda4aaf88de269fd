use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{MatC, Matrix};
use crate::scalar::Scalar;

/// A point `Z` of the Siegel upper half space `H_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    z: MatC,
    min_imag_eigenvalue: f64,
}

impl SiegelPoint {
    /// Smallest admissible eigenvalue of `Im Z`.
    pub const MIN_EIGENVALUE: f64 = 1e-10;
    /// Relative asymmetry beyond which input is rejected instead of symmetrized.
    const SYMMETRY_SLACK: f64 = 1e-8;

    pub fn new(z: MatC) -> Result<Self> {
        if !z.is_square() || z.rows() == 0 {
            return Err(Error::Dimension(format!("Siegel point must be square, got {:?}", z.shape())));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidPoint("non-finite entry".into()));
        }
        let sym = z.symmetrized();
        if z.max_abs_diff(&sym) > Self::SYMMETRY_SLACK * z.max_magnitude().max(1.0) {
            return Err(Error::InvalidPoint("Z is not symmetric".into()));
        }
        let min_eig = min_symmetric_eigenvalue(&sym.im());
        if !(min_eig > Self::MIN_EIGENVALUE) {
            return Err(Error::InvalidPoint(format!("smallest eigenvalue of Im Z is {min_eig:.3e}, need > {:.0e}", Self::MIN_EIGENVALUE)));
        }
        Ok(SiegelPoint { z: sym, min_imag_eigenvalue: min_eig })
    }

    pub fn scalar(z: Complex64) -> Result<Self> {
        Self::new(MatC::from_vec(1, 1, vec![z])?)
    }

    /// `i·E_n`.
    pub fn imaginary_unit(n: usize) -> Self {
        Self::new(MatC::identity(n).scale(&Complex64::i())).expect("i·E is a Siegel point")
    }

    pub fn degree(&self) -> usize {
        self.z.rows()
    }

    pub fn matrix(&self) -> &MatC {
        &self.z
    }

    /// Smallest eigenvalue of `Im Z`.
    pub fn min_imag_eigenvalue(&self) -> f64 {
        self.min_imag_eigenvalue
    }
}

/// A point `(Z, W)` of `H_n × C^{(m,n)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiDomainPoint {
    pub z: SiegelPoint,
    pub w: MatC,
}

impl JacobiDomainPoint {
    pub fn new(z: SiegelPoint, w: MatC) -> Result<Self> {
        if w.cols() != z.degree() {
            return Err(Error::Dimension(format!("W has {} columns but Z has degree {}", w.cols(), z.degree())));
        }
        if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidPoint("non-finite entry in W".into()));
        }
        Ok(JacobiDomainPoint { z, w })
    }

    /// Scalar point for `n = m = 1`.
    pub fn scalar(z: Complex64, w: Complex64) -> Result<Self> {
        Self::new(SiegelPoint::scalar(z)?, MatC::from_vec(1, 1, vec![w])?)
    }

    pub fn degree(&self) -> usize {
        self.z.degree()
    }

    pub fn index_size(&self) -> usize {
        self.w.rows()
    }
}

pub(crate) fn min_symmetric_eigenvalue(m: &Matrix<f64>) -> f64 {
    if m.rows() == 1 {
        return m[(0, 0)];
    }
    let eig = nalgebra::SymmetricEigen::new(m.to_nalgebra());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `(A Z + B)(C Z + D)^{-1}` over any scalar field, no validity checks.
pub fn mobius<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, d: &Matrix<T>, z: &Matrix<T>) -> Result<Matrix<T>> {
    let num = a.checked_mul(z)?.checked_add(b)?;
    let den = c.checked_mul(z)?.checked_add(d)?;
    // X·den = num  ⇔  ᵗden·ᵗX = ᵗnum
    let xt = den.transpose().solve(&num.transpose()).map_err(|e| match e {
        Error::Singular(_) => Error::Singular("CZ + D is singular".into()),
        other => other,
    })?;
    Ok(xt.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_points_off_the_half_space() {
        assert!(SiegelPoint::scalar(Complex64::new(0.0, 1.0)).is_ok());
        assert!(SiegelPoint::scalar(Complex64::new(0.0, 0.0)).is_err());
        assert!(SiegelPoint::scalar(Complex64::new(1.0, -1.0)).is_err());
        assert!(SiegelPoint::scalar(Complex64::new(f64::NAN, 1.0)).is_err());
        let z = MatC::from_rows(vec![
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)],
            vec![Complex64::new(0.0, 2.0), Complex64::new(0.0, 1.0)],
        ])
        .unwrap();
        assert!(matches!(SiegelPoint::new(z), Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn symmetrizes_roundoff() {
        let z = MatC::from_rows(vec![
            vec![Complex64::new(0.1, 1.0), Complex64::new(0.2, 0.1)],
            vec![Complex64::new(0.2 + 1e-15, 0.1), Complex64::new(0.0, 2.0)],
        ])
        .unwrap();
        let p = SiegelPoint::new(z).unwrap();
        assert_eq!(p.matrix()[(0, 1)], p.matrix()[(1, 0)]);
        assert!(p.min_imag_eigenvalue() > 0.9);
    }

    #[test]
    fn domain_point_dimension_check() {
        let z = SiegelPoint::imaginary_unit(2);
        assert!(JacobiDomainPoint::new(z.clone(), MatC::zeros(3, 2)).is_ok());
        assert!(JacobiDomainPoint::new(z, MatC::zeros(2, 3)).is_err());
    }
}
