use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matgroup::{pd_check_exact, psd_check_exact};
use crate::matrix::MatQ;
use crate::scalar::Rat;

/// Symmetric half-integral positive semidefinite index `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfIntegralIndex {
    m: MatQ,
}

impl HalfIntegralIndex {
    pub fn new(m: MatQ) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 || !m.is_symmetric() {
            return Err(Error::InvalidInput("index must be a nonempty symmetric matrix".into()));
        }
        let two = Rat::from_integer(2.into());
        let doubled = m.scale(&two);
        if !doubled.is_integral() || (0..m.rows()).any(|i| !m[(i, i)].is_integer()) {
            return Err(Error::InvalidInput("index must be half-integral".into()));
        }
        if !psd_check_exact(&m)? {
            return Err(Error::InvalidInput("index must be positive semidefinite".into()));
        }
        Ok(HalfIntegralIndex { m })
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        Self::new(MatQ::from_i64_rows(&[&[v]])?)
    }

    pub fn matrix(&self) -> &MatQ {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn is_positive_definite(&self) -> bool {
        pd_check_exact(&self.m).unwrap_or(false)
    }

    /// `S = (2M)^{-1}`, the form the lift's polynomials must be pluriharmonic for.
    pub fn lift_form(&self) -> Result<MatQ> {
        if self.m.det()?.is_zero() {
            return Err(Error::InvalidInput("index is singular".into()));
        }
        self.m.scale(&Rat::from_integer(2.into())).inverse()
    }
}

/// Truncation parameters for series evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Lattice norm bound `σ(ᵗλSλ) ≤ r_max` for theta series (may be zero).
    pub r_max: f64,
    /// Coset window `|cZ + d| ≤ c_max` for Eisenstein series.
    pub c_max: f64,
    /// Box `|λ_i| ≤ l_max` for Eisenstein series.
    pub l_max: i64,
    /// Largest acceptable theta tail bound.
    pub eps: f64,
}

impl TruncationPolicy {
    pub fn new(r_max: f64, c_max: f64, l_max: i64, eps: f64) -> Result<Self> {
        let p = TruncationPolicy { r_max, c_max, l_max, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        let radius_ok = self.r_max.is_finite() && self.r_max >= 0.0;
        if !radius_ok || !finite_pos(self.c_max) || self.l_max <= 0 || !finite_pos(self.eps) {
            return Err(Error::InvalidInput(format!("truncation bounds out of range: {self:?}")));
        }
        Ok(())
    }

    /// Both Eisenstein bounds doubled, for self-convergence checks.
    pub fn doubled(&self) -> Self {
        TruncationPolicy { r_max: self.r_max * 2.0, c_max: self.c_max * 2.0, l_max: self.l_max * 2, eps: self.eps }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { r_max: 40.0, c_max: 30.0, l_max: 60, eps: 1e-9 }
    }
}
