//! Vector-valued modular forms obtained from Jacobi forms by applying
//! pluriharmonic differential operators in `W` and restricting to `W = 0`,
//! together with numerical checks of their transformation laws.

mod checks;

pub use checks::{identity_i_check, identity_ii_check, main_theorem_check};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{eisenstein_lift_eval, EisensteinSpec, HalfIntegralIndex, PolyGrowth, ThetaForm, TruncationPolicy};
use crate::matgroup::SiegelPoint;
use crate::matrix::MatC;
use crate::polyharm::{is_pluriharmonic, ApproxPoly, ExactPoly, PluriharmonicBasis, QuadFormS};
use crate::report::Evaluated;
use crate::scalar::rat_to_f64;

/// The Jacobi form being lifted.
#[derive(Clone, Debug)]
pub enum LiftSource {
    Theta(ThetaForm),
    /// Degree one only.
    Eisenstein(EisensteinSpec),
}

impl LiftSource {
    pub fn index(&self) -> &HalfIntegralIndex {
        match self {
            LiftSource::Theta(t) => t.index(),
            LiftSource::Eisenstein(e) => e.index(),
        }
    }

    pub fn weight(&self) -> i32 {
        match self {
            LiftSource::Theta(t) => t.weight(),
            LiftSource::Eisenstein(e) => e.weight(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            LiftSource::Theta(t) => t.degree(),
            LiftSource::Eisenstein(_) => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftSpec {
    source: LiftSource,
    basis: PluriharmonicBasis,
    weight: i32,
    policy: TruncationPolicy,
}

impl LiftSpec {
    /// Requires `basis.s` to equal `(2M)^{-1}` exactly and the basis to live
    /// on `m×n` matrices matching the source.
    pub fn new(source: LiftSource, basis: PluriharmonicBasis, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        basis.validate()?;
        let expected = source.index().lift_form()?;
        if basis.s.s() != &expected {
            return Err(Error::InvalidInput("basis form S must equal (2M)^{-1} for the source index".into()));
        }
        if basis.shape() != (source.index().size(), source.degree()) {
            return Err(Error::Dimension(format!(
                "basis lives on {:?} matrices, source needs ({}, {})",
                basis.shape(),
                source.index().size(),
                source.degree()
            )));
        }
        let weight = source.weight();
        Ok(LiftSpec { source, basis, weight, policy })
    }

    /// Same data with the scalar weight replaced; used for negative controls.
    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        self.policy = policy;
        Ok(self)
    }

    pub fn source(&self) -> &LiftSource {
        &self.source
    }

    pub fn basis(&self) -> &PluriharmonicBasis {
        &self.basis
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    fn form(&self) -> QuadFormS {
        self.basis.s.clone()
    }
}

/// Coordinates of `f_τ(Z)`, one per basis polynomial in basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftValue {
    pub values: Vec<Evaluated>,
}

impl LiftValue {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coords(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.value).collect()
    }
}

/// `f_P(Z) = P(∂_W) f(Z, W)|_{W=0}` for a homogeneous pluriharmonic `P`.
pub fn lift_fp(spec: &LiftSpec, p: &ExactPoly, z: &SiegelPoint) -> Result<Evaluated> {
    check_pluriharmonic(&spec.form(), p, spec.basis.shape())?;
    lift_eval(spec, &p.to_approx(), None, z)
}

/// `f_τ(Z)` in the basis carried by `spec`.
pub fn lift_ftau(spec: &LiftSpec, z: &SiegelPoint) -> Result<LiftValue> {
    let values = spec.basis.approx_elements().iter().map(|p| lift_eval(spec, p, None, z)).collect::<Result<_>>()?;
    Ok(LiftValue { values })
}

pub(crate) fn check_pluriharmonic(s: &QuadFormS, p: &ExactPoly, shape: (usize, usize)) -> Result<()> {
    if p.shape() != shape {
        return Err(Error::Dimension(format!("polynomial lives on {:?} matrices, expected {shape:?}", p.shape())));
    }
    if !p.is_zero() && p.homogeneous_degree().is_none() {
        return Err(Error::InvalidInput("polynomial must be homogeneous".into()));
    }
    if !is_pluriharmonic(s, p)? {
        return Err(Error::InvalidInput("polynomial is not pluriharmonic for (2M)^{-1}".into()));
    }
    Ok(())
}

/// `f_P` with the polynomial argument multiplied on the right by `a`
/// (`P(X a)` in place of `P(X)`).
pub(crate) fn lift_eval(spec: &LiftSpec, p: &ApproxPoly, a: Option<&MatC>, z: &SiegelPoint) -> Result<Evaluated> {
    match &spec.source {
        LiftSource::Theta(th) => theta_derivative(th, p, a, z, None, &spec.policy),
        LiftSource::Eisenstein(e) => {
            if z.degree() != 1 {
                return Err(Error::Dimension("Eisenstein lifts are implemented for degree one".into()));
            }
            let x = match a {
                Some(a) => Complex64::new(1.0, 0.0) / a[(0, 0)],
                None => Complex64::new(1.0, 0.0),
            };
            let v = eisenstein_lift_eval(e, p, z.matrix()[(0, 0)], x, &spec.policy)?;
            Ok(Evaluated::new(v.value, v.tail_estimate))
        }
    }
}

/// Termwise `P(∂_W) θ(Z, W)` with every derivative taken analytically:
/// `Σ_λ P(2πi R a) e^{πiσ(QZ) + 2πiσ(RᵗW)}`, `R = ᵗcSλ`.
///
/// No pluriharmonicity is required here; at `w = None` this is the lift
/// `f_P(Z)`. Fails with [`Error::TailBudget`] when the majorant for the
/// omitted shells exceeds `policy.eps`.
pub fn theta_derivative(
    th: &ThetaForm,
    p: &ApproxPoly,
    a: Option<&MatC>,
    z: &SiegelPoint,
    w: Option<&MatC>,
    policy: &TruncationPolicy,
) -> Result<Evaluated> {
    policy.validate()?;
    let (m, n) = (th.index_size(), th.degree());
    if p.shape() != (m, n) || z.degree() != n {
        return Err(Error::Dimension(format!(
            "theta of shape ({m}, {n}) with polynomial on {:?} at a point of degree {}",
            p.shape(),
            z.degree()
        )));
    }
    if let Some(a) = a {
        if a.shape() != (n, n) {
            return Err(Error::Dimension("right factor must be n×n".into()));
        }
    }
    if let Some(w) = w {
        if w.shape() != (m, n) {
            return Err(Error::Dimension("W must be m×n".into()));
        }
    }
    let growth = growth_of(th, p, a);
    let beta = w.map_or(0.0, |w| th.beta(w));
    let radius = policy.r_max.floor() as i64;
    let tail = th.tail_bound(radius, z.min_imag_eigenvalue(), beta, growth);
    if tail > policy.eps {
        return Err(Error::TailBudget { bound: tail, budget: policy.eps });
    }
    let exp = th.expansion(radius);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let value = exp.sum(radius, z.matrix(), w, |t| {
        let r = MatC::from_fn(m, n, |i, j| Complex64::new(t.r[i * n + j] as f64, 0.0) * two_pi_i);
        let arg = match a {
            Some(a) => &r * a,
            None => r,
        };
        p.eval(&arg).expect("shape checked above")
    });
    Ok(Evaluated::new(value, tail))
}

/// `|P(2πi R a)| ≤ l1 · max(1, amp √r)^deg`, using
/// `|R_kl| ≤ sqrt((ᵗcSc)_kk · r)` on the shell of norm `r`.
pub(crate) fn growth_of(th: &ThetaForm, p: &ApproxPoly, a: Option<&MatC>) -> PolyGrowth {
    let mm = th.index().matrix();
    let max_diag = (0..mm.rows()).map(|k| 2.0 * rat_to_f64(&mm[(k, k)])).fold(0.0, f64::max);
    let right = a.map_or(1.0, |a| a.rows() as f64 * a.max_magnitude());
    PolyGrowth { l1: p.l1_norm(), degree: p.degree().unwrap_or(0), amp: 2.0 * PI * max_diag.sqrt() * right }
}

/// Smallest theta radius whose tail for `p` stays within `eps` at every point.
pub fn theta_radius_for(th: &ThetaForm, p: &ApproxPoly, a: Option<&MatC>, y_min: f64, eps: f64) -> Result<i64> {
    th.radius_for(y_min, 0.0, growth_of(th, p, a), eps)
}
