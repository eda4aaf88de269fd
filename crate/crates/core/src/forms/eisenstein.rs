use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use super::index::{HalfIntegralIndex, TruncationPolicy};
use crate::error::{Error, Result};
use crate::matgroup::SymplecticElement;
use crate::polyharm::ApproxPoly;
use crate::scalar::rat_to_f64;

/// Degree-one Eisenstein series `E_{k,M}` of even weight `k > m + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EisensteinSpec {
    weight: i32,
    index: HalfIntegralIndex,
}

impl EisensteinSpec {
    pub fn new(weight: i32, index: HalfIntegralIndex) -> Result<Self> {
        let m = index.size() as i32;
        if weight % 2 != 0 || weight < 4 || weight <= m + 2 {
            return Err(Error::InvalidInput(format!("weight must be even with k > m + 2, got k = {weight}, m = {m}")));
        }
        if !index.is_positive_definite() {
            return Err(Error::InvalidInput("Eisenstein index must be positive definite".into()));
        }
        Ok(EisensteinSpec { weight, index })
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn index(&self) -> &HalfIntegralIndex {
        &self.index
    }

    pub fn index_size(&self) -> usize {
        self.index.size()
    }
}

/// Coset representative `[[a, b], [c, d]]` of `Γ_{1,0} \ Γ_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coset {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Coset {
    /// Bottom row normalised to `c > 0`, or `(0, 1)`; this identifies the coset.
    pub fn key(c: i64, d: i64) -> (i64, i64) {
        if c < 0 || (c == 0 && d < 0) {
            (-c, -d)
        } else {
            (c, d)
        }
    }

    /// Key of the coset of `γ·M`.
    pub fn times_key(&self, m: &SymplecticElement) -> Result<(i64, i64)> {
        let g = self.times(m)?;
        Ok(Self::key(g.c, g.d))
    }

    /// The representative `γ·M` for an integral `2×2` element `M`.
    pub fn times(&self, m: &SymplecticElement) -> Result<Coset> {
        if m.degree() != 1 {
            return Err(Error::Dimension("coset reindexing needs a 2x2 element".into()));
        }
        let e = |r: usize, c: usize| -> Result<i64> {
            let v = &m.matrix()[(r, c)];
            if !v.is_integer() {
                return Err(Error::InvalidElement("coset reindexing needs an integral element".into()));
            }
            i64::try_from(v.to_integer()).map_err(|_| Error::InvalidElement("entry too large".into()))
        };
        let (ma, mb, mc, md) = (e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?);
        Ok(Coset { a: self.a * ma + self.b * mc, b: self.a * mb + self.b * md, c: self.c * ma + self.d * mc, d: self.c * mb + self.d * md })
    }

    pub fn key_of(&self) -> (i64, i64) {
        Self::key(self.c, self.d)
    }

    pub fn j(&self, z: Complex64) -> Complex64 {
        z * self.c as f64 + self.d as f64
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        (z * self.a as f64 + self.b as f64) / self.j(z)
    }
}

/// `(a, b)` with `ad − bc = 1` and minimal `|b|`, then shifted by
/// `shift·(c, d)`, which stays in the same coset.
pub fn completion(c: i64, d: i64, shift: i64) -> Result<Coset> {
    let (a, b) = if c == 0 {
        if d != 1 {
            return Err(Error::InvalidInput("the c = 0 coset is represented by d = 1".into()));
        }
        (1, 0)
    } else {
        let g = d.extended_gcd(&c);
        if g.gcd != 1 {
            return Err(Error::InvalidInput(format!("({c}, {d}) is not coprime")));
        }
        // a·d + y·c = 1, so b = −y satisfies ad − bc = 1.
        let (mut a, mut b) = (g.x, -g.y);
        if d != 0 {
            // (a, b) ↦ (a + t c, b + t d) keeps the determinant; centre b.
            let t = (-(b as f64) / d as f64).round() as i64;
            a += t * c;
            b += t * d;
        }
        (a, b)
    };
    let out = Coset { a: a + shift * c, b: b + shift * d, c, d };
    debug_assert_eq!(out.a * out.d - out.b * out.c, 1);
    if out.a * out.d - out.b * out.c != 1 {
        return Err(Error::InvalidInput("coset completion failed".into()));
    }
    Ok(out)
}

/// Coset representatives with `|cz + d| ≤ c_max`, ordered by `(c, d)`.
pub fn coset_window(z: Complex64, c_max: f64, shift: i64) -> Result<Vec<Coset>> {
    if z.im <= 0.0 {
        return Err(Error::InvalidPoint("z must lie in the upper half plane".into()));
    }
    let mut out = Vec::new();
    if c_max >= 1.0 {
        out.push(completion(0, 1, shift)?);
    }
    let c_top = (c_max / z.im).floor() as i64;
    for c in 1..=c_top {
        let centre = -(c as f64) * z.re;
        let lo = (centre - c_max).ceil() as i64;
        let hi = (centre + c_max).floor() as i64;
        for d in lo..=hi {
            if c.gcd(&d) != 1 {
                continue;
            }
            let cos = Coset { a: 0, b: 0, c, d };
            if cos.j(z).norm() <= c_max {
                out.push(completion(c, d, shift)?);
            }
        }
    }
    Ok(out)
}

/// A truncated Eisenstein sum with a heuristic tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinValue {
    pub value: Complex64,
    pub tail_estimate: f64,
    pub terms_used: u64,
    pub cosets: usize,
}

fn lambda_box(m: usize, l_max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-l_max..=l_max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// What is summed against each `(γ, λ)`.
enum Summand<'a> {
    /// `exp(2πi c ᵗwMw/j) · exp(4πi ᵗλMw/j)` for a given `w`.
    Point(&'a [Complex64]),
    /// `P(4πi Mλ / (j·x))` for a given extra factor `x`.
    Lift(&'a ApproxPoly, Complex64),
}

fn coset_sum(
    spec: &EisensteinSpec,
    z: Complex64,
    policy: &TruncationPolicy,
    cosets: &[Coset],
    summand: Summand<'_>,
) -> Result<EisensteinValue> {
    policy.validate()?;
    if z.im <= 0.0 {
        return Err(Error::InvalidPoint("z must lie in the upper half plane".into()));
    }
    let m = spec.index_size();
    let mm: Vec<f64> = spec.index.matrix().iter().map(rat_to_f64).collect();
    let lambdas = lambda_box(m, policy.l_max);
    let quad: Vec<f64> = lambdas
        .iter()
        .map(|l| (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| l[i] as f64 * mm[i * m + j] * l[j] as f64).sum())
        .collect();
    let m_lambda: Vec<Vec<f64>> =
        lambdas.iter().map(|l| (0..m).map(|i| (0..m).map(|j| mm[i * m + j] * l[j] as f64).sum()).collect()).collect();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let shell_radius = policy.c_max / std::f64::consts::SQRT_2;

    let mut value = Complex64::new(0.0, 0.0);
    let mut coset_shell = 0.0;
    let mut lambda_shell = 0.0;
    for cos in cosets {
        let j = cos.j(z);
        let gz = cos.act(z);
        let pre = j.powi(-spec.weight);
        let (pre, linear) = match &summand {
            Summand::Point(w) => {
                let wmw: Complex64 = (0..m).flat_map(|i| (0..m).map(move |k| (i, k))).map(|(i, k)| w[i] * mm[i * m + k] * w[k]).sum();
                (pre * (two_pi_i * wmw * cos.c as f64 / j).exp(), Some(w))
            }
            Summand::Lift(..) => (pre, None),
        };
        let mut inner = Complex64::new(0.0, 0.0);
        let mut edge = 0.0;
        for (idx, l) in lambdas.iter().enumerate() {
            let mut arg = gz * quad[idx];
            let mut weight = Complex64::new(1.0, 0.0);
            match (&summand, linear) {
                (Summand::Point(_), Some(w)) => {
                    let lw: Complex64 = (0..m).map(|i| w[i] * m_lambda[idx][i]).sum();
                    arg += lw * 2.0 / j;
                }
                (Summand::Lift(p, x), _) => {
                    let scale = Complex64::new(0.0, 4.0 * PI) / (j * x);
                    let pt: Vec<Complex64> = m_lambda[idx].iter().map(|v| scale * v).collect();
                    weight = p.eval(&crate::matrix::MatC::from_vec(m, 1, pt)?)?;
                }
                _ => {}
            }
            let term = weight * (two_pi_i * arg).exp();
            inner += term;
            if l.iter().any(|x| x.abs() == policy.l_max) {
                edge += term.norm();
            }
        }
        let contribution = pre * inner;
        value += contribution;
        lambda_shell += pre.norm() * edge;
        if j.norm() > shell_radius {
            coset_shell += contribution.norm();
        }
    }
    Ok(EisensteinValue {
        value,
        tail_estimate: coset_shell + lambda_shell,
        terms_used: (cosets.len() * lambdas.len()) as u64,
        cosets: cosets.len(),
    })
}

/// `E_{k,M}(z, w) = Σ_γ j^{-k} e^{2πi c ᵗwMw / j} Σ_λ e^{2πi(γ<z> ᵗλMλ + 2 ᵗλMw / j)}`.
pub fn eisenstein_eval(spec: &EisensteinSpec, z: Complex64, w: &[Complex64], policy: &TruncationPolicy) -> Result<EisensteinValue> {
    eisenstein_eval_shifted(spec, z, w, policy, 0)
}

/// As [`eisenstein_eval`] with coset completions `(a, b) + shift·(c, d)`.
pub fn eisenstein_eval_shifted(
    spec: &EisensteinSpec,
    z: Complex64,
    w: &[Complex64],
    policy: &TruncationPolicy,
    shift: i64,
) -> Result<EisensteinValue> {
    if w.len() != spec.index_size() {
        return Err(Error::Dimension(format!("W must have {} entries", spec.index_size())));
    }
    let cosets = coset_window(z, policy.c_max, shift)?;
    coset_sum(spec, z, policy, &cosets, Summand::Point(w))
}

/// Termwise `P(∂_W) E |_{W=0}` with the polynomial argument divided by an
/// extra factor `x`: `Σ_γ j^{-k} Σ_λ P(4πi Mλ / (j x)) e^{2πi γ<z> ᵗλMλ}`.
pub fn eisenstein_lift_eval(
    spec: &EisensteinSpec,
    p: &ApproxPoly,
    z: Complex64,
    x: Complex64,
    policy: &TruncationPolicy,
) -> Result<EisensteinValue> {
    let cosets = coset_window(z, policy.c_max, 0)?;
    eisenstein_lift_eval_on(spec, p, z, x, &cosets, policy)
}

/// As [`eisenstein_lift_eval`] but summed over the given representatives
/// instead of the window around `z`.
pub fn eisenstein_lift_eval_on(
    spec: &EisensteinSpec,
    p: &ApproxPoly,
    z: Complex64,
    x: Complex64,
    cosets: &[Coset],
    policy: &TruncationPolicy,
) -> Result<EisensteinValue> {
    if p.shape() != (spec.index_size(), 1) {
        return Err(Error::Dimension("polynomial must live on m×1 matrices".into()));
    }
    if x.norm() == 0.0 || !x.is_finite() {
        return Err(Error::InvalidInput("scaling factor must be finite and nonzero".into()));
    }
    coset_sum(spec, z, policy, cosets, Summand::Lift(p, x))
}
