use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::index::HalfIntegralIndex;
use crate::error::{Error, Result};
use crate::json::{mat_c_to_json, mat_q_to_json};
use crate::matgroup::{JacobiDomainPoint, JacobiElement};
use crate::report::{Case, Evaluated, VerificationReport};

/// Scalar weight `ρ = det^k` together with the index `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlashType {
    pub weight: i32,
    pub index: HalfIntegralIndex,
}

/// `(f|_{k,M}[g])(Z, W)`:
/// `exp(−2πi σ(M[W+λZ+μ](CZ+D)^{-1}C)) · exp(2πi σ(M(λZᵗλ + 2λᵗW + κ + μᵗλ)))
///  · det(CZ+D)^{-k} · f(g·(Z, W))`, with `M[X] = ᵗX M X`.
pub fn slash_action<F>(f: &F, ty: &SlashType, g: &JacobiElement, p: &JacobiDomainPoint) -> Result<Evaluated>
where
    F: Fn(&JacobiDomainPoint) -> Result<Evaluated> + ?Sized,
{
    if ty.index.size() != g.index_size() || p.index_size() != g.index_size() {
        return Err(Error::Dimension("index size of form, element and point disagree".into()));
    }
    let mm = ty.index.matrix().to_c64();
    let (z, w) = (p.z.matrix(), &p.w);
    let lambda = g.h.lambda.to_c64();
    let mu = g.h.mu.to_c64();
    let kappa = g.h.kappa.to_c64();
    let c = g.m.c().to_c64();
    let czd = g.m.j_factor(&p.z)?;

    let x = &(w + &(&lambda * z)) + &mu;
    let mx = &(&x.transpose() * &mm) * &x;
    // M[X](CZ+D)^{-1}C = M[X] · solve(CZ+D, C)
    let first = mx.checked_mul(&czd.solve(&c)?)?.trace();

    let inner = &(&(&(&lambda * z) * &lambda.transpose()) + &(&lambda * &w.transpose()).scale(&Complex64::new(2.0, 0.0)))
        + &(&kappa + &(&mu * &lambda.transpose()));
    let second = (&mm * &inner).trace();

    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let factor = (two_pi_i * (second - first)).exp() * czd.det()?.powi(-ty.weight);
    Ok(f(&g.act(p)?)?.scale(factor))
}

/// Max over generators and points of `|(f|[γ])(p) − f(p)|`.
pub fn jacobi_invariance_check<F>(
    f: &F,
    ty: &SlashType,
    generators: &[(String, JacobiElement)],
    points: &[JacobiDomainPoint],
    tol: f64,
) -> Result<VerificationReport>
where
    F: Fn(&JacobiDomainPoint) -> Result<Evaluated> + ?Sized,
{
    let mut cases = Vec::new();
    for p in points {
        let base = f(p)?;
        for (label, g) in generators {
            let slashed = slash_action(f, ty, g, p)?;
            cases.push(Case {
                label: label.clone(),
                element: json!({
                    "M": mat_q_to_json(g.m.matrix()),
                    "lambda": mat_q_to_json(&g.h.lambda),
                    "mu": mat_q_to_json(&g.h.mu),
                    "kappa": mat_q_to_json(&g.h.kappa),
                }),
                point: json!({"Z": mat_c_to_json(p.z.matrix()), "W": mat_c_to_json(&p.w)}),
                lhs: Some([slashed.value.re, slashed.value.im]),
                rhs: Some([base.value.re, base.value.im]),
                residual: (slashed.value - base.value).norm(),
                tail: slashed.tail + base.tail,
            });
        }
    }
    Ok(VerificationReport::from_cases(
        "jacobi-invariance",
        cases,
        tol,
        json!({"weight": ty.weight, "index": mat_q_to_json(ty.index.matrix())}),
    ))
}
