use std::collections::BTreeSet;

use num_complex::Complex64;
use serde_json::json;

use super::{check_pluriharmonic, lift_eval, theta_derivative, LiftSpec};
use crate::error::{Error, Result};
use crate::forms::{coset_window, eisenstein_lift_eval_on, Coset, EisensteinSpec, ThetaForm, TruncationPolicy};
use crate::json::{complex_to_json, mat_c_to_json, mat_q_to_json};
use crate::matgroup::{j_factor_scalar, siegel_action, SiegelPoint, SymplecticElement};
use crate::polyharm::{express_in_basis, gl_action, ExactPoly, QuadFormS};
use crate::report::{Case, VerificationReport};

fn require_integral(label: &str, m: &SymplecticElement) -> Result<()> {
    if !m.is_integral() {
        return Err(Error::InvalidElement(format!("{label} is not integral")));
    }
    Ok(())
}

/// `A = ᵗ(CZ+D)^{-1}`, `M<Z>` and `det(CZ+D)^k`.
fn transport(m: &SymplecticElement, z: &SiegelPoint, k: i32) -> Result<(crate::matrix::MatC, SiegelPoint, Complex64)> {
    let czd = m.j_factor(z)?;
    let a = czd.inverse()?.transpose();
    let mz = siegel_action(m, z)?;
    Ok((a, mz, czd.det()?.powi(k)))
}

fn policy_json(p: &TruncationPolicy) -> serde_json::Value {
    json!({"r_max": p.r_max, "c_max": p.c_max, "l_max": p.l_max, "eps": p.eps})
}

/// For every basis polynomial `P_i`, expands `P̃_i = τ(ᵗ(CZ+D)^{-1}) P_i`
/// in the basis and compares `Σ_j coeff_j f_{P_j}(M<Z>)` with
/// `det(CZ+D)^k f_{P_i}(Z)`.
pub fn main_theorem_check(
    spec: &LiftSpec,
    elements: &[(String, SymplecticElement)],
    points: &[SiegelPoint],
    tol: f64,
) -> Result<VerificationReport> {
    let basis = spec.basis().approx_elements();
    let mut cases = Vec::new();
    for z in points {
        let at_z = basis.iter().map(|p| lift_eval(spec, p, None, z)).collect::<Result<Vec<_>>>()?;
        for (label, m) in elements {
            require_integral(label, m)?;
            let (a, mz, det_k) = transport(m, z, spec.weight())?;
            let at_mz = basis.iter().map(|p| lift_eval(spec, p, None, &mz)).collect::<Result<Vec<_>>>()?;
            for (i, p) in basis.iter().enumerate() {
                let coeffs = express_in_basis(&basis, &gl_action(&a, p)?)?;
                let mut lhs = Complex64::new(0.0, 0.0);
                let mut tail = det_k.norm() * at_z[i].tail;
                for (c, v) in coeffs.iter().zip(&at_mz) {
                    lhs += c * v.value;
                    tail += c.norm() * v.tail;
                }
                let rhs = det_k * at_z[i].value;
                cases.push(Case {
                    label: format!("{label} P{i}"),
                    element: mat_q_to_json(m.matrix()),
                    point: mat_c_to_json(z.matrix()),
                    lhs: Some([lhs.re, lhs.im]),
                    rhs: Some([rhs.re, rhs.im]),
                    residual: (lhs - rhs).norm(),
                    tail,
                });
            }
        }
    }
    Ok(VerificationReport::from_cases(
        "main-theorem",
        cases,
        tol,
        json!({
            "policy": policy_json(spec.policy()),
            "weight": spec.weight(),
            "degree": spec.basis().degree,
            "basis_dim": spec.basis().dim(),
        }),
    ))
}

/// `Σ_λ P(2πi ᵗcSλ ᵗ(CZ+D)^{-1}) e^{πiσ(Sλ M<Z> ᵗλ)}` against
/// `det(CZ+D)^k Σ_λ P(2πi ᵗcSλ) e^{πiσ(SλZᵗλ)}`, both as truncated sums.
pub fn identity_i_check(
    th: &ThetaForm,
    p: &ExactPoly,
    elements: &[(String, SymplecticElement)],
    points: &[SiegelPoint],
    policy: &TruncationPolicy,
    tol: f64,
) -> Result<VerificationReport> {
    let s = QuadFormS::new(th.index().lift_form()?)?;
    check_pluriharmonic(&s, p, (th.index_size(), th.degree()))?;
    let pa = p.to_approx();
    let mut cases = Vec::new();
    for z in points {
        let base = theta_derivative(th, &pa, None, z, None, policy)?;
        for (label, m) in elements {
            require_integral(label, m)?;
            let (a, mz, det_k) = transport(m, z, th.weight())?;
            let moved = theta_derivative(th, &pa, Some(&a), &mz, None, policy)?;
            let rhs = det_k * base.value;
            cases.push(Case {
                label: label.clone(),
                element: mat_q_to_json(m.matrix()),
                point: mat_c_to_json(z.matrix()),
                lhs: Some([moved.value.re, moved.value.im]),
                rhs: Some([rhs.re, rhs.im]),
                residual: (moved.value - rhs).norm(),
                tail: moved.tail + det_k.norm() * base.tail,
            });
        }
    }
    Ok(VerificationReport::from_cases(
        "identity-i",
        cases,
        tol,
        json!({"policy": policy_json(policy), "weight": th.weight(), "degree": p.homogeneous_degree()}),
    ))
}

/// Degree-one Eisenstein identity. The left side is
/// `j(M,z)^k Σ_{γ'} j(γ',z)^{-k} Σ_λ P(4πiMλ/j(γ',z)) e^{2πi γ'<z> ᵗλMλ}` over
/// the window around `z`; the right side sums
/// `j(γ,M<z>)^{-k} P(4πiMλ/(j(γ,M<z>) j(M,z))) e^{2πi γ<M<z>> ᵗλMλ}` over
/// `γ = γ'M^{-1}`, so both sides run over one coset set, matched by `γ ↦ γM`.
pub fn identity_ii_check(
    e: &EisensteinSpec,
    p: &ExactPoly,
    elements: &[(String, SymplecticElement)],
    points: &[Complex64],
    policy: &TruncationPolicy,
    tol: f64,
) -> Result<VerificationReport> {
    policy.validate()?;
    let s = QuadFormS::new(e.index().lift_form()?)?;
    check_pluriharmonic(&s, p, (e.index_size(), 1))?;
    let pa = p.to_approx();
    let one = Complex64::new(1.0, 0.0);
    let mut cases = Vec::new();
    let mut windows = Vec::new();
    for &z in points {
        let left_cosets = coset_window(z, policy.c_max, 0)?;
        let left = eisenstein_lift_eval_on(e, &pa, z, one, &left_cosets, policy)?;
        for (label, m) in elements {
            require_integral(label, m)?;
            if m.degree() != 1 {
                return Err(Error::Dimension("identity (II) is checked in degree one".into()));
            }
            let jm = j_factor_scalar(m, z);
            let mz = siegel_action(m, &SiegelPoint::scalar(z)?)?.matrix()[(0, 0)];
            let inv = m.inverse();
            let right_cosets = left_cosets.iter().map(|g| g.times(&inv)).collect::<Result<Vec<Coset>>>()?;
            let distinct: BTreeSet<_> = right_cosets.iter().map(Coset::key_of).collect();
            if distinct.len() != right_cosets.len() {
                return Err(Error::TruncationAsymmetry(format!("{label}: reindexed cosets are not distinct")));
            }
            for (g, orig) in right_cosets.iter().zip(&left_cosets) {
                if g.times_key(m)? != orig.key_of() {
                    return Err(Error::TruncationAsymmetry(format!("{label}: γ ↦ γM does not return the left window")));
                }
            }
            let natural: BTreeSet<_> = coset_window(mz, policy.c_max, 0)?.iter().map(Coset::key_of).collect();
            let right = eisenstein_lift_eval_on(e, &pa, mz, jm, &right_cosets, policy)?;
            let jk = jm.powi(e.weight());
            let lhs = jk * left.value;
            windows.push(json!({
                "label": label,
                "z": complex_to_json(z),
                "cosets": right_cosets.len(),
                "in_natural_window_at_Mz": distinct.intersection(&natural).count(),
            }));
            cases.push(Case {
                label: label.clone(),
                element: mat_q_to_json(m.matrix()),
                point: complex_to_json(z),
                lhs: Some([lhs.re, lhs.im]),
                rhs: Some([right.value.re, right.value.im]),
                residual: (lhs - right.value).norm(),
                tail: jk.norm() * left.tail_estimate + right.tail_estimate,
            });
        }
    }
    Ok(VerificationReport::from_cases(
        "identity-ii",
        cases,
        tol,
        json!({"policy": policy_json(policy), "weight": e.weight(), "windows": windows}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::HalfIntegralIndex;
    use crate::lift::LiftSource;
    use crate::matrix::MatQ;
    use crate::polyharm::{pluriharmonic_basis, SparsePoly};
    use crate::scalar::GaussRational;

    fn gens() -> Vec<(String, SymplecticElement)> {
        vec![
            ("T".into(), SymplecticElement::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap()),
            ("J".into(), SymplecticElement::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap()),
        ]
    }

    fn spec(d: u32) -> LiftSpec {
        let th = ThetaForm::e8_first_vector(1);
        let s = QuadFormS::new(th.index().lift_form().unwrap()).unwrap();
        LiftSpec::new(LiftSource::Theta(th), pluriharmonic_basis(&s, 1, d).unwrap(), TruncationPolicy { r_max: 40.0, ..Default::default() })
            .unwrap()
    }

    #[test]
    fn degree_zero_main_theorem_and_negative_control() {
        let z = [SiegelPoint::scalar(Complex64::new(0.0, 1.0)).unwrap(), SiegelPoint::scalar(Complex64::new(0.3, 1.1)).unwrap()];
        let r = main_theorem_check(&spec(0), &gens(), &z, 1e-7).unwrap();
        assert!(r.pass, "{}", r.max_residual);
        assert!(r.max_magnitude() > 0.5);
        let bad = main_theorem_check(&spec(0).with_weight(3), &gens(), &z, 1e-7).unwrap();
        assert!(bad.max_residual > 0.1);
    }

    #[test]
    fn identity_element_is_exact() {
        let z = [SiegelPoint::scalar(Complex64::new(0.2, 0.9)).unwrap()];
        let id = vec![("I".to_string(), SymplecticElement::identity(1))];
        let r = main_theorem_check(&spec(1), &id, &z, 0.0).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn identity_one_for_constant_and_linear() {
        let th = ThetaForm::e8_first_vector(1);
        let pol = TruncationPolicy { r_max: 40.0, ..Default::default() };
        let z = [SiegelPoint::scalar(Complex64::new(0.0, 1.0)).unwrap()];
        for p in [SparsePoly::<GaussRational>::one(1, 1), SparsePoly::var(1, 1, 0, 0)] {
            let r = identity_i_check(&th, &p, &gens(), &z, &pol, 1e-8).unwrap();
            assert!(r.pass, "{}", r.max_residual);
        }
        assert!(identity_i_check(&th, &SparsePoly::var(1, 1, 0, 0).pow(2), &gens(), &z, &pol, 1e-8).is_err());
    }

    #[test]
    fn identity_two_translation_and_inversion() {
        let e = EisensteinSpec::new(8, HalfIntegralIndex::from_i64(1).unwrap()).unwrap();
        let pol = TruncationPolicy { c_max: 10.0, l_max: 12, ..Default::default() };
        let one = SparsePoly::<GaussRational>::one(1, 1);
        let r = identity_ii_check(&e, &one, &gens(), &[Complex64::new(0.0, 1.0)], &pol, 1e-8).unwrap();
        assert!(r.pass, "{}", r.max_residual);
        assert!(r.max_magnitude() > 0.5);
        let t = &r.cases[0];
        assert!(t.residual < 1e-10);
    }

    #[test]
    fn non_integral_elements_are_rejected() {
        let half = MatQ::from_rows(vec![vec![crate::scalar::Rat::new(1.into(), 2.into())]]).unwrap();
        let t = SymplecticElement::translation(&half).unwrap();
        let z = [SiegelPoint::scalar(Complex64::new(0.0, 1.0)).unwrap()];
        assert!(main_theorem_check(&spec(0), &[("T/2".into(), t)], &z, 1e-6).is_err());
    }
}
