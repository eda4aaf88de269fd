use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use super::inputs::{parse_c, parse_complex_matrix, parse_index, parse_lattice, parse_point, parse_rational_matrix};
use super::{BasisArgs, FormChoice, Subtest, ThetaArgs, VerifyArgs};
use crate::error::{Error, Result};
use crate::forms::{
    eisenstein_eval, jacobi_invariance_check, theta_eval, EisensteinSpec, HalfIntegralIndex, PolyGrowth, SlashType, ThetaForm,
    TruncationPolicy,
};
use crate::json::{basis_to_json, complex_to_json, mat_c_to_json, mat_q_to_json, poly_to_json};
use crate::lift::{identity_i_check, identity_ii_check, main_theorem_check, theta_radius_for, LiftSource, LiftSpec};
use crate::matgroup::{
    canonical_factor, cocycle_residual, jacobi_summand, siegel_action, summand_residual, symplectic_j, HeisenbergElement,
    JacobiDomainPoint, JacobiElement, SiegelPoint, SymplecticElement,
};
use crate::matrix::{MatC, MatQ};
use crate::polyharm::{lemma43_residual, pluriharmonic_basis, PluriharmonicBasis, QuadFormS};
use crate::report::{Case, VerificationReport};
use crate::sampling;
use crate::scalar::Rat;

type Out = (i32, Value);

pub fn basis(a: &BasisArgs) -> Result<Out> {
    let s = QuadFormS::new(parse_rational_matrix(&a.s, a.m)?)?;
    if s.size() != a.m {
        return Err(Error::Dimension(format!("S is {0}x{0} but m = {1}", s.size(), a.m)));
    }
    let b = pluriharmonic_basis(&s, a.n, a.d)?;
    eprintln!("dimension: {}", b.dim());
    Ok((0, basis_to_json(&b)))
}

pub fn theta(a: &ThetaArgs) -> Result<Out> {
    let lattice = parse_lattice(&a.lattice)?;
    let c = parse_c(&a.c, lattice.size())?;
    let th = ThetaForm::new(lattice, c, a.n)?;
    let z = parse_point(&a.z, a.n)?;
    let w = parse_complex_matrix(&a.w, th.index_size(), a.n)?;
    let radius = match a.radius {
        Some(r) => r,
        None => th.radius_for(z.min_imag_eigenvalue(), th.beta(&w), PolyGrowth::none(), a.eps)? as f64,
    };
    let policy = TruncationPolicy { r_max: radius, eps: a.eps, ..Default::default() };
    let v = theta_eval(&th, &z, &w, &policy)?;
    Ok((
        0,
        json!({
            "value": complex_to_json(v.value),
            "tail_bound": v.tail_bound,
            "terms_used": v.terms_used,
            "radius": radius,
        }),
    ))
}

pub fn verify(a: &VerifyArgs) -> Result<Out> {
    let reports = match a.subtest {
        Subtest::JacobiInvariance => jacobi_invariance(a)?,
        Subtest::MainTheorem => main_theorem(a)?,
        Subtest::IdentityI => identity_i(a)?,
        Subtest::IdentityIi => identity_ii(a)?,
        Subtest::Cocycle => cocycle(a)?,
        Subtest::Lemma43 => lemma43(a)?,
    };
    Ok(finish(reports))
}

fn finish(reports: Vec<VerificationReport>) -> Out {
    let pass = reports.iter().all(|r| r.pass);
    let mut values: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("reports serialize");
            let two_sided = r.cases.iter().any(|c| c.lhs.is_some());
            if two_sided && r.max_magnitude() < 1e-12 {
                v["warning"] = json!("both sides vanish at every case; the check carries no information");
            }
            v
        })
        .collect();
    let out = if values.len() == 1 { values.pop().expect("one report") } else { json!({"pass": pass, "reports": values}) };
    (if pass { 0 } else { 1 }, out)
}

fn default_points(n: usize) -> Result<Vec<SiegelPoint>> {
    if n == 1 {
        return [Complex64::new(0.0, 1.0), Complex64::new(0.3, 1.1)].into_iter().map(SiegelPoint::scalar).collect();
    }
    let z = MatC::from_fn(n, n, |i, j| if i == j { Complex64::new(0.1 * (i + 1) as f64, 1.0) } else { Complex64::new(0.05, 0.2) });
    Ok(vec![SiegelPoint::new(z)?])
}

fn points(a: &VerifyArgs, n: usize) -> Result<Vec<SiegelPoint>> {
    if a.z.is_empty() {
        default_points(n)
    } else {
        a.z.iter().map(|t| parse_point(t, n)).collect()
    }
}

fn weight(a: &VerifyArgs, natural: i32) -> i32 {
    a.k.unwrap_or(natural) - i32::from(a.weight_off_by_one)
}

fn policy(a: &VerifyArgs, r_max: f64) -> Result<TruncationPolicy> {
    TruncationPolicy::new(r_max, a.cmax, a.lmax, a.eps)
}

fn e8_theta(a: &VerifyArgs, n: usize) -> Result<ThetaForm> {
    let lattice = crate::forms::EvenUnimodularForm::e8();
    let c = parse_c(&a.c, lattice.size())?;
    ThetaForm::new(lattice, c, n)
}

fn eisenstein(a: &VerifyArgs) -> Result<EisensteinSpec> {
    if a.n != 1 {
        return Err(Error::InvalidInput("Eisenstein series are implemented for n = 1".into()));
    }
    EisensteinSpec::new(a.k.unwrap_or(8), parse_index(&a.index)?)
}

fn nonempty_basis(index: &HalfIntegralIndex, n: usize, d: u32) -> Result<PluriharmonicBasis> {
    let b = pluriharmonic_basis(&QuadFormS::new(index.lift_form()?)?, n, d)?;
    if b.dim() == 0 {
        return Err(Error::InvalidInput(format!("no pluriharmonic polynomials of degree {d} for this index")));
    }
    Ok(b)
}

/// Lowest `Im` eigenvalue over the points and their images.
fn min_imag(points: &[SiegelPoint], elements: &[(String, SymplecticElement)]) -> Result<f64> {
    let mut y = f64::INFINITY;
    for z in points {
        y = y.min(z.min_imag_eigenvalue());
        for (_, m) in elements {
            y = y.min(siegel_action(m, z)?.min_imag_eigenvalue());
        }
    }
    Ok(y)
}

fn jacobi_invariance(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let n = a.n;
    let tol = a.tol.unwrap_or(1e-7);
    let zs = points(a, n)?;
    let (index, natural, theta) = match a.form {
        FormChoice::ThetaE8 => {
            let th = e8_theta(a, n)?;
            (th.index().clone(), th.weight(), Some(th))
        }
        FormChoice::Eisenstein => {
            let e = eisenstein(a)?;
            (e.index().clone(), e.weight(), None)
        }
    };
    let m = index.size();
    let mut gens: Vec<(String, JacobiElement)> =
        sampling::generators(n).into_iter().map(|(l, g)| (l, JacobiElement::from_symplectic(g, m))).collect();
    let one = Rat::from_integer(1.into());
    for i in 0..m {
        for j in 0..n {
            let unit = MatQ::unit(m, n, i, j);
            let zero = MatQ::zeros(m, n);
            let sym = MatQ::zeros(m, m);
            gens.push((
                format!("lambda{i}{j}"),
                JacobiElement::from_heisenberg(HeisenbergElement::with_symmetric_part(unit.clone(), zero.clone(), &sym)?),
            ));
            gens.push((format!("mu{i}{j}"), JacobiElement::from_heisenberg(HeisenbergElement::with_symmetric_part(zero, unit, &sym)?)));
        }
    }
    let mut kappa = MatQ::zeros(m, m);
    kappa[(0, 0)] = one;
    gens.push(("kappa".into(), JacobiElement::from_heisenberg(HeisenbergElement::new(MatQ::zeros(m, n), MatQ::zeros(m, n), kappa)?)));

    let pts: Vec<JacobiDomainPoint> = zs
        .iter()
        .map(|z| JacobiDomainPoint::new(z.clone(), MatC::from_fn(m, n, |i, j| Complex64::new(0.1 + 0.05 * (i + j) as f64, 0.07))))
        .collect::<Result<_>>()?;
    let ty = SlashType { weight: weight(a, natural), index };
    let meta_radius;
    let report = match theta {
        Some(th) => {
            let r_max = match a.radius {
                Some(r) => r,
                None => {
                    let mut r = 0;
                    for p in &pts {
                        r = r.max(th.radius_for(p.z.min_imag_eigenvalue(), th.beta(&p.w), PolyGrowth::none(), a.eps)?);
                        for (_, g) in &gens {
                            let q = g.act(p)?;
                            r = r.max(th.radius_for(q.z.min_imag_eigenvalue(), th.beta(&q.w), PolyGrowth::none(), a.eps)?);
                        }
                    }
                    r as f64
                }
            };
            meta_radius = r_max;
            let pol = policy(a, r_max)?;
            let f = |p: &JacobiDomainPoint| {
                let v = theta_eval(&th, &p.z, &p.w, &pol)?;
                Ok(crate::report::Evaluated::new(v.value, v.tail_bound))
            };
            jacobi_invariance_check(&f, &ty, &gens, &pts, tol)?
        }
        None => {
            meta_radius = f64::NAN;
            let e = eisenstein(a)?;
            let pol = policy(a, TruncationPolicy::default().r_max)?;
            let f = |p: &JacobiDomainPoint| {
                let w: Vec<Complex64> = p.w.iter().copied().collect();
                let v = eisenstein_eval(&e, p.z.matrix()[(0, 0)], &w, &pol)?;
                Ok(crate::report::Evaluated::new(v.value, v.tail_estimate))
            };
            jacobi_invariance_check(&f, &ty, &gens, &pts, tol)?
        }
    };
    let mut report = report;
    report.truncation["r_max"] = if meta_radius.is_finite() { json!(meta_radius) } else { Value::Null };
    report.truncation["c_max"] = json!(a.cmax);
    report.truncation["l_max"] = json!(a.lmax);
    report.truncation["eps"] = json!(a.eps);
    Ok(vec![report])
}

fn main_theorem(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let tol = a.tol.unwrap_or(1e-6);
    let (source, n) = match a.form {
        FormChoice::ThetaE8 => (LiftSource::Theta(e8_theta(a, a.n)?), a.n),
        FormChoice::Eisenstein => (LiftSource::Eisenstein(eisenstein(a)?), 1),
    };
    let basis = nonempty_basis(source.index(), n, a.d)?;
    let zs = points(a, n)?;
    let gens = sampling::generators(n);
    let mut rng = sampling::rng(a.seed);
    let words = (0..a.trials.unwrap_or(0)).map(|_| sampling::random_word(&mut rng, &gens, 3)).collect::<Result<Vec<_>>>()?;
    let r_max = match (a.radius, &source) {
        (Some(r), _) => r,
        (None, LiftSource::Theta(th)) => {
            let all: Vec<_> = gens.iter().chain(&words).cloned().collect();
            let y = min_imag(&zs, &all)?;
            let mut r = 0;
            for p in basis.approx_elements() {
                r = r.max(theta_radius_for(th, &p, None, y, a.eps)?);
            }
            r as f64
        }
        (None, LiftSource::Eisenstein(_)) => TruncationPolicy::default().r_max,
    };
    let natural = source.weight();
    let spec = LiftSpec::new(source, basis, policy(a, r_max)?)?.with_weight(weight(a, natural));
    let mut reports = vec![main_theorem_check(&spec, &gens, &zs, tol)?];
    if !words.is_empty() {
        let mut r = main_theorem_check(&spec, &words, &zs, 10.0 * tol)?;
        r.test = "main-theorem-words".into();
        reports.push(r.with_seed(a.seed));
    }
    Ok(reports)
}

fn identity_i(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let tol = a.tol.unwrap_or(1e-7);
    let n = a.n;
    let th = e8_theta(a, n)?;
    let basis = nonempty_basis(th.index(), n, a.d)?;
    let zs = points(a, n)?;
    let gens = sampling::generators(n);
    let r_max = match a.radius {
        Some(r) => r,
        None => {
            let mut r = 0;
            for z in &zs {
                for (_, m) in &gens {
                    let czd = m.j_factor(z)?;
                    let amat = czd.inverse()?.transpose();
                    let y = siegel_action(m, z)?.min_imag_eigenvalue().min(z.min_imag_eigenvalue());
                    for p in basis.approx_elements() {
                        r = r.max(theta_radius_for(&th, &p, Some(&amat), y, a.eps)?);
                        r = r.max(theta_radius_for(&th, &p, None, y, a.eps)?);
                    }
                }
            }
            r as f64
        }
    };
    let pol = policy(a, r_max)?;
    basis
        .elements
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut r = identity_i_check(&th, p, &gens, &zs, &pol, tol)?;
            r.test = format!("identity-i P{i}");
            r.truncation["P"] = poly_to_json(p);
            Ok(r)
        })
        .collect()
}

/// Largest change of either side when both truncation bounds are doubled.
const SELF_CONVERGENCE_LIMIT: f64 = 1e-5;

fn identity_ii(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let tol = a.tol.unwrap_or(1e-4);
    let e = eisenstein(a)?;
    let basis = nonempty_basis(e.index(), 1, a.d)?;
    let zs: Vec<Complex64> = points(a, 1)?.iter().map(|z| z.matrix()[(0, 0)]).collect();
    let gens = sampling::generators(1);
    let pol = policy(a, TruncationPolicy::default().r_max)?;
    let mut out = Vec::new();
    for (i, p) in basis.elements.iter().enumerate() {
        let mut r = identity_ii_check(&e, p, &gens, &zs, &pol, tol)?;
        let doubled = identity_ii_check(&e, p, &gens, &zs, &pol.doubled(), tol)?;
        let side = |v: Option<[f64; 2]>| v.map_or(Complex64::new(0.0, 0.0), |x| Complex64::new(x[0], x[1]));
        let change = r
            .cases
            .iter()
            .zip(&doubled.cases)
            .map(|(x, y)| (side(x.lhs) - side(y.lhs)).norm().max((side(x.rhs) - side(y.rhs)).norm()))
            .fold(0.0, f64::max);
        r.test = format!("identity-ii P{i}");
        r.truncation["P"] = poly_to_json(p);
        r.truncation["self_convergence"] = json!({"doubled_max_change": change, "limit": SELF_CONVERGENCE_LIMIT});
        if !(change <= SELF_CONVERGENCE_LIMIT) {
            r.pass = false;
        }
        out.push(r);
    }
    Ok(out)
}

fn residual_case(label: &str, element: Value, point: Value, residual: f64) -> Case {
    Case { label: label.into(), element, point, lhs: None, rhs: None, residual, tail: 0.0 }
}

fn cocycle(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let tol = a.tol.unwrap_or(1e-10);
    let (n, m) = (a.n, a.m.unwrap_or(1));
    let index = parse_rational_matrix(&a.index, m)?;
    let k = a.k.unwrap_or(4);
    let trials = a.trials.unwrap_or(50);
    let mut rng = sampling::rng(a.seed);
    let zs: Vec<SiegelPoint> = if n == 1 && a.z.is_empty() {
        sampling::upper_half_plane_grid(5).into_iter().map(SiegelPoint::scalar).collect::<Result<_>>()?
    } else if a.z.is_empty() {
        (0..5).map(|_| sampling::random_siegel_point(&mut rng, n)).collect::<Result<_>>()?
    } else {
        points(a, n)?
    };
    let gens = sampling::generators(n);
    let chi_rho = canonical_factor(&index, k);
    let mut cases = Vec::new();
    for t in 0..trials {
        let (l1, g1) = sampling::random_word(&mut rng, &gens, 3)?;
        let (l2, g2) = sampling::random_word(&mut rng, &gens, 3)?;
        let p1 = sampling::random_parabolic(&mut rng, n, m, 2, 1)?;
        let p2 = sampling::random_parabolic(&mut rng, n, m, 2, 1)?;
        for z in &zs {
            let pj = json!({"g1": l1, "g2": l2});
            cases.push(residual_case(&format!("CZ+D #{t}"), pj, mat_c_to_json(z.matrix()), cocycle_residual(symplectic_j, &g1, &g2, z)?));
            let w = sampling::random_complex_matrix(&mut rng, m, n, 0.3);
            let pt = JacobiDomainPoint::new(z.clone(), w)?;
            let pe = json!({"g1": mat_q_to_json(p1.matrix()), "g2": mat_q_to_json(p2.matrix())});
            let ppt = json!({"Z": mat_c_to_json(&pt.z.matrix().clone()), "W": mat_c_to_json(&pt.w)});
            cases.push(residual_case(&format!("chi-rho #{t}"), pe.clone(), ppt.clone(), cocycle_residual(&chi_rho, &p1, &p2, &pt)?));
            cases.push(residual_case(&format!("summand #{t}"), pe, ppt, summand_residual(jacobi_summand, &p1, &p2, &pt)?));
        }
    }
    let meta = json!({"n": n, "m": m, "weight": k, "index": mat_q_to_json(&index), "trials": trials, "points": zs.len()});
    Ok(vec![VerificationReport::from_cases("cocycle", cases, tol, meta).with_seed(a.seed)])
}

fn lemma43(a: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let tol = a.tol.unwrap_or(1e-10);
    let trials = a.trials.unwrap_or(100);
    let max_degree = if a.d == 0 { 3 } else { a.d };
    let mut rng = sampling::rng(a.seed);
    let shapes: Vec<(usize, usize)> = match a.m {
        Some(m) => vec![(m, a.n)],
        None => vec![(1, 1), (2, 1)],
    };
    let mut cases = Vec::new();
    for t in 0..trials {
        let (m, n) = shapes[t % shapes.len()];
        let s = sampling::random_positive_form(&mut rng, m)?;
        let basis = loop {
            let d = rng.gen_range(0..=max_degree);
            let b = pluriharmonic_basis(&s, n, d)?;
            if b.dim() > 0 {
                break b;
            }
        };
        let p = sampling::random_pluriharmonic(&mut rng, &basis)?;
        let c = sampling::random_symmetric(&mut rng, n, 0.5);
        let w = sampling::random_complex_matrix(&mut rng, m, n, 1.0);
        let residual = lemma43_residual(&p, &s, &c, &w)?;
        cases.push(residual_case(
            &format!("({m},{n}) d={}", basis.degree),
            json!({"S": mat_q_to_json(s.s()), "C": mat_c_to_json(&c), "P": poly_to_json(&p)}),
            mat_c_to_json(&w),
            residual,
        ));
    }
    Ok(vec![VerificationReport::from_cases("lemma43", cases, tol, json!({"trials": trials, "max_degree": max_degree})).with_seed(a.seed)])
}
