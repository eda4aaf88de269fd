//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process exits nonzero when an asserted requirement breaks. Criterion
//! 7 contains one requirement that cannot hold (see its detail line); that
//! requirement is reported but not asserted.

use std::time::{Duration, Instant};

use clap::Parser;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;

use jacobi_lift::cli::{run, Cli};
use jacobi_lift::forms::{theta_eval, theta_fourier, ThetaForm, TruncationPolicy};
use jacobi_lift::lift::theta_derivative;
use jacobi_lift::matgroup::{symplectic_check, SiegelPoint, SymplecticElement};
use jacobi_lift::polyharm::{apply_diff_op, bilinear_form, is_pluriharmonic, pluriharmonic_basis, ApproxPoly, ExactPoly, QuadFormS};
use jacobi_lift::sampling;
use jacobi_lift::{GaussRational, MatC, MatQ, Rat};

struct Outcome {
    pass: bool,
    /// Requirements that must hold for the run to succeed.
    asserted: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Outcome { pass, asserted: pass, detail }
    }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("jacobi-lift").chain(args.iter().copied());
    run(&Cli::try_parse_from(argv).expect("valid command line"))
}

fn residual_of(v: &Value) -> f64 {
    match v.get("reports") {
        Some(rs) => rs.as_array().unwrap().iter().map(residual_of).fold(0.0, f64::max),
        None => v["max_residual"].as_f64().expect("report has max_residual"),
    }
}

fn reports(v: &Value) -> Vec<&Value> {
    match v.get("reports") {
        Some(rs) => rs.as_array().unwrap().iter().collect(),
        None => vec![v],
    }
}

fn vacuous(v: &Value) -> bool {
    reports(v).iter().all(|r| r.get("warning").is_some())
}

// ---------------------------------------------------------------- 1

fn exact_group_algebra() -> Outcome {
    let mut rng = sampling::rng(1);
    let (mut closure, mut assoc, mut action) = (0usize, 0usize, 0usize);
    let mut bad = Vec::new();
    let total = 10_000;
    for t in 0..total {
        let n = 1 + t % 2;
        let m = 1 + (t / 2) % 2;
        let gens = sampling::generators(n);
        match t % 3 {
            0 => {
                let (_, g1) = sampling::random_word(&mut rng, &gens, 4).unwrap();
                let (_, g2) = sampling::random_word(&mut rng, &gens, 4).unwrap();
                let prod = g1.compose(&g2).unwrap();
                let ok = symplectic_check(prod.matrix()).unwrap()
                    && prod.is_integral()
                    && prod.compose(&prod.inverse()).unwrap() == SymplecticElement::identity(n);
                closure += 1;
                if !ok {
                    bad.push(format!("closure #{t}"));
                }
            }
            1 => {
                let a = sampling::random_jacobi(&mut rng, n, m, 3, 3).unwrap();
                let b = sampling::random_jacobi(&mut rng, n, m, 3, 3).unwrap();
                let c = sampling::random_jacobi(&mut rng, n, m, 3, 3).unwrap();
                let left = a.mul(&b).unwrap().mul(&c).unwrap();
                let right = a.mul(&b.mul(&c).unwrap()).unwrap();
                assoc += 1;
                if left != right {
                    bad.push(format!("associativity #{t}"));
                }
            }
            _ => {
                let g1 = sampling::random_jacobi(&mut rng, n, m, 3, 2).unwrap();
                let g2 = sampling::random_jacobi(&mut rng, n, m, 3, 2).unwrap();
                let z = sampling::random_exact_siegel_point(&mut rng, n);
                let w = sampling::random_exact_matrix(&mut rng, m, n);
                let direct = g1.mul(&g2).unwrap().act_exact(&z, &w).unwrap();
                let (z2, w2) = g2.act_exact(&z, &w).unwrap();
                let stepwise = g1.act_exact(&z2, &w2).unwrap();
                action += 1;
                if direct != stepwise {
                    bad.push(format!("action #{t}"));
                }
            }
        }
    }
    Outcome::plain(
        bad.is_empty(),
        format!(
            "{total} checks ({closure} closure, {assoc} associativity, {action} action), {} nonzero residuals {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn cocycle_suite() -> Outcome {
    let (code, v) = cli(&["verify", "cocycle", "--trials", "50", "--seed", "2", "--tol", "1e-10"]);
    let cases = v["cases"].as_array().map_or(0, Vec::len);
    Outcome::plain(code == 0, format!("max residual {:.3e} over {cases} cases (5x5 grid, 50 pairs)", residual_of(&v)))
}

// ---------------------------------------------------------------- 3

/// Degree-`d` exponent vectors in `vars` variables.
fn exponents(vars: usize, d: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents(vars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / pivot.clone();
                for j in c..cols {
                    let sub = f.clone() * rows[r][j].clone();
                    rows[i][j] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the common kernel of `Σ_a ∂²/∂W_{ai}∂W_{aj}` on degree-`d`
/// polynomials in the `m×n` entries `W_{ai}` (row-major variables).
fn kernel_dim_oracle(m: usize, n: usize, d: u32) -> usize {
    let vars = m * n;
    let source = exponents(vars, d);
    if d < 2 {
        return source.len();
    }
    let target = exponents(vars, d - 2);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            for t in &target {
                let row = source
                    .iter()
                    .map(|e| {
                        let mut acc = 0i64;
                        for a in 0..m {
                            let (p, q) = (a * n + i, a * n + j);
                            let mut f = e.clone();
                            let c = if p == q {
                                if f[p] < 2 {
                                    continue;
                                }
                                let c = i64::from(f[p]) * i64::from(f[p] - 1);
                                f[p] -= 2;
                                c
                            } else {
                                if f[p] == 0 || f[q] == 0 {
                                    continue;
                                }
                                let c = i64::from(f[p]) * i64::from(f[q]);
                                f[p] -= 1;
                                f[q] -= 1;
                                c
                            };
                            if &f == t {
                                acc += c;
                            }
                        }
                        BigRational::from_integer(acc.into())
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    source.len() - rank(rows)
}

fn pluriharmonic_kernel() -> Outcome {
    let mut mismatches = Vec::new();
    let mut summary = Vec::new();
    for m in 1..=2usize {
        let forms = if m == 1 {
            vec![MatQ::identity(1), MatQ::from_i64_rows(&[&[2]]).unwrap()]
        } else {
            vec![MatQ::identity(2), MatQ::from_i64_rows(&[&[2, 1], &[1, 2]]).unwrap()]
        };
        for n in 1..=2usize {
            for d in 0..=4u32 {
                let expected = kernel_dim_oracle(m, n, d);
                summary.push(format!("({m},{n},{d})={expected}"));
                for s in &forms {
                    let s = QuadFormS::new(s.clone()).unwrap();
                    let b = pluriharmonic_basis(&s, n, d).unwrap();
                    let all_ok = b.elements.iter().all(|p| p.homogeneous_degree() == Some(d) && is_pluriharmonic(&s, p).unwrap());
                    if b.dim() != expected || !all_ok {
                        mismatches.push(format!("(m,n,d)=({m},{n},{d}) S={:?}: {} vs oracle {expected}", s.s(), b.dim()));
                    }
                }
            }
        }
    }
    Outcome::plain(mismatches.is_empty(), format!("dims {}; mismatches {:?}", summary.join(" "), mismatches))
}

// ---------------------------------------------------------------- 4

fn random_homogeneous(rng: &mut impl Rng, m: usize, n: usize, d: u32) -> ExactPoly {
    let mut p = ExactPoly::zero(m, n);
    for e in exponents(m * n, d) {
        if rng.gen_bool(0.6) {
            let c = GaussRational::new(
                Rat::from_integer(rng.gen_range(-4..=4).into()),
                Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
            );
            p = p.add(&ExactPoly::monomial(m, n, e, c).unwrap()).unwrap();
        }
    }
    p
}

fn bilinear_adjointness() -> Outcome {
    let mut rng = sampling::rng(4);
    let shapes = [(1, 1), (2, 1), (2, 2)];
    let mut failures = 0;
    let mut nontrivial = 0;
    for t in 0..500 {
        let (m, n) = shapes[t % 3];
        let dp = rng.gen_range(0..=4);
        let dq = rng.gen_range(0..=dp);
        let p = random_homogeneous(&mut rng, m, n, dp);
        let q = random_homogeneous(&mut rng, m, n, dq);
        let r = random_homogeneous(&mut rng, m, n, dp - dq);
        let lhs = bilinear_form(&p, &q.mul(&r).unwrap()).unwrap();
        let rhs = bilinear_form(&apply_diff_op(&q, &p).unwrap(), &r).unwrap();
        let sym = bilinear_form(&p, &q).unwrap() == bilinear_form(&q, &p).unwrap();
        if !lhs.is_zero() {
            nontrivial += 1;
        }
        if lhs != rhs || !sym {
            failures += 1;
        }
    }
    Outcome::plain(
        failures == 0,
        format!("500 triples at (m,n) in {{(1,1),(2,1),(2,2)}}, {nontrivial} with nonzero pairing, {failures} failures"),
    )
}

// ---------------------------------------------------------------- 5

fn lemma43() -> Outcome {
    let (code, v) = cli(&["verify", "lemma43", "--trials", "100", "--seed", "7", "--tol", "1e-10"]);
    Outcome::plain(code == 0, format!("max residual {:.3e} over 100 trials, seed 7", residual_of(&v)))
}

// ---------------------------------------------------------------- 6

fn theta_membership() -> Outcome {
    let (code, v) = cli(&["verify", "jacobi-invariance", "--tol", "1e-7", "--eps", "1e-9"]);
    let (ctrl_code, ctrl) = cli(&["verify", "jacobi-invariance", "--tol", "1e-7", "--eps", "1e-9", "--weight-off-by-one"]);
    let control = residual_of(&ctrl);
    Outcome::plain(
        code == 0 && ctrl_code == 1 && control > 0.1,
        format!("residual {:.3e} at radius {}; weight-3 control residual {control:.3e}", residual_of(&v), v["truncation"]["r_max"]),
    )
}

// ---------------------------------------------------------------- 7

fn main_theorem() -> Outcome {
    let (code, v) = cli(&["verify", "main-theorem", "--d", "1", "--tol", "1e-6", "--trials", "20", "--seed", "7"]);
    let words_ok = reports(&v).iter().any(|r| r["test"] == "main-theorem-words" && r["pass"] == true);
    let (c1, ctrl1) = cli(&["verify", "main-theorem", "--d", "1", "--weight-off-by-one"]);
    let (c0, ctrl0) = cli(&["verify", "main-theorem", "--d", "0", "--weight-off-by-one"]);
    let (c8, deg8) = cli(&["verify", "main-theorem", "--c", "e1,e2", "--d", "8", "--tol", "1e-6"]);
    let (c8n, ctrl8) = cli(&["verify", "main-theorem", "--c", "e1,e2", "--d", "8", "--weight-off-by-one"]);

    let theorem = code == 0 && words_ok;
    let degree1_control_fails = c1 == 1;
    let other_controls = c0 == 1 && c8 == 0 && c8n == 1 && residual_of(&ctrl0) > 0.1;
    Outcome {
        pass: theorem && degree1_control_fails,
        asserted: theorem && other_controls && vacuous(&v) && vacuous(&ctrl1),
        detail: format!(
            "degree 1: generators+20 words residual {:.3e} (both sides vanish: f_W = 0 by W -> -W symmetry); \
             degree-1 weight control {} (residual {:.1e}, vacuous); degree-0 control residual {:.3e}; \
             c=(e1,e2) degree 8: residual {:.3e}, weight control residual {:.3e}",
            residual_of(&v),
            if degree1_control_fails { "fails" } else { "cannot fail" },
            residual_of(&ctrl1),
            residual_of(&ctrl0),
            residual_of(&deg8),
            residual_of(&ctrl8),
        ),
    }
}

// ---------------------------------------------------------------- 8

fn identity_i() -> Outcome {
    let base = ["verify", "identity-i", "--tol", "1e-7", "--Z", "i", "--Z", "0.3+1.1i"];
    let (c0, v0) = cli(&[&base[..], &["--d", "0"]].concat());
    let (c1, v1) = cli(&[&base[..], &["--d", "1"]].concat());
    let (c8, v8) = cli(&[&base[..], &["--c", "e1,e2", "--d", "8"]].concat());
    Outcome::plain(
        c0 == 0 && c1 == 0 && c8 == 0,
        format!(
            "P=1 residual {:.3e}; P=W residual {:.3e} (vacuous); c=(e1,e2) degree 8 residual {:.3e}",
            residual_of(&v0),
            residual_of(&v1),
            residual_of(&v8)
        ),
    )
}

// ---------------------------------------------------------------- 9

fn identity_ii() -> Outcome {
    let (code, v) = cli(&["verify", "identity-ii", "--form", "eisenstein", "--k", "8", "--index", "1", "--tol", "1e-4"]);
    let change = v["truncation"]["self_convergence"]["doubled_max_change"].as_f64().unwrap_or(f64::INFINITY);
    Outcome::plain(
        code == 0 && change < 1e-5,
        format!("residual {:.3e}; doubling C_max, L_max changes values by {change:.3e}", residual_of(&v)),
    )
}

// ---------------------------------------------------------------- 10

/// Norm-2 vectors of E8 in the coordinates `D8 ∪ (D8 + ½)`, doubled to
/// stay integral, with their inner products against the root `(1,1,0,…)`.
fn e8_roots_oracle() -> (usize, std::collections::BTreeMap<i64, u64>) {
    let mut hist = std::collections::BTreeMap::new();
    let mut count = 0;
    let root = [2i64, 2, 0, 0, 0, 0, 0, 0];
    let mut visit = |v: &[i64; 8]| {
        count += 1;
        let ip: i64 = v.iter().zip(root).map(|(a, b)| a * b).sum::<i64>() / 4;
        *hist.entry(ip).or_insert(0) += 1;
    };
    // Integral type: two entries ±1 (doubled ±2).
    for i in 0..8 {
        for j in (i + 1)..8 {
            for si in [-2, 2] {
                for sj in [-2, 2] {
                    let mut v = [0i64; 8];
                    v[i] = si;
                    v[j] = sj;
                    visit(&v);
                }
            }
        }
    }
    // Half-integral type: all entries ±½ with an even number of minus signs.
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let v: [i64; 8] = std::array::from_fn(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
            visit(&v);
        }
    }
    (count, hist)
}

fn fourier_support() -> Outcome {
    let th = ThetaForm::e8_first_vector(1);
    let table = theta_fourier(&th, 6.0).unwrap();
    let b = table.condition_b_holds().unwrap();
    let (count, hist) = e8_roots_oracle();
    let one = Rat::one();
    let total = table.total_at(&one);
    let by_r_ok = hist.iter().all(|(r, c)| table.coeff(&one, &[*r]) == *c);
    Outcome::plain(
        b && total as usize == count && by_r_ok,
        format!(
            "{} keys with T <= 6, block test {}; sum_R c(1,R) = {total}, oracle {count}; c(1,R) by R {hist:?}",
            table.entries.len(),
            if b { "holds" } else { "fails" }
        ),
    )
}

// ---------------------------------------------------------------- 11

fn lift_consistency() -> Outcome {
    let th = ThetaForm::e8_first_vector(1);
    let policy = TruncationPolicy { r_max: 40.0, eps: 1e-9, ..Default::default() };
    let w_var = ApproxPoly::var(1, 1, 0, 0);
    let cube = w_var.pow(3);
    let h = 1e-5;
    let scalar = |z: Complex64| MatC::from_fn(1, 1, |_, _| z);
    let (mut diff, mut parity, mut largest) = (0.0f64, 0.0f64, 0.0f64);
    for z in sampling::upper_half_plane_grid(3) {
        let zp = SiegelPoint::scalar(z).unwrap();
        for w0 in [Complex64::new(0.0, 0.0), Complex64::new(0.13, 0.07)] {
            let termwise = theta_derivative(&th, &w_var, None, &zp, Some(&scalar(w0)), &policy).unwrap().value;
            let plus = theta_eval(&th, &zp, &scalar(w0 + h), &policy).unwrap().value;
            let minus = theta_eval(&th, &zp, &scalar(w0 - h), &policy).unwrap().value;
            let central = (plus - minus) / (2.0 * h);
            diff = diff.max((termwise - central).norm());
            largest = largest.max(termwise.norm());
        }
        for p in [&w_var, &cube] {
            parity = parity.max(theta_derivative(&th, p, None, &zp, None, &policy).unwrap().value.norm());
        }
    }
    Outcome::plain(
        diff < 1e-6 && parity < 1e-12 && largest > 0.1,
        format!("3x3 grid at W in {{0, 0.13+0.07i}}: max |termwise - central| {diff:.3e} (largest |value| {largest:.3}); odd-degree lifts at W=0 max {parity:.3e}"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("exact group algebra", Duration::from_secs(30), exact_group_algebra),
        ("cocycle suite", Duration::from_secs(60), cocycle_suite),
        ("pluriharmonic kernel", Duration::from_secs(60), pluriharmonic_kernel),
        ("bilinear form", Duration::from_secs(30), bilinear_adjointness),
        ("exponent lemma", Duration::from_secs(60), lemma43),
        ("theta membership", Duration::from_secs(120), theta_membership),
        ("main theorem", Duration::from_secs(180), main_theorem),
        ("identity (I)", Duration::from_secs(120), identity_i),
        ("identity (II)", Duration::from_secs(300), identity_ii),
        ("Fourier support", Duration::from_secs(60), fourier_support),
        ("lift consistency", Duration::from_secs(60), lift_consistency),
    ];
    let mut broken = Vec::new();
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let verdict = if out.pass && in_time { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name} [{:.2}s of {}s]: {}", i + 1, elapsed.as_secs_f64(), budget.as_secs(), out.detail);
        if !out.asserted || !in_time {
            broken.push(i + 1);
        }
    }
    if !broken.is_empty() {
        eprintln!("acceptance requirements broken for criteria {broken:?}");
        std::process::exit(1);
    }
}
