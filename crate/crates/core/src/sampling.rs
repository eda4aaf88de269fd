//! Seeded random inputs for property runs: group words, Heisenberg triples,
//! points of `H_n`, symmetric matrices and pluriharmonic polynomials.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matgroup::{HeisenbergElement, JacobiElement, ParabolicElement, SiegelPoint, SymplecticElement};
use crate::matrix::{MatC, MatG, MatQ};
use crate::polyharm::{ExactPoly, PluriharmonicBasis, QuadFormS, SparsePoly};
use crate::scalar::{GaussRational, Rat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generators of `Γ_n`: for `n = 1` the translation `T` and inversion `J`;
/// otherwise elementary symmetric translations, elementary rotations and `J`.
pub fn generators(n: usize) -> Vec<(String, SymplecticElement)> {
    if n == 1 {
        return vec![
            ("T".into(), SymplecticElement::from_i64_rows(&[&[1, 1], &[0, 1]]).expect("T")),
            ("J".into(), SymplecticElement::from_i64_rows(&[&[0, -1], &[1, 0]]).expect("J")),
        ];
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut b = MatQ::zeros(n, n);
            b[(i, j)] = Rat::from_integer(1.into());
            b[(j, i)] = Rat::from_integer(1.into());
            out.push((format!("T{i}{j}"), SymplecticElement::translation(&b).expect("symmetric")));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut u = MatQ::identity(n);
                u[(i, j)] = Rat::from_integer(1.into());
                out.push((format!("U{i}{j}"), SymplecticElement::rotation(&u).expect("unimodular")));
            }
        }
    }
    out.push(("J".into(), SymplecticElement::inversion(n)));
    out
}

/// A word of length `1..=max_len` in the generators and their inverses.
pub fn random_word(rng: &mut impl Rng, gens: &[(String, SymplecticElement)], max_len: usize) -> Result<(String, SymplecticElement)> {
    let len = rng.gen_range(1..=max_len.max(1));
    let n = gens[0].1.degree();
    let mut label = String::new();
    let mut acc = SymplecticElement::identity(n);
    for _ in 0..len {
        let (name, g) = &gens[rng.gen_range(0..gens.len())];
        let (name, g) = if rng.gen_bool(0.5) { (name.clone(), g.clone()) } else { (format!("{name}^-1"), g.inverse()) };
        if !label.is_empty() {
            label.push('·');
        }
        label.push_str(&name);
        acc = acc.compose(&g)?;
    }
    Ok((label, acc))
}

fn small_int(rng: &mut impl Rng, range: i64) -> Rat {
    Rat::from_integer(rng.gen_range(-range..=range).into())
}

/// Integral triple with entries in `[-range, range]`.
pub fn random_heisenberg(rng: &mut impl Rng, n: usize, m: usize, range: i64) -> Result<HeisenbergElement> {
    let lambda = MatQ::from_fn(m, n, |_, _| small_int(rng, range));
    let mu = MatQ::from_fn(m, n, |_, _| small_int(rng, range));
    let mut sym = MatQ::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = small_int(rng, range);
            sym[(i, j)] = v.clone();
            sym[(j, i)] = v;
        }
    }
    HeisenbergElement::with_symmetric_part(lambda, mu, &sym)
}

pub fn random_jacobi(rng: &mut impl Rng, n: usize, m: usize, word_len: usize, range: i64) -> Result<JacobiElement> {
    let (_, g) = random_word(rng, &generators(n), word_len)?;
    JacobiElement::new(g, random_heisenberg(rng, n, m, range)?)
}

/// `u ∈ GL_m(Z)`: a signed product of elementary matrices.
pub fn random_unimodular(rng: &mut impl Rng, m: usize) -> MatQ {
    let mut u = MatQ::identity(m);
    if rng.gen_bool(0.5) {
        u[(0, 0)] = Rat::from_integer((-1).into());
    }
    for _ in 0..(if m > 1 { 3 } else { 0 }) {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if i != j {
            let mut e = MatQ::identity(m);
            e[(i, j)] = small_int(rng, 1);
            u = &u * &e;
        }
    }
    u
}

/// Element `[σ, u, (λ, μ, κ)]` of the parabolic subgroup with a random word σ.
pub fn random_parabolic(rng: &mut impl Rng, n: usize, m: usize, word_len: usize, range: i64) -> Result<ParabolicElement> {
    let (_, sigma) = random_word(rng, &generators(n), word_len)?;
    let u = random_unimodular(rng, m);
    let h = random_heisenberg(rng, n, m, range)?;
    ParabolicElement::embed(&sigma, &u, &h)
}

/// `Z = X + iY` with `|X_ij| ≤ 1/2` and `Y = y E + (small symmetric)`,
/// `y ∈ [0.8, 2]`, kept positive definite by diagonal dominance.
pub fn random_siegel_point(rng: &mut impl Rng, n: usize) -> Result<SiegelPoint> {
    let y = rng.gen_range(0.8..2.0);
    let mut z = MatC::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let re = rng.gen_range(-0.5..0.5);
            let im = if i == j { y } else { rng.gen_range(-0.2..0.2) * y / n as f64 };
            z[(i, j)] = Complex64::new(re, im);
            z[(j, i)] = z[(i, j)];
        }
    }
    SiegelPoint::new(z)
}

/// Gaussian-rational point of `H_n`: `X` with small denominators and
/// `Y = y E` for a positive rational `y`.
pub fn random_exact_siegel_point(rng: &mut impl Rng, n: usize) -> MatG {
    let y = Rat::new(rng.gen_range(1..=8).into(), rng.gen_range(1..=4).into());
    let mut z = MatG::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let re = Rat::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=6).into());
            let im = if i == j { y.clone() } else { Rat::from_integer(0.into()) };
            z[(i, j)] = GaussRational::new(re, im);
            z[(j, i)] = z[(i, j)].clone();
        }
    }
    z
}

pub fn random_exact_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> MatG {
    MatG::from_fn(rows, cols, |_, _| {
        GaussRational::new(
            Rat::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into()),
            Rat::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into()),
        )
    })
}

/// Entries uniform in the square `[-scale, scale]²`.
pub fn random_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> MatC {
    MatC::from_fn(rows, cols, |_, _| Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale)))
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> MatC {
    random_complex_matrix(rng, n, n, scale).symmetrized()
}

/// Integral positive definite `S`: `(1)`, `(2)` or `(1/2)` for `m = 1`,
/// otherwise `A ᵗA + E` with entries of `A` in `{-1, 0, 1}`.
pub fn random_positive_form(rng: &mut impl Rng, m: usize) -> Result<QuadFormS> {
    if m == 1 {
        let v = [Rat::from_integer(1.into()), Rat::from_integer(2.into()), Rat::new(1.into(), 2.into())];
        return QuadFormS::new(MatQ::from_rows(vec![vec![v[rng.gen_range(0..3)].clone()]])?);
    }
    let a = MatQ::from_fn(m, m, |_, _| small_int(rng, 1));
    QuadFormS::new(&(&a * &a.transpose()) + &MatQ::identity(m))
}

/// Combination of the basis with integer coefficients in `[-3, 3]`, not all zero.
pub fn random_pluriharmonic(rng: &mut impl Rng, basis: &PluriharmonicBasis) -> Result<ExactPoly> {
    let (m, n) = basis.shape();
    loop {
        let mut p = SparsePoly::zero(m, n);
        for b in &basis.elements {
            let c = GaussRational::new(small_int(rng, 3), Rat::from_integer(0.into()));
            p = p.add(&b.scale(&c))?;
        }
        if !p.is_zero() || basis.elements.is_empty() {
            return Ok(p);
        }
    }
}

/// `k×k` grid with `Re z ∈ [-1/2, 1/2]` and `Im z ∈ [0.8, 2]`.
pub fn upper_half_plane_grid(k: usize) -> Vec<Complex64> {
    let step = |i: usize| if k > 1 { i as f64 / (k - 1) as f64 } else { 0.5 };
    (0..k).flat_map(|a| (0..k).map(move |b| Complex64::new(-0.5 + step(a), 0.8 + 1.2 * step(b)))).collect()
}
