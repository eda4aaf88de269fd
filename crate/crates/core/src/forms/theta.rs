use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::index::{HalfIntegralIndex, TruncationPolicy};
use super::lattice::{EvenUnimodularForm, ShortVectors};
use crate::error::{Error, Result};
use crate::matgroup::{psd_check_exact, SiegelPoint};
use crate::matrix::{MatC, MatQ};
use crate::scalar::Rat;

/// `θ_{S,c}(Z, W) = Σ_λ exp(πi σ(S(λZᵗλ + 2λ ᵗ(cW))))` on `H_n × C^{(m,n)}`.
///
/// Lattice points are enumerated once and aggregated by
/// `(Q, R) = (ᵗλSλ, ᵗcSλ)`; the aggregated expansion is cached and reused
/// for every evaluation at the same or a smaller radius.
#[derive(Clone)]
pub struct ThetaForm {
    lattice: EvenUnimodularForm,
    c: MatQ,
    c_cols: Vec<Vec<i64>>,
    index: HalfIntegralIndex,
    degree: usize,
    enumerator: ShortVectors,
    cache: Arc<Mutex<Option<Arc<ThetaExpansion>>>>,
}

impl fmt::Debug for ThetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaForm").field("lattice", self.lattice.matrix()).field("c", &self.c).field("degree", &self.degree).finish()
    }
}

impl ThetaForm {
    pub fn new(lattice: EvenUnimodularForm, c: MatQ, degree: usize) -> Result<Self> {
        if c.rows() != lattice.size() || c.cols() == 0 || !c.is_integral() {
            return Err(Error::InvalidInput(format!("c must be an integral {}×m matrix, got {:?}", lattice.size(), c.shape())));
        }
        if degree == 0 {
            return Err(Error::InvalidInput("degree n must be positive".into()));
        }
        let two_m = &(&c.transpose() * lattice.matrix()) * &c;
        let half = Rat::new(1.into(), 2.into());
        let index = HalfIntegralIndex::new(two_m.scale(&half))?;
        if !index.is_positive_definite() {
            return Err(Error::InvalidInput("ᵗcSc must be positive definite".into()));
        }
        let c_cols =
            (0..c.cols()).map(|k| (0..c.rows()).map(|i| c[(i, k)].to_integer().to_i64().expect("small entries")).collect()).collect();
        let enumerator = ShortVectors::block_diagonal(lattice.gram(), lattice.size(), degree)?;
        Ok(ThetaForm { lattice, c, c_cols, index, degree, enumerator, cache: Arc::new(Mutex::new(None)) })
    }

    /// `θ_{E8, e_1}` of degree `n`: weight 4, index `(1)`.
    pub fn e8_first_vector(degree: usize) -> Self {
        let mut c = MatQ::zeros(8, 1);
        c[(0, 0)] = Rat::from_integer(1.into());
        Self::new(EvenUnimodularForm::e8(), c, degree).expect("valid E8 theta")
    }

    pub fn lattice(&self) -> &EvenUnimodularForm {
        &self.lattice
    }

    pub fn c(&self) -> &MatQ {
        &self.c
    }

    pub fn index(&self) -> &HalfIntegralIndex {
        &self.index
    }

    pub fn weight(&self) -> i32 {
        self.lattice.weight()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn index_size(&self) -> usize {
        self.c.cols()
    }

    /// Aggregated lattice sum up to norm `radius`, reusing a larger cached one.
    pub fn expansion(&self, radius: i64) -> Arc<ThetaExpansion> {
        let mut guard = self.cache.lock().expect("theta cache poisoned");
        if let Some(exp) = guard.as_ref() {
            if exp.radius >= radius {
                return Arc::clone(exp);
            }
        }
        let exp = Arc::new(self.build_expansion(radius));
        *guard = Some(Arc::clone(&exp));
        exp
    }

    fn build_expansion(&self, radius: i64) -> ThetaExpansion {
        let (n, m, size) = (self.degree, self.index_size(), self.lattice.size());
        let gram = self.lattice.gram();
        let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();
        let mut key = vec![0i64; n * n + m * n];
        let mut s_lambda = vec![0i64; size * n];
        // ᵗcS, so that R = (ᵗcS)λ costs m·2k products per point.
        let cs: Vec<i64> = (0..m)
            .flat_map(|k| (0..size).map(move |j| (k, j)))
            .map(|(k, j)| (0..size).map(|i| self.c_cols[k][i] * gram[i * size + j]).sum())
            .collect();
        self.enumerator.for_each(radius, |x, norm| {
            if n == 1 {
                key[0] = norm;
                for k in 0..m {
                    key[1 + k] = (0..size).map(|j| cs[k * size + j] * x[j]).sum();
                }
                match counts.get_mut(key.as_slice()) {
                    Some(c) => *c += 1,
                    None => {
                        counts.insert(key.clone(), 1);
                    }
                }
                return;
            }
            for l in 0..n {
                let col = &x[l * size..(l + 1) * size];
                for i in 0..size {
                    s_lambda[l * size + i] = (0..size).map(|j| gram[i * size + j] * col[j]).sum();
                }
            }
            for j in 0..n {
                for l in 0..n {
                    key[j * n + l] = (0..size).map(|i| x[j * size + i] * s_lambda[l * size + i]).sum();
                }
            }
            for k in 0..m {
                for l in 0..n {
                    key[n * n + k * n + l] = (0..size).map(|i| self.c_cols[k][i] * s_lambda[l * size + i]).sum();
                }
            }
            match counts.get_mut(key.as_slice()) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(key.clone(), 1);
                }
            }
        });
        let mut terms: Vec<ThetaTerm> = counts
            .into_iter()
            .map(|(key, count)| {
                let q = key[..n * n].to_vec();
                let trace = (0..n).map(|j| q[j * n + j]).sum();
                ThetaTerm { q, r: key[n * n..].to_vec(), trace, count }
            })
            .collect();
        terms.sort_by(|a, b| (a.trace, &a.q, &a.r).cmp(&(b.trace, &b.q, &b.r)));
        ThetaExpansion { n, m, radius, terms }
    }

    /// `β = sqrt(σ(ᵗV (ᵗcSc) V))` with `V = Im W`, so `|σ(R ᵗV)| ≤ β √r`.
    pub fn beta(&self, w: &MatC) -> f64 {
        let v = w.im();
        let two_m: Vec<f64> = self.index.matrix().iter().map(|x| 2.0 * crate::scalar::rat_to_f64(x)).collect();
        let (m, n) = (self.index_size(), self.degree);
        let mut acc = 0.0;
        for l in 0..n {
            for a in 0..m {
                for b in 0..m {
                    acc += v[(a, l)] * two_m[a * m + b] * v[(b, l)];
                }
            }
        }
        acc.max(0.0).sqrt()
    }

    /// Majorant for the terms with norm `r > radius`:
    /// `Σ_r N(r) · growth(r) · exp(−π y_min r + 2π β √r)`, where `N(r)` is the
    /// enumeration box count. Summed explicitly until successive term ratios
    /// drop below one, then closed by a geometric series (valid because every
    /// factor has a decreasing ratio in `r`).
    pub fn tail_bound(&self, radius: i64, y_min: f64, beta: f64, growth: PolyGrowth) -> f64 {
        if y_min <= 0.0 {
            return f64::INFINITY;
        }
        // Norms are even, so the first omitted shell is the next even integer.
        let start = if radius < 0 { 0 } else { radius + 2 - radius.rem_euclid(2) };
        let log_term = |r: f64| self.enumerator.box_count(r).ln() + growth.log_factor(r) - PI * y_min * r + 2.0 * PI * beta * r.sqrt();
        let mut total = 0.0;
        let mut r = start as f64;
        for _ in 0..1_000_000 {
            let here = log_term(r);
            let ratio = (log_term(r + 2.0) - here).exp();
            if ratio < 0.9 {
                return total + here.exp() / (1.0 - ratio);
            }
            total += here.exp();
            r += 2.0;
        }
        f64::INFINITY
    }

    /// Smallest even radius whose tail bound is at most `eps`.
    pub fn radius_for(&self, y_min: f64, beta: f64, growth: PolyGrowth, eps: f64) -> Result<i64> {
        let mut r = 0;
        while r <= 100_000 {
            let t = self.tail_bound(r, y_min, beta, growth);
            if t <= eps {
                return Ok(r);
            }
            r += 2;
        }
        Err(Error::TailBudget { bound: f64::INFINITY, budget: eps })
    }

    /// Number of lattice points of norm at most `radius`.
    pub fn points_within(&self, radius: i64) -> u64 {
        self.expansion(radius).terms.iter().filter(|t| t.trace <= radius).map(|t| t.count).sum()
    }
}

/// Growth `|P(arg)| ≤ l1 · max(1, amp √r)^degree` of a polynomial weight on
/// the shell of norm `r`, where `amp √r` bounds every entry of `arg`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyGrowth {
    pub l1: f64,
    pub degree: u32,
    pub amp: f64,
}

impl PolyGrowth {
    pub fn none() -> Self {
        PolyGrowth { l1: 1.0, degree: 0, amp: 0.0 }
    }

    fn log_factor(&self, r: f64) -> f64 {
        self.l1.max(f64::MIN_POSITIVE).ln() + f64::from(self.degree) * (self.amp * r.sqrt()).max(1.0).ln()
    }
}

/// One aggregated class `(Q, R)` of lattice points with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTerm {
    /// `ᵗλSλ`, `n×n` row-major.
    pub q: Vec<i64>,
    /// `ᵗcSλ`, `m×n` row-major.
    pub r: Vec<i64>,
    pub trace: i64,
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    pub n: usize,
    pub m: usize,
    pub radius: i64,
    /// Sorted by `(trace, Q, R)`.
    pub terms: Vec<ThetaTerm>,
}

impl ThetaExpansion {
    /// `Σ count · weight(term) · exp(πi σ(QZ) + 2πi σ(R ᵗW))` over terms with
    /// `trace ≤ radius`.
    pub fn sum(&self, radius: i64, z: &MatC, w: Option<&MatC>, weight: impl Fn(&ThetaTerm) -> Complex64) -> Complex64 {
        let (n, m) = (self.n, self.m);
        let zs = z.as_slice();
        let ws = w.map(MatC::as_slice);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in self.terms.iter().take_while(|t| t.trace <= radius) {
            let mut arg = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for l in 0..n {
                    arg += zs[l * n + j] * (PI * t.q[j * n + l] as f64);
                }
            }
            if let Some(ws) = ws {
                for k in 0..m * n {
                    arg += ws[k] * (2.0 * PI * t.r[k] as f64);
                }
            }
            let e = (Complex64::i() * arg).exp();
            acc += weight(t) * e * (t.count as f64);
        }
        acc
    }
}

/// A theta value with its rigorous-style truncation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: u64,
}

/// Truncated `θ_{S,c}(Z, W)` at radius `policy.r_max`.
pub fn theta_eval(f: &ThetaForm, z: &SiegelPoint, w: &MatC, policy: &TruncationPolicy) -> Result<ThetaValue> {
    policy.validate()?;
    if z.degree() != f.degree() || w.shape() != (f.index_size(), f.degree()) {
        return Err(Error::Dimension(format!(
            "theta of degree {} and index size {} evaluated at Z {:?}, W {:?}",
            f.degree(),
            f.index_size(),
            z.matrix().shape(),
            w.shape()
        )));
    }
    let radius = policy.r_max.floor() as i64;
    let tail_bound = f.tail_bound(radius, z.min_imag_eigenvalue(), f.beta(w), PolyGrowth::none());
    if tail_bound > policy.eps {
        return Err(Error::TailBudget { bound: tail_bound, budget: policy.eps });
    }
    let exp = f.expansion(radius);
    let value = exp.sum(radius, z.matrix(), Some(w), |_| Complex64::new(1.0, 0.0));
    Ok(ThetaValue { value, tail_bound, terms_used: f.points_within(radius) })
}

/// One key of a degree-one Fourier table: `T = ½ᵗλSλ`, `R = ᵗcSλ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FourierKey {
    pub t: Rat,
    pub r: Vec<i64>,
}

/// Exact coefficients `c(T, R)` of `θ_{S,c}` for `n = 1` and `T ≤ t_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoeffTable {
    pub index: MatQ,
    pub t_bound: f64,
    pub entries: Vec<(FourierKey, u64)>,
}

impl FourierCoeffTable {
    /// The block `[[T, R/2], [ᵗR/2, M]]` of the support condition.
    pub fn block(&self, key: &FourierKey) -> MatQ {
        let m = self.index.rows();
        let half = Rat::new(1.into(), 2.into());
        MatQ::from_fn(m + 1, m + 1, |i, j| match (i, j) {
            (0, 0) => key.t.clone(),
            (0, j) => Rat::from_integer(key.r[j - 1].into()) * half.clone(),
            (i, 0) => Rat::from_integer(key.r[i - 1].into()) * half.clone(),
            (i, j) => self.index[(i - 1, j - 1)].clone(),
        })
    }

    /// Exact positive semidefiniteness of every block.
    pub fn condition_b_holds(&self) -> Result<bool> {
        for (key, _) in &self.entries {
            if !psd_check_exact(&self.block(key))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn coeff(&self, t: &Rat, r: &[i64]) -> u64 {
        self.entries.iter().find(|(k, _)| &k.t == t && k.r == r).map_or(0, |(_, c)| *c)
    }

    /// `Σ_R c(T, R)`.
    pub fn total_at(&self, t: &Rat) -> u64 {
        self.entries.iter().filter(|(k, _)| &k.t == t).map(|(_, c)| c).sum()
    }
}

/// Group the `λ` with `½ᵗλSλ ≤ t_bound` by `(T, R)` (degree `n = 1`).
pub fn theta_fourier(f: &ThetaForm, t_bound: f64) -> Result<FourierCoeffTable> {
    if f.degree() != 1 {
        return Err(Error::InvalidInput("Fourier tables are provided for degree 1 only".into()));
    }
    if !(t_bound >= 0.0) {
        return Err(Error::InvalidInput("T bound must be nonnegative".into()));
    }
    let radius = (2.0 * t_bound).floor() as i64;
    let exp = f.expansion(radius);
    let mut entries: Vec<(FourierKey, u64)> = exp
        .terms
        .iter()
        .filter(|t| t.trace <= radius)
        .map(|t| (FourierKey { t: Rat::new(t.q[0].into(), 2.into()), r: t.r.clone() }, t.count))
        .collect();
    entries.sort();
    let table = FourierCoeffTable { index: f.index().matrix().clone(), t_bound, entries };
    if !table.condition_b_holds()? {
        return Err(Error::InvalidInput("Fourier support violates the block positivity condition".into()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(z: Complex64) -> SiegelPoint {
        SiegelPoint::scalar(z).unwrap()
    }

    fn w1(z: Complex64) -> MatC {
        MatC::from_vec(1, 1, vec![z]).unwrap()
    }

    /// `E_4(τ) = 1 + 240 Σ σ_3(n) q^n`, an independent oracle for `θ_{E8}(τ, 0)`.
    fn e4(tau: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
        let mut acc = Complex64::new(1.0, 0.0);
        for n in 1..200u64 {
            let sigma3: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
            acc += q.powu(n as u32) * (240.0 * sigma3 as f64);
        }
        acc
    }

    #[test]
    fn matches_e4_at_w_zero() {
        let th = ThetaForm::e8_first_vector(1);
        let policy = TruncationPolicy { r_max: 40.0, ..Default::default() };
        for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.3, 1.1), Complex64::new(-0.5, 0.9)] {
            let v = theta_eval(&th, &pt(tau), &w1(Complex64::new(0.0, 0.0)), &policy).unwrap();
            assert!((v.value - e4(tau)).norm() < 1e-10, "{tau}: {:?} vs {}", v, e4(tau));
        }
    }

    #[test]
    fn constant_term_limit_and_parity() {
        let th = ThetaForm::e8_first_vector(1);
        let policy = TruncationPolicy { r_max: 2.0, eps: 1e-12, ..Default::default() };
        let v = theta_eval(&th, &pt(Complex64::new(0.0, 100.0)), &w1(Complex64::new(0.0, 0.0)), &policy).unwrap();
        assert!((v.value - 1.0).norm() < 1e-12);
        let policy = TruncationPolicy { r_max: 40.0, ..Default::default() };
        let z = pt(Complex64::new(0.2, 1.3));
        let w = Complex64::new(0.37, -0.21);
        let a = theta_eval(&th, &z, &w1(w), &policy).unwrap().value;
        let b = theta_eval(&th, &z, &w1(-w), &policy).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn tail_bound_is_sound_and_enforced() {
        let th = ThetaForm::e8_first_vector(1);
        let z = pt(Complex64::new(0.1, 1.0));
        let w = w1(Complex64::new(0.2, 0.3));
        let small = TruncationPolicy { r_max: 16.0, eps: 1.0, ..Default::default() };
        let big = TruncationPolicy { r_max: 40.0, eps: 1.0, ..Default::default() };
        let a = theta_eval(&th, &z, &w, &small).unwrap();
        let b = theta_eval(&th, &z, &w, &big).unwrap();
        assert!((a.value - b.value).norm() <= a.tail_bound);
        let strict = TruncationPolicy { r_max: 4.0, eps: 1e-9, ..Default::default() };
        assert!(matches!(theta_eval(&th, &z, &w, &strict), Err(Error::TailBudget { .. })));
    }

    #[test]
    fn fourier_table() {
        let th = ThetaForm::e8_first_vector(1);
        let table = theta_fourier(&th, 2.0).unwrap();
        assert_eq!(table.coeff(&Rat::from_integer(0.into()), &[0]), 1);
        assert_eq!(table.total_at(&Rat::from_integer(1.into())), 240);
        assert_eq!(table.total_at(&Rat::from_integer(2.into())), 2160);
        assert!(table.condition_b_holds().unwrap());
    }

    #[test]
    fn degree_two_constant_term() {
        let th = ThetaForm::e8_first_vector(2);
        let z = SiegelPoint::new(
            MatC::from_vec(
                2,
                2,
                vec![Complex64::new(0.0, 3.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 3.0)],
            )
            .unwrap(),
        )
        .unwrap();
        let policy = TruncationPolicy { r_max: 6.0, eps: 1e-3, ..Default::default() };
        let v = theta_eval(&th, &z, &MatC::zeros(1, 2), &policy).unwrap();
        // Diagonal Z: θ factorizes as θ_{E8}(3i)².
        let one = e4(Complex64::new(0.0, 3.0));
        assert!((v.value - one * one).norm() < 1e-3);
    }
}
