use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{MatC, Matrix};
use crate::scalar::{GaussRational, Scalar};

/// Exponent vector over the variables `W_{11}, W_{12}, …, W_{mn}` (row-major).
///
/// Ordered graded-lexicographically with `W_{11} > W_{12} > … > W_{mn}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self`, assuming divisibility.
    fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    /// All monomials of total degree `d` in `vars` variables, largest first.
    pub fn all_of_degree(vars: usize, d: u32) -> Vec<Monomial> {
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if vars == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(0, d, &mut vec![0; vars], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in the entries of an `m×n` matrix variable `W`.
#[derive(Clone, PartialEq)]
pub struct SparsePoly<K> {
    m: usize,
    n: usize,
    terms: BTreeMap<Monomial, K>,
    homogeneous_degree: Option<u32>,
}

/// Polynomial with Gaussian-rational coefficients.
pub type ExactPoly = SparsePoly<GaussRational>;
/// Polynomial with complex floating coefficients.
pub type ApproxPoly = SparsePoly<Complex64>;

impl<K: Scalar> fmt::Debug for SparsePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[{}x{}](", self.m, self.n)?;
        for (i, (mono, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}*{:?}", c, mono.exponents())?;
        }
        write!(f, ")")
    }
}

impl<K: Scalar> SparsePoly<K> {
    pub fn from_terms(m: usize, n: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Result<Self> {
        let mut map: BTreeMap<Monomial, K> = BTreeMap::new();
        for (mono, c) in terms {
            if mono.0.len() != m * n {
                return Err(Error::Dimension(format!("monomial with {} exponents in a {m}x{n} polynomial ring", mono.0.len())));
            }
            match map.get_mut(&mono) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    map.insert(mono, c);
                }
            }
        }
        Ok(Self::normalized(m, n, map))
    }

    fn normalized(m: usize, n: usize, mut terms: BTreeMap<Monomial, K>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let mut degrees = terms.keys().map(Monomial::degree);
        let homogeneous_degree = match degrees.next() {
            Some(d) if degrees.all(|e| e == d) => Some(d),
            _ => None,
        };
        SparsePoly { m, n, terms, homogeneous_degree }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self::normalized(m, n, BTreeMap::new())
    }

    pub fn constant(m: usize, n: usize, c: K) -> Self {
        Self::normalized(m, n, BTreeMap::from([(Monomial::one(m * n), c)]))
    }

    pub fn one(m: usize, n: usize) -> Self {
        Self::constant(m, n, K::one())
    }

    /// The coordinate function `W_{kl}` (zero-based indices).
    pub fn var(m: usize, n: usize, k: usize, l: usize) -> Self {
        assert!(k < m && l < n, "variable index out of range");
        let mut e = vec![0; m * n];
        e[k * n + l] = 1;
        Self::normalized(m, n, BTreeMap::from([(Monomial(e), K::one())]))
    }

    pub fn monomial(m: usize, n: usize, exponents: Vec<u32>, c: K) -> Result<Self> {
        Self::from_terms(m, n, [(Monomial(exponents), c)])
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn num_vars(&self) -> usize {
        self.m * self.n
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> K {
        self.terms.get(mono).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common degree of all terms, if nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        self.homogeneous_degree
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&Monomial::one(self.num_vars()))
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!("polynomials on {:?} and {:?} matrices", self.shape(), other.shape())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Self::from_terms(self.m, self.n, self.terms.iter().chain(&other.terms).map(|(k, v)| (k.clone(), v.clone())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-K::one()))
    }

    pub fn scale(&self, s: &K) -> Self {
        Self::normalized(self.m, self.n, self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * s.clone())).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out: BTreeMap<Monomial, K> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match out.get_mut(&mono) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        out.insert(mono, c);
                    }
                }
            }
        }
        Ok(Self::normalized(self.m, self.n, out))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m, self.n);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `∂/∂W_v` for the flat variable index `v = k·n + l`.
    pub fn derivative(&self, v: usize) -> Self {
        assert!(v < self.num_vars(), "variable index out of range");
        let terms = self.terms.iter().filter(|(mono, _)| mono.0[v] > 0).map(|(mono, c)| {
            let mut e = mono.0.clone();
            let factor = K::from_i64(i64::from(e[v]));
            e[v] -= 1;
            (Monomial(e), c.clone() * factor)
        });
        Self::normalized(self.m, self.n, terms.collect())
    }

    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> SparsePoly<L> {
        SparsePoly::normalized(self.m, self.n, self.terms.iter().map(|(k, v)| (k.clone(), f(v))).collect())
    }

    pub fn to_approx(&self) -> ApproxPoly {
        self.map_coeffs(Scalar::to_c64)
    }

    /// Evaluate at `W` over the coefficient field itself.
    pub fn evaluate(&self, w: &Matrix<K>) -> Result<K> {
        self.check_point(w.shape())?;
        let vals = w.as_slice();
        let mut acc = K::zero();
        for (mono, c) in self.terms() {
            let mut t = c.clone();
            for (v, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * vals[v].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Evaluate at a complex point, summing monomials in descending order.
    pub fn eval(&self, w: &MatC) -> Result<Complex64> {
        self.check_point(w.shape())?;
        let vals = w.as_slice();
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in self.terms() {
            let mut t = c.to_c64();
            for (v, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t *= vals[v].powu(e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    fn check_point(&self, shape: (usize, usize)) -> Result<()> {
        if shape != (self.m, self.n) {
            return Err(Error::Dimension(format!("polynomial on {}x{} matrices evaluated at {:?}", self.m, self.n, shape)));
        }
        Ok(())
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).sum()
    }
}

/// `∏ e_i! / (e_i − a_i)!` for `a ≤ e`.
fn falling_factor<K: Scalar>(a: &Monomial, e: &Monomial) -> K {
    let mut acc = K::one();
    for (&ai, &ei) in a.0.iter().zip(&e.0) {
        for j in 0..ai {
            acc = acc * K::from_i64(i64::from(ei - j));
        }
    }
    acc
}

/// `P(∂_W) Q`, monomial by monomial with falling-factorial coefficients.
pub fn apply_diff_op<K: Scalar>(p: &SparsePoly<K>, q: &SparsePoly<K>) -> Result<SparsePoly<K>> {
    p.check_same_ring(q)?;
    let mut out: BTreeMap<Monomial, K> = BTreeMap::new();
    for (mp, cp) in &p.terms {
        for (mq, cq) in &q.terms {
            if !mp.divides(mq) {
                continue;
            }
            let mono = mp.quotient(mq);
            let c = cp.clone() * cq.clone() * falling_factor::<K>(mp, mq);
            match out.get_mut(&mono) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    out.insert(mono, c);
                }
            }
        }
    }
    Ok(SparsePoly::normalized(p.m, p.n, out))
}

/// `<P, Q> = (P(∂_W) Q)(0)`.
pub fn bilinear_form<K: Scalar>(p: &SparsePoly<K>, q: &SparsePoly<K>) -> Result<K> {
    p.check_same_ring(q)?;
    // Only matching monomials survive at W = 0: <W^a, W^b> = δ_ab · a!.
    let mut acc = K::zero();
    for (mono, cp) in &p.terms {
        if let Some(cq) = q.terms.get(mono) {
            acc = acc + cp.clone() * cq.clone() * falling_factor::<K>(mono, mono);
        }
    }
    Ok(acc)
}
