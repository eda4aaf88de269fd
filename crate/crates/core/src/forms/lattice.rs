use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matgroup::pd_check_exact;
use crate::matrix::MatQ;
use crate::scalar::{rat_to_f64, Rat};

/// Positive definite, unimodular, even symmetric integral matrix of size `2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenUnimodularForm {
    s: MatQ,
    gram: Vec<i64>,
}

impl EvenUnimodularForm {
    pub fn new(s: MatQ) -> Result<Self> {
        let n = s.rows();
        if !s.is_square() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("lattice Gram matrix must be square of even size, got {:?}", s.shape())));
        }
        if !s.is_integral() || !s.is_symmetric() {
            return Err(Error::InvalidInput("lattice Gram matrix must be symmetric and integral".into()));
        }
        let gram: Vec<i64> = s
            .iter()
            .map(|v| v.to_integer().to_i64().ok_or_else(|| Error::InvalidInput("Gram entry too large".into())))
            .collect::<Result<_>>()?;
        if (0..n).any(|i| gram[i * n + i] % 2 != 0) {
            return Err(Error::InvalidInput("lattice is not even (odd diagonal entry)".into()));
        }
        if !pd_check_exact(&s)? {
            return Err(Error::InvalidInput("lattice Gram matrix is not positive definite".into()));
        }
        if s.det()? != Rat::from_integer(1.into()) {
            return Err(Error::InvalidInput("lattice is not unimodular".into()));
        }
        Ok(EvenUnimodularForm { s, gram })
    }

    /// The `E8` root lattice in the Bourbaki labelling (validated, not trusted).
    pub fn e8() -> Self {
        const EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in EDGES {
            rows[a - 1][b - 1] = -1;
            rows[b - 1][a - 1] = -1;
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Self::new(MatQ::from_i64_rows(&refs).expect("rectangular")).expect("E8 Cartan matrix is even unimodular")
    }

    pub fn matrix(&self) -> &MatQ {
        &self.s
    }

    pub fn gram(&self) -> &[i64] {
        &self.gram
    }

    pub fn size(&self) -> usize {
        self.s.rows()
    }

    /// Weight `k` of the attached theta series (`size = 2k`).
    pub fn weight(&self) -> i32 {
        (self.size() / 2) as i32
    }
}

/// Fincke–Pohst enumeration of `{x ∈ Z^N : ᵗx G x ≤ bound}` for an integral
/// positive definite Gram matrix.
///
/// The decomposition `ᵗxGx = Σ_i d_i (x_i + Σ_{j>i} μ_ij x_j)²` is computed
/// exactly and then rounded; intervals are widened by a small slack so that
/// rounding never drops a point, and every leaf is re-checked against the
/// exact integer bound.
#[derive(Clone, Debug)]
pub struct ShortVectors {
    dim: usize,
    gram: Vec<i64>,
    d: Vec<f64>,
    mu: Vec<f64>,
}

const SLACK: f64 = 1e-6;

impl ShortVectors {
    pub fn new(gram: &[i64], dim: usize) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::Dimension("Gram matrix has the wrong number of entries".into()));
        }
        let g = MatQ::from_fn(dim, dim, |i, j| Rat::from_integer(gram[i * dim + j].into()));
        let (d, mu) = ldl_upper(&g)?;
        Ok(ShortVectors { dim, gram: gram.to_vec(), d: d.iter().map(rat_to_f64).collect(), mu: mu.iter().map(rat_to_f64).collect() })
    }

    /// Block-diagonal Gram matrix `G ⊕ … ⊕ G` (`copies` times).
    pub fn block_diagonal(gram: &[i64], dim: usize, copies: usize) -> Result<Self> {
        let big = dim * copies;
        let mut g = vec![0; big * big];
        for b in 0..copies {
            for i in 0..dim {
                for j in 0..dim {
                    g[(b * dim + i) * big + b * dim + j] = gram[i * dim + j];
                }
            }
        }
        Self::new(&g, big)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper bound `Π_i (2√(r/d_i) + 1)` on the number of points of norm `≤ r`.
    pub fn box_count(&self, r: f64) -> f64 {
        self.d.iter().map(|di| 2.0 * (r.max(0.0) / di).sqrt() + 1.0).product()
    }

    /// Visit every point with norm `≤ bound`, passing the point and its norm.
    pub fn for_each(&self, bound: i64, mut f: impl FnMut(&[i64], i64)) {
        if bound < 0 {
            return;
        }
        let mut x = vec![0i64; self.dim];
        self.descend(self.dim, bound as f64, 0.0, &mut x, bound, &mut f);
    }

    pub fn collect(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each(bound, |x, _| out.push(x.to_vec()));
        out
    }

    fn descend(&self, level: usize, bound_f: f64, partial: f64, x: &mut [i64], bound: i64, f: &mut impl FnMut(&[i64], i64)) {
        if level == 0 {
            // Norms are integers and the float partial sum is accurate far
            // beyond ±1/2, so rounding recovers the exact value; anything
            // that looks off is recomputed exactly.
            let rounded = partial.round();
            let norm = if (partial - rounded).abs() < 1e-3 { rounded as i64 } else { self.exact_norm(x) };
            if norm <= bound {
                f(x, norm);
            }
            return;
        }
        let i = level - 1;
        let n = self.dim;
        let center: f64 = (i + 1..n).map(|j| self.mu[i * n + j] * x[j] as f64).sum();
        let budget = bound_f - partial;
        if budget < -SLACK * (1.0 + bound_f) {
            return;
        }
        let rad = (budget.max(0.0) / self.d[i]).sqrt() + SLACK * (1.0 + bound_f.sqrt());
        let lo = (-center - rad).ceil() as i64;
        let hi = (-center + rad).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 + center;
            self.descend(i, bound_f, partial + self.d[i] * t * t, x, bound, f);
        }
        x[i] = 0;
    }

    fn exact_norm(&self, x: &[i64]) -> i64 {
        let n = self.dim;
        let mut acc = 0i64;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row: i64 = (0..n).map(|j| self.gram[i * n + j] * x[j]).sum();
            acc += x[i] * row;
        }
        acc
    }
}

/// Exact `G = ᵗU D U` with `U` unit upper triangular; returns `(d, μ)` with
/// `μ` stored row-major (`μ_ij` for `j > i`).
pub fn ldl_upper(g: &MatQ) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let n = g.rows();
    let mut d = vec![Rat::zero(); n];
    let mut mu = vec![Rat::zero(); n * n];
    for i in 0..n {
        let mut di = g[(i, i)].clone();
        for k in 0..i {
            di -= mu[k * n + i].clone() * mu[k * n + i].clone() * d[k].clone();
        }
        if di <= Rat::zero() {
            return Err(Error::InvalidInput("Gram matrix is not positive definite".into()));
        }
        for j in i + 1..n {
            let mut v = g[(i, j)].clone();
            for k in 0..i {
                v -= mu[k * n + i].clone() * mu[k * n + j].clone() * d[k].clone();
            }
            mu[i * n + j] = v / di.clone();
        }
        d[i] = di;
    }
    Ok((d, mu))
}

/// All points of `Z^N` with `ᵗxGx ≤ bound`.
pub fn lattice_points(s: &EvenUnimodularForm, bound: f64) -> Vec<Vec<i64>> {
    ShortVectors::new(s.gram(), s.size()).expect("validated lattice").collect(bound.floor() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_is_valid_and_has_240_roots() {
        let e8 = EvenUnimodularForm::e8();
        assert_eq!(e8.weight(), 4);
        assert_eq!(lattice_points(&e8, 0.0), vec![vec![0; 8]]);
        let pts = lattice_points(&e8, 2.0);
        assert_eq!(pts.len(), 241);
        assert_eq!(lattice_points(&e8, 4.0).len(), 1 + 240 + 2160);
    }

    #[test]
    fn matches_box_search() {
        // Brute force over a box that provably contains the norm-≤4 points
        // of a small form.
        let gram = [2, 1, 1, 2];
        let sv = ShortVectors::new(&gram, 2).unwrap();
        let mut brute = Vec::new();
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                if 2 * a * a + 2 * a * b + 2 * b * b <= 6 {
                    brute.push(vec![a, b]);
                }
            }
        }
        let mut got = sv.collect(6);
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
        assert!(sv.box_count(6.0) >= got.len() as f64);
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(EvenUnimodularForm::new(MatQ::identity(2)).is_err());
        let a2 = MatQ::from_i64_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        assert!(EvenUnimodularForm::new(a2).is_err());
        let hyperbolic = MatQ::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(EvenUnimodularForm::new(hyperbolic).is_err());
    }

    #[test]
    fn block_diagonal_counts_square() {
        let e8 = EvenUnimodularForm::e8();
        let sv = ShortVectors::block_diagonal(e8.gram(), 8, 2).unwrap();
        // Norm ≤ 2 in E8 ⊕ E8: 1 + 240 + 240.
        assert_eq!(sv.collect(2).len(), 481);
    }
}
