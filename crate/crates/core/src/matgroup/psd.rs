use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::MatQ;

/// Exact positive-semidefiniteness test by symmetric pivoted elimination.
///
/// A negative diagonal entry refutes PSD. A zero diagonal entry in a PSD
/// matrix forces its whole row to vanish, so such rows are either dropped
/// or refute PSD. Otherwise a positive pivot is eliminated and the Schur
/// complement is examined.
pub fn psd_check_exact(t: &MatQ) -> Result<bool> {
    if !t.is_symmetric() {
        return Err(Error::InvalidInput("PSD test needs a symmetric matrix".into()));
    }
    let mut a = t.clone();
    let mut active: Vec<usize> = (0..a.rows()).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[(i, i)].is_negative()) {
            return Ok(false);
        }
        let Some(pos) = active.iter().position(|&i| a[(i, i)].is_positive()) else {
            // All remaining diagonal entries vanish: PSD iff the block is zero.
            let zero_block = active.iter().all(|&i| active.iter().all(|&j| a[(i, j)].is_zero()));
            return Ok(zero_block);
        };
        let p = active.remove(pos);
        let pivot = a[(p, p)].clone();
        for &i in &active {
            if a[(i, p)].is_zero() {
                continue;
            }
            let factor = a[(i, p)].clone() / pivot.clone();
            for &j in &active {
                let v = a[(i, j)].clone() - factor.clone() * a[(p, j)].clone();
                a[(i, j)] = v;
            }
        }
        // Zero diagonal rows must be entirely zero.
        for &i in &active {
            if a[(i, i)].is_zero() && active.iter().any(|&j| !a[(i, j)].is_zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact positive definiteness: PSD and nonsingular.
pub fn pd_check_exact(t: &MatQ) -> Result<bool> {
    Ok(psd_check_exact(t)? && !t.det()?.is_zero())
}
