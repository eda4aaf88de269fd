use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::forms::{EvenUnimodularForm, HalfIntegralIndex};
use crate::json::{mat_c_from_json, mat_q_from_json};
use crate::matgroup::SiegelPoint;
use crate::matrix::{MatC, MatQ};
use crate::scalar::{parse_complex, parse_rat, Rat};

/// Inline JSON (starting with `[` or `{`) or the JSON contents of a file.
fn json_source(text: &str) -> Result<Value> {
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(serde_json::from_str(t)?);
    }
    let path = Path::new(t);
    if !path.exists() {
        return Err(Error::InvalidInput(format!("{t:?} is neither inline JSON nor an existing file")));
    }
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// `identity`, a rational `c` (meaning `c·E_m`), inline JSON or a file.
pub fn parse_rational_matrix(text: &str, m: usize) -> Result<MatQ> {
    let t = text.trim();
    if t == "identity" {
        return Ok(MatQ::identity(m));
    }
    if let Ok(c) = parse_rat(t) {
        return Ok(MatQ::identity(m).scale(&c));
    }
    mat_q_from_json(&json_source(t)?)
}

/// A complex scalar (`n = 1`), inline JSON or a file holding a matrix.
pub fn parse_complex_matrix(text: &str, rows: usize, cols: usize) -> Result<MatC> {
    let t = text.trim();
    let out = match parse_complex(t) {
        Ok(z) if rows == cols => MatC::identity(rows).scale(&z),
        Ok(z) if z.norm() == 0.0 => MatC::zeros(rows, cols),
        Ok(_) => return Err(Error::InvalidInput(format!("a scalar cannot describe a {rows}x{cols} matrix"))),
        Err(_) => mat_c_from_json(&json_source(t)?)?,
    };
    if out.shape() != (rows, cols) {
        return Err(Error::Dimension(format!("expected a {rows}x{cols} matrix, got {:?}", out.shape())));
    }
    Ok(out)
}

pub fn parse_point(text: &str, n: usize) -> Result<SiegelPoint> {
    SiegelPoint::new(parse_complex_matrix(text, n, n)?)
}

/// `e8` or a Gram matrix given inline or in a file.
pub fn parse_lattice(text: &str) -> Result<EvenUnimodularForm> {
    if text.trim().eq_ignore_ascii_case("e8") {
        return Ok(EvenUnimodularForm::e8());
    }
    EvenUnimodularForm::new(mat_q_from_json(&json_source(text)?)?)
}

/// `e1` (first basis vector), `e1,e2,…` or an integral matrix.
pub fn parse_c(text: &str, size: usize) -> Result<MatQ> {
    let t = text.trim();
    if t.starts_with('e') {
        let idx = t
            .split(',')
            .map(|part| {
                let k: usize = part.trim().trim_start_matches('e').parse().map_err(|_| Error::Parse(format!("bad column {part:?}")))?;
                if k == 0 || k > size {
                    return Err(Error::InvalidInput(format!("basis vector e{k} outside 1..={size}")));
                }
                Ok(k - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c = MatQ::zeros(size, idx.len());
        for (col, &row) in idx.iter().enumerate() {
            c[(row, col)] = Rat::from_integer(1.into());
        }
        return Ok(c);
    }
    mat_q_from_json(&json_source(t)?)
}

pub fn parse_index(text: &str) -> Result<HalfIntegralIndex> {
    HalfIntegralIndex::new(parse_rational_matrix(text, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn scalars_and_json() {
        assert_eq!(parse_point("100i", 1).unwrap().matrix()[(0, 0)], Complex64::new(0.0, 100.0));
        assert_eq!(parse_point("[[\"0.3+1.1i\"]]", 1).unwrap().matrix()[(0, 0)], Complex64::new(0.3, 1.1));
        assert_eq!(parse_point("i", 2).unwrap().matrix()[(1, 1)], Complex64::i());
        assert!(parse_complex_matrix("0", 1, 2).unwrap().is_zero());
        assert_eq!(parse_rational_matrix("identity", 2).unwrap(), MatQ::identity(2));
        assert_eq!(parse_rational_matrix("1/2", 1).unwrap()[(0, 0)], Rat::new(1.into(), 2.into()));
        assert!(parse_rational_matrix("[[1, 2], [2]]", 2).is_err());
        assert_eq!(parse_c("e1,e3", 8).unwrap().shape(), (8, 2));
        assert!(parse_c("e9", 8).is_err());
        assert!(parse_lattice("[[1]]").is_err());
    }
}
