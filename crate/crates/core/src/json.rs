//! JSON encodings: rational matrices as rows of `"p/q"` strings, complex
//! numbers as `[re, im]` pairs, polynomials as lists of
//! `{exponents, coeff: ["p/q", "r/s"]}` terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{MatC, MatQ};
use crate::polyharm::{ExactPoly, Monomial, PluriharmonicBasis};
use crate::scalar::{format_rat, gauss, parse_complex, parse_rat, Rat};

pub fn mat_q_to_json(a: &MatQ) -> Value {
    Value::from((0..a.rows()).map(|r| Value::from(a.row(r).iter().map(format_rat).collect::<Vec<_>>())).collect::<Vec<_>>())
}

pub fn mat_c_to_json(a: &MatC) -> Value {
    Value::from((0..a.rows()).map(|r| Value::from(a.row(r).iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>())).collect::<Vec<_>>())
}

pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_integer(i.into())),
            None => parse_rat(&n.to_string()),
        },
        other => Err(Error::Parse(format!("expected a rational entry, got {other}"))),
    }
}

fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v {
        Value::String(s) => parse_complex(s),
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)).ok_or_else(|| Error::Parse(n.to_string())),
        Value::Array(pair) if pair.len() == 2 => {
            let part = |p: &Value| p.as_f64().ok_or_else(|| Error::Parse(format!("bad complex part {p}")));
            Ok(Complex64::new(part(&pair[0])?, part(&pair[1])?))
        }
        other => Err(Error::Parse(format!("expected a complex entry, got {other}"))),
    }
}

fn rows_of(v: &Value) -> Result<&Vec<Value>> {
    let v = v.get("matrix").or_else(|| v.get("S")).unwrap_or(v);
    v.as_array().ok_or_else(|| Error::Parse("expected a matrix as an array of rows".into()))
}

/// Rational matrix from rows of integers, decimals or `"p/q"` strings.
/// An object with a `"matrix"` or `"S"` field is unwrapped first.
pub fn mat_q_from_json(v: &Value) -> Result<MatQ> {
    let rows = rows_of(v)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row is not an array".into()))?
                .iter()
                .map(rat_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatQ::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
}

/// Complex matrix from rows of `[re, im]`, numbers or `"a+bi"` strings.
pub fn mat_c_from_json(v: &Value) -> Result<MatC> {
    let rows = rows_of(v)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row is not an array".into()))?
                .iter()
                .map(complex_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatC::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coeff: [String; 2],
}

pub fn poly_to_json(p: &ExactPoly) -> Value {
    let terms: Vec<TermJson> = p
        .terms()
        .map(|(mono, c)| TermJson { exponents: mono.exponents().to_vec(), coeff: [format_rat(&c.re), format_rat(&c.im)] })
        .collect();
    serde_json::to_value(terms).expect("serializable")
}

pub fn poly_from_json(m: usize, n: usize, v: &Value) -> Result<ExactPoly> {
    let terms: Vec<TermJson> = serde_json::from_value(v.clone())?;
    let parsed = terms
        .into_iter()
        .map(|t| Ok((Monomial::new(t.exponents), gauss(parse_rat(&t.coeff[0])?, parse_rat(&t.coeff[1])?))))
        .collect::<Result<Vec<_>>>()?;
    ExactPoly::from_terms(m, n, parsed)
}

pub fn basis_to_json(b: &PluriharmonicBasis) -> Value {
    let (m, n) = b.shape();
    json!({
        "m": m,
        "n": n,
        "degree": b.degree,
        "S": mat_q_to_json(b.s.s()),
        "monomial_order": PluriharmonicBasis::MONOMIAL_ORDER,
        "dimension": b.dim(),
        "basis": b.elements.iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}
