//! Scalar fields used throughout the crate.
//!
//! Group elements and polynomial algebra live over exact fields
//! ([`Rat`], [`GaussRational`]); analytic objects live over [`Complex64`].
//! The [`Scalar`] trait lets matrices, polynomials and linear solves be
//! written once for both worlds.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Rational complex number `re + i·im`.
pub type GaussRational = Complex<Rat>;

/// Relative size under which an approximate pivot is treated as zero.
pub const APPROX_PIVOT_EPS: f64 = 1e-13;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// `true` for exact fields, where zero tests are decisive.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rat(v: &Rat) -> Self;
    /// Magnitude used for pivot selection and tolerance scaling.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    /// Zero test relative to `scale`; exact types ignore the scale.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= APPROX_PIVOT_EPS * scale.max(1.0)
        }
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator/denominator: scale both down before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse `"p/q"`, `"p"` or a decimal literal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Ok(r) = Rat::from_str(s) {
        if r.denom().is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(r);
    }
    // Decimal fallback: exact conversion of the written digits.
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a rational number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|e| Error::Parse(e.to_string()))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = Rat::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// `"p/q"` with `q ≥ 1`, always carrying the slash.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        rat_int(v)
    }
    fn from_rat(v: &Rat) -> Self {
        v.clone()
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.abs())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(rat_int(v), Rat::zero())
    }
    fn from_rat(v: &Rat) -> Self {
        Complex::new(v.clone(), Rat::zero())
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.re).hypot(rat_to_f64(&self.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rat(v: &Rat) -> Self {
        Complex64::new(rat_to_f64(v), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

pub fn gauss(re: Rat, im: Rat) -> GaussRational {
    Complex::new(re, im)
}

/// Complex number as the `[re, im]` JSON pair.
pub fn c64_to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Parse `"0.3+1.1i"`, `"100i"`, `"-i"`, `"2"` style literals.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let parse_im = |txt: &str| -> Result<f64> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other.parse::<f64>().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            Complex64::new(re, parse_im(&body[idx..])?)
        }
        None => Complex64::new(0.0, parse_im(body)?),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert_eq!(format_rat(&rat_int(3)), "3/1");
    }

    #[test]
    fn parses_complex_forms() {
        assert_eq!(parse_complex("100i").unwrap(), Complex64::new(0.0, 100.0));
        assert_eq!(parse_complex("0.3+1.1i").unwrap(), Complex64::new(0.3, 1.1));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), Complex64::new(1e-3, -20.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rat::new(num_traits::pow(BigInt::from(10), 400), num_traits::pow(BigInt::from(10), 399));
        assert!((rat_to_f64(&big) - 10.0).abs() < 1e-12);
    }
}
