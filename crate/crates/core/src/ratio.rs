//! Parsing and canonical formatting for exact rationals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Parse "p/q" or a bare integer "p" into a reduced rational.
pub fn parse_ratio(text: &str) -> Result<Rat> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::BadRational("empty string".into()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n =
            BigInt::from_str(num.trim()).map_err(|e| Error::BadRational(format!("{t}: {e}")))?;
        let d =
            BigInt::from_str(den.trim()).map_err(|e| Error::BadRational(format!("{t}: {e}")))?;
        if d.is_zero() {
            return Err(Error::BadRational(format!("{t}: zero denominator")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(t).map_err(|e| Error::BadRational(format!("{t}: {e}")))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Canonical "p/q" form: always an explicit slash, reduced, q > 0.
pub fn fmt_ratio(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Lossy conversion for statistics output only; never used in decisions.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let digits = 17usize;
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.numer() * &scale) / r.denom();
    let neg = scaled.is_negative();
    let mag: f64 = scaled
        .magnitude()
        .to_string()
        .parse()
        .unwrap_or(f64::INFINITY);
    let v = mag / 10f64.powi(digits as i32);
    if neg {
        -v
    } else {
        v
    }
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}
