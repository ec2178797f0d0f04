//! Scalar plumbing: exact rational literals, the exact-field abstraction used by
//! the Schur layer, and high-precision floats.

mod field;
pub mod hp;
mod surd;

pub use field::ExactField;
pub use hp::{
    decimal_digits, format_decimal, format_rational_decimal, to_f64, to_rational, Direction, Hp, DEFAULT_PRECISION_BITS,
    MIN_PRECISION_BITS,
};
pub use surd::QuadSurd;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty numeric literal")]
    Empty,
    #[error("malformed numeric literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `num/den`, integer, decimal (`3.5`, `-0.25`) and scientific
/// (`1e-10`, `2.5E3`) literals into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        let den = parse_decimal(den.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.into()));
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(|| ParseRationalError::Malformed(s.into()))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= Pow::pow(&ten, scale as u64);
    } else {
        value /= Pow::pow(&ten, scale.unsigned_abs());
    }
    Some(if negative { -value } else { value })
}

/// Formats a rational as `num/den`, or `num` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on huge
/// numerators and denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    // Shift both to ~64 significant bits before dividing.
    let num_shift = (num_bits - 64).max(0);
    let den_shift = (den_bits - 64).max(0);
    let n = (r.numer().abs() >> num_shift as usize).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = (r.denom() >> den_shift as usize).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let e = num_shift - den_shift;
    let mag = n / d * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `base^exp` for an integer exponent of either sign.
pub fn rational_powi(base: &BigRational, exp: i64) -> BigRational {
    let p = Pow::pow(base, exp.unsigned_abs());
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

/// Exact `n`-th root of a nonnegative rational, if it is a perfect power.
pub fn rational_root_exact(r: &BigRational, n: u32) -> Option<BigRational> {
    if r.is_negative() || n == 0 {
        return None;
    }
    let num = r.numer().to_biguint()?;
    let den = r.denom().to_biguint()?;
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if Pow::pow(&rn, n) == num && Pow::pow(&rd, n) == den {
        Some(BigRational::new(rn.into(), rd.into()))
    } else {
        None
    }
}
