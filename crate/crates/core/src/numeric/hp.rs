use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working-precision context for `BigFloat` arithmetic.
///
/// Transcendental functions go through an owned constants cache, so a fresh
/// `Hp` per unit of work makes every result a pure function of its inputs and
/// the precision.
pub struct Hp {
    prec: usize,
    consts: Consts,
}

impl Hp {
    pub fn new(prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION_BITS);
        Hp { prec, consts: Consts::new().expect("allocate constants cache") }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_int(&self, v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::from_word(0, self.prec);
        }
        let (sign, digits) = v.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let e = (words.len() * Word::BITS as usize) as i32;
        let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
        let mut x = BigFloat::from_words(&words, s, e);
        x.set_precision(self.prec, RM).expect("set precision");
        x
    }

    pub fn from_rational(&self, r: &BigRational) -> BigFloat {
        let n = self.from_int(r.numer());
        let d = self.from_int(r.denom());
        n.div(&d, self.prec, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    /// Newton iteration seeded from `f64`; several times faster than the
    /// correctly rounded library routine and within a couple of ulps of it.
    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        let e = match a.exponent() {
            Some(e) if a.is_positive() && !a.is_zero() => e,
            _ => return a.sqrt(self.prec, RM),
        };
        // a = m·2^e with m in [1/2, 1); move to an even exponent.
        let m_exp = e.rem_euclid(2);
        let mut m = a.clone();
        m.set_exponent(m_exp);
        let mut y = BigFloat::from_f64(to_f64(&m).sqrt(), self.prec);
        let ye = y.exponent().expect("nonzero seed");
        y.set_exponent(ye + (e - m_exp) / 2);
        let half = self.from_f64(0.5);
        let mut bits = 48;
        loop {
            y = self.mul(&self.add(&y, &self.div(a, &y)), &half);
            if bits >= self.prec + 16 {
                return y;
            }
            bits *= 2;
        }
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.prec, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, RM, &mut self.consts)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.consts)
    }

    /// `x^e` for `x > 0`; integer exponents stay on the exact-multiplication path.
    pub fn pow_rational(&mut self, x: &BigFloat, e: &BigRational) -> BigFloat {
        if e.is_integer() {
            if let Some(k) = e.numer().abs().to_usize() {
                let p = self.powi(x, k);
                return if e.is_negative() { self.recip(&p) } else { p };
            }
        }
        // Dyadic exponents reduce to square roots and an integer power.
        let den_bits = e.denom().bits() - 1;
        if den_bits <= 30 && e.denom() == &(BigInt::from(1) << den_bits) {
            if let Some(k) = e.numer().abs().to_usize() {
                let mut root = x.clone();
                for _ in 0..den_bits {
                    root = self.sqrt(&root);
                }
                let p = self.powi(&root, k);
                return if e.is_negative() { self.recip(&p) } else { p };
            }
        }
        let ef = self.from_rational(e);
        x.pow(&ef, self.prec, RM, &mut self.consts)
    }

    pub fn recip(&self, a: &BigFloat) -> BigFloat {
        a.reciprocal(self.prec, RM)
    }

    /// Inflates a nonnegative bound by `2^-(prec - slack_bits)` relative, so
    /// accumulated round-to-nearest error over a handful of operations stays
    /// below the inflation.
    pub fn inflate(&self, a: &BigFloat, slack_bits: usize) -> BigFloat {
        let eps = self.epsilon(slack_bits);
        let one = self.from_i64(1);
        self.mul(a, &self.add(&one, &eps))
    }

    /// Counterpart of [`Hp::inflate`] for lower bounds.
    pub fn deflate(&self, a: &BigFloat, slack_bits: usize) -> BigFloat {
        let eps = self.epsilon(slack_bits);
        let one = self.from_i64(1);
        self.mul(a, &self.sub(&one, &eps))
    }

    /// `2^-(prec - slack_bits)`.
    pub fn epsilon(&self, slack_bits: usize) -> BigFloat {
        let shift = self.prec.saturating_sub(slack_bits).max(1);
        let mut e = self.from_i64(1);
        e.set_exponent(1 - shift as i32);
        e
    }

    pub fn max<'a>(&self, a: &'a BigFloat, b: &'a BigFloat) -> &'a BigFloat {
        if cmp(a, b) >= 0 {
            a
        } else {
            b
        }
    }
}

/// Three-way comparison; NaN compares as equal, which callers never produce.
pub fn cmp(a: &BigFloat, b: &BigFloat) -> i32 {
    a.cmp(b).map(|c| c.signum() as i32).unwrap_or(0)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().expect("nonzero mantissa") as u64;
    let e = exp as i64 - 64;
    // Split the scaling so neither factor overflows on its own.
    let mut v = top as f64;
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        v *= 2f64.powi(step as i32);
        rem -= step;
        if v == 0.0 || v.is_infinite() {
            break;
        }
    }
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Exact value of a finite float.
pub fn to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let mut mantissa = BigInt::zero();
    for w in words.iter().rev() {
        mantissa = (mantissa << Word::BITS as usize) + BigInt::from(*w as u64);
    }
    if sign == Sign::Neg {
        mantissa = -mantissa;
    }
    let shift = exp as i64 - (words.len() as i64) * Word::BITS as i64;
    let one = BigInt::from(1);
    Some(if shift >= 0 {
        BigRational::from_integer(mantissa << shift as usize)
    } else {
        BigRational::new(mantissa, one << (-shift) as usize)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Nearest,
    Down,
    Up,
}

/// Decimal digits that a float of `prec` bits carries reliably.
pub fn decimal_digits(prec: usize) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize - 1
}

/// Scientific decimal string `d.ddd…e±E` with `digits` significant digits,
/// rounded in the given direction. Output depends only on the value.
pub fn format_decimal(x: &BigFloat, digits: usize, dir: Direction) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf_pos() {
        return "inf".into();
    }
    if x.is_inf_neg() {
        return "-inf".into();
    }
    let r = to_rational(x).expect("finite");
    format_rational_decimal(&r, digits, dir)
}

pub fn format_rational_decimal(r: &BigRational, digits: usize, dir: Direction) -> String {
    use num_integer::Integer;
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::from(1), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    // Settle 10^e <= a < 10^(e+1).
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    // Rounding the magnitude: Up/Down refer to the signed value.
    let toward_up = match dir {
        Direction::Up => !negative,
        Direction::Down => negative,
        Direction::Nearest => false,
    };
    let render = |e: i64| -> (BigInt, i64) {
        let scaled = &a * pow10(digits as i64 - 1 - e);
        let (q, rem) = scaled.numer().div_rem(scaled.denom());
        let q = match dir {
            Direction::Nearest => {
                let twice = &rem * 2;
                if &twice > scaled.denom() || (&twice == scaled.denom() && q.is_odd()) {
                    q + 1
                } else {
                    q
                }
            }
            _ if toward_up && !rem.is_zero() => q + 1,
            _ => q,
        };
        (q, e)
    };
    let (mut q, mut e2) = render(e);
    if q.to_string().len() > digits {
        e += 1;
        (q, e2) = render(e);
        if q.to_string().len() > digits {
            q /= &ten;
        }
    }
    let s = q.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e2}")
    } else {
        format!("{sign}{head}.{tail}e{e2}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_formatting() {
        let hp = Hp::new(128);
        let third = hp.from_rational(&BigRational::new(1.into(), 3.into()));
        assert_eq!(format_decimal(&third, 5, Direction::Nearest), "3.3333e-1");
        assert_eq!(format_decimal(&third, 5, Direction::Up), "3.3334e-1");
        assert_eq!(format_decimal(&third, 5, Direction::Down), "3.3333e-1");
        assert_eq!(format_decimal(&hp.from_i64(-1250), 2, Direction::Nearest), "-1.2e3");
        assert_eq!(format_decimal(&hp.from_i64(-1250), 2, Direction::Down), "-1.3e3");
        assert_eq!(format_decimal(&hp.from_i64(9999), 2, Direction::Up), "1e4");
        assert_eq!(format_decimal(&hp.from_i64(0), 5, Direction::Up), "0");
        let r = to_rational(&hp.from_f64(0.375)).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 8.into()));
    }

    #[test]
    fn integer_and_rational_conversion() {
        let hp = Hp::new(128);
        let big = BigInt::from(3u8).pow(200);
        let x = hp.from_int(&big);
        let back = to_f64(&x);
        assert!((back / 3f64.powi(200) - 1.0).abs() < 1e-15);
        let r = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(to_f64(&hp.from_rational(&r)), -3.5);
        assert_eq!(to_f64(&hp.from_int(&BigInt::from(0))), 0.0);
    }

    #[test]
    fn pow_and_inflate() {
        let mut hp = Hp::new(128);
        let two = hp.from_i64(2);
        let half = BigRational::new(1.into(), 2.into());
        let s = hp.pow_rational(&two, &half);
        assert!((to_f64(&s) - 2f64.sqrt()).abs() < 1e-15);
        let q = hp.pow_rational(&two, &BigRational::new((-5).into(), 8.into()));
        assert!((to_f64(&q) - 2f64.powf(-0.625)).abs() < 1e-15);
        let third = hp.pow_rational(&hp.from_i64(27), &BigRational::new(1.into(), 3.into()));
        assert!((to_f64(&third) - 3.0).abs() < 1e-15);
        let neg = hp.pow_rational(&two, &BigRational::from_integer((-3).into()));
        assert_eq!(to_f64(&neg), 0.125);
        let up = hp.inflate(&two, 8);
        assert!(cmp(&up, &two) > 0);
        assert!(to_f64(&hp.sub(&up, &two)) < 1e-30);
    }

    #[test]
    fn newton_sqrt_matches_library() {
        for prec in [64, 128, 256, 1024] {
            let hp = Hp::new(prec);
            for v in [2.0, 0.3, 1e-300, 7.5e250, 1.0, 0.5, 3.0] {
                let x = hp.mul(&hp.from_f64(v), &hp.powi(&hp.from_i64(3), 5));
                let ours = hp.sqrt(&x);
                let lib = x.sqrt(prec, RM);
                let rel = hp.div(&hp.sub(&ours, &lib), &lib);
                assert!(cmp(&hp.mul(&rel, &rel), &hp.mul(&hp.epsilon(4), &hp.epsilon(4))) <= 0, "{v} at {prec}");
            }
        }
        let hp = Hp::new(128);
        assert_eq!(to_f64(&hp.sqrt(&hp.from_i64(0))), 0.0);
        assert_eq!(to_f64(&hp.sqrt(&hp.from_i64(16))), 4.0);
    }

    #[test]
    fn extreme_exponents_convert() {
        let hp = Hp::new(128);
        let x = hp.powi(&hp.from_i64(10), 400);
        assert_eq!(to_f64(&x), f64::INFINITY);
        let y = hp.recip(&x);
        assert_eq!(to_f64(&y), 0.0);
    }
}
