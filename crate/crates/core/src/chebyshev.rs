//! Second-kind Chebyshev dimension functions.
//!
//! `f_k` satisfies `f_0 = 1`, `f_1 = t`, `f_{k+1} = t·f_k − f_{k−1}`; for
//! `t > 2` it has the closed form `(u^{k+1} − u^{−(k+1)})/(u − u^{−1})` with
//! `u = (t + √(t²−4))/2`, and `f_k(2) = k + 1`. The SO(3)-type family is
//! `g_k(x) = f_{2k}(√x)`, a polynomial in `x` with `g_k(4) = 2k + 1`.

use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::numeric::{format_rational, hp::cmp, to_f64, Hp, DEFAULT_PRECISION_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChebyshevError {
    #[error("f_k is only evaluated for t >= 2, got {0}")]
    BelowTwo(String),
    #[error("g_k is only evaluated for x >= 4, got {0}")]
    BelowFour(String),
    #[error("the envelope needs t > 2 strictly, got {0}")]
    EnvelopeDomain(String),
}

/// Two-sided bracket `lower ≤ f_k(t) ≤ upper` for `t > 2`, with the growth base `u`.
#[derive(Debug, Clone)]
pub struct ChebEnvelope {
    pub lower: BigFloat,
    pub upper: BigFloat,
    pub base_u: BigFloat,
}

impl ChebEnvelope {
    pub fn contains(&self, value: &BigFloat) -> bool {
        cmp(&self.lower, value) <= 0 && cmp(value, &self.upper) <= 0
    }

    /// `(upper − lower)/lower`.
    pub fn relative_width(&self, hp: &Hp) -> BigFloat {
        hp.div(&hp.sub(&self.upper, &self.lower), &self.lower)
    }
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

fn four() -> BigRational {
    BigRational::from_integer(4.into())
}

/// Three-term recursion, generic over the carrier.
fn recurse<T: Clone>(k: u64, t: &T, one: T, step: impl Fn(&T, &T, &T) -> T) -> T {
    let mut prev = one;
    if k == 0 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 1..k {
        let next = step(t, &cur, &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `f_k(t)` exactly for rational `t ≥ 2`.
pub fn chebyshev_f(k: u64, t: &BigRational) -> Result<BigRational, ChebyshevError> {
    if t < &two() {
        return Err(ChebyshevError::BelowTwo(format_rational(t)));
    }
    Ok(recurse(k, t, BigRational::one(), |t, cur, prev| t * cur - prev))
}

/// `f_k(t)` by the recursion in working precision.
pub fn chebyshev_f_hp(k: u64, t: &BigFloat, hp: &Hp) -> Result<BigFloat, ChebyshevError> {
    if cmp(t, &hp.from_i64(2)) < 0 {
        return Err(ChebyshevError::BelowTwo(t.to_string()));
    }
    Ok(recurse(k, t, hp.from_i64(1), |t, cur, prev| hp.sub(&hp.mul(t, cur), prev)))
}

/// `f_k(t)` from the closed form; the `t = 2` limit `k + 1` is returned directly.
pub fn chebyshev_f_closed(k: u64, t: &BigFloat, hp: &Hp) -> Result<BigFloat, ChebyshevError> {
    let c = cmp(t, &hp.from_i64(2));
    if c < 0 {
        return Err(ChebyshevError::BelowTwo(t.to_string()));
    }
    if c == 0 {
        return Ok(hp.from_i64(k as i64 + 1));
    }
    let u = growth_base(t, hp)?;
    let v = hp.recip(&u);
    let n = (k + 1) as usize;
    let num = hp.sub(&hp.powi(&u, n), &hp.powi(&v, n));
    Ok(hp.div(&num, &hp.sub(&u, &v)))
}

/// Convenience `f64` entry point evaluated at the default working precision.
pub fn chebyshev_f_f64(k: u64, t: f64) -> Result<f64, ChebyshevError> {
    let hp = Hp::new(DEFAULT_PRECISION_BITS);
    chebyshev_f_hp(k, &hp.from_f64(t), &hp).map(|v| to_f64(&v))
}

/// `u = (t + √(t²−4))/2` for `t ≥ 2`.
pub fn growth_base(t: &BigFloat, hp: &Hp) -> Result<BigFloat, ChebyshevError> {
    if cmp(t, &hp.from_i64(2)) < 0 {
        return Err(ChebyshevError::BelowTwo(t.to_string()));
    }
    let disc = hp.sub(&hp.mul(t, t), &hp.from_i64(4));
    let s = hp.sqrt(&disc);
    Ok(hp.div(&hp.add(t, &s), &hp.from_i64(2)))
}

/// `g_k(x)` exactly for rational `x ≥ 4`, via the even-index recursion
/// `g_{k+1} = (x − 2)·g_k − g_{k−1}`, `g_0 = 1`, `g_1 = x − 1`.
pub fn chebyshev_g(k: u64, x: &BigRational) -> Result<BigRational, ChebyshevError> {
    if x < &four() {
        return Err(ChebyshevError::BelowFour(format_rational(x)));
    }
    if k == 0 {
        return Ok(BigRational::one());
    }
    let shift = x - two();
    let mut prev = BigRational::one();
    let mut cur = x - BigRational::one();
    for _ in 1..k {
        let next = &shift * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `g_k(x) = f_{2k}(√x)` in working precision; `x = 4` takes the degenerate branch.
pub fn chebyshev_g_hp(k: u64, x: &BigFloat, hp: &Hp) -> Result<BigFloat, ChebyshevError> {
    let c = cmp(x, &hp.from_i64(4));
    if c < 0 {
        return Err(ChebyshevError::BelowFour(x.to_string()));
    }
    if c == 0 {
        return Ok(hp.from_i64(2 * k as i64 + 1));
    }
    chebyshev_f_hp(2 * k, &hp.sqrt(x), hp)
}

/// Bracket of `f_k(t)` for `t > 2`:
/// `[u^{k+1}(1 − u^{−2(k+1)})/(u − u^{−1}), u^{k+1}/(u − u^{−1})]`.
pub fn envelope(k: u64, t: &BigFloat, hp: &Hp) -> Result<ChebEnvelope, ChebyshevError> {
    if cmp(t, &hp.from_i64(2)) <= 0 {
        return Err(ChebyshevError::EnvelopeDomain(t.to_string()));
    }
    let u = growth_base(t, hp)?;
    let v = hp.recip(&u);
    let n = (k + 1) as usize;
    let un = hp.powi(&u, n);
    let gap = hp.sub(&u, &v);
    let upper = hp.div(&un, &gap);
    let shrink = hp.sub(&hp.from_i64(1), &hp.powi(&v, 2 * n));
    let lower = hp.mul(&upper, &shrink);
    // Widen by a few ulps so rounding never cuts into the bracket.
    Ok(ChebEnvelope { lower: hp.deflate(&lower, 8), upper: hp.inflate(&upper, 8), base_u: u })
}

/// `f_k(t)·u^{−(k+1)}`, which tends to `1/√(t²−4)`.
pub fn normalized_growth(k: u64, t: &BigFloat, hp: &Hp) -> Result<BigFloat, ChebyshevError> {
    let f = chebyshev_f_hp(k, t, hp)?;
    let u = growth_base(t, hp)?;
    Ok(hp.div(&f, &hp.powi(&u, (k + 1) as usize)))
}

/// `1/√(t²−4)` for `t > 2`.
pub fn normalized_limit(t: &BigFloat, hp: &Hp) -> BigFloat {
    hp.recip(&hp.sqrt(&hp.sub(&hp.mul(t, t), &hp.from_i64(4))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(chebyshev_f(2, &r(3, 1)).unwrap(), r(8, 1));
        assert_eq!(chebyshev_f(2, &r(7, 2)).unwrap(), r(45, 4));
        for k in 0..20 {
            assert_eq!(chebyshev_f(k, &r(2, 1)).unwrap(), r(k as i64 + 1, 1));
        }
        assert_eq!(chebyshev_f_f64(2, 3.5).unwrap(), 11.25);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(chebyshev_f(1, &r(19, 10)), Err(ChebyshevError::BelowTwo(_))));
        assert!(matches!(chebyshev_g(1, &r(3, 1)), Err(ChebyshevError::BelowFour(_))));
        let hp = Hp::new(128);
        assert!(matches!(envelope(3, &hp.from_i64(2), &hp), Err(ChebyshevError::EnvelopeDomain(_))));
        assert!(chebyshev_f_hp(3, &hp.from_f64(1.5), &hp).is_err());
    }

    #[test]
    fn g_examples() {
        for k in 0..15 {
            assert_eq!(chebyshev_g(k, &r(4, 1)).unwrap(), r(2 * k as i64 + 1, 1));
        }
        assert_eq!(chebyshev_g(1, &r(5, 1)).unwrap(), r(4, 1));
        assert_eq!(chebyshev_g(0, &r(17, 3)).unwrap(), r(1, 1));
        let x = r(37, 7);
        assert_eq!(chebyshev_g(1, &x).unwrap(), &x - r(1, 1));
        let hp = Hp::new(128);
        assert_eq!(to_f64(&chebyshev_g_hp(6, &hp.from_i64(4), &hp).unwrap()), 13.0);
    }

    #[test]
    fn envelope_examples() {
        let hp = Hp::new(192);
        let t = hp.from_f64(3.5);
        let ratio = normalized_growth(200, &t, &hp).unwrap();
        let limit = normalized_limit(&t, &hp);
        assert!((to_f64(&ratio) - to_f64(&limit)).abs() < 1e-6);
        let e0 = envelope(0, &t, &hp).unwrap();
        assert!(e0.contains(&hp.from_i64(1)));
        let e2 = envelope(2, &hp.from_i64(3), &hp).unwrap();
        assert!(e2.contains(&hp.from_i64(8)));
    }

    #[test]
    fn closed_form_degenerate_branch() {
        let hp = Hp::new(128);
        let v = chebyshev_f_closed(9, &hp.from_i64(2), &hp).unwrap();
        assert_eq!(to_f64(&v), 10.0);
    }
}
