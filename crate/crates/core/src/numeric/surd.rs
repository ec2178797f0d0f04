use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};



/// An element `a + b·√m` of a real quadratic field.
///
/// `m` is a positive non-square integer shared by every irrational operand
/// of an expression; rational elements (`b = 0`) mix freely with any `m`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadSurd {
    a: BigRational,
    b: BigRational,
    m: BigInt,
}

impl QuadSurd {
    pub fn rational(a: BigRational) -> Self {
        QuadSurd { a, b: BigRational::zero(), m: BigInt::zero() }
    }

    /// `a + b·√m`. Panics if `m` is not positive; a perfect-square `m` is
    /// folded into the rational part.
    pub fn new(a: BigRational, b: BigRational, m: BigInt) -> Self {
        assert!(m.is_positive(), "radicand must be positive");
        let root = m.sqrt();
        if &root * &root == m {
            return QuadSurd::rational(a + b * BigRational::from_integer(root));
        }
        if b.is_zero() {
            return QuadSurd::rational(a);
        }
        QuadSurd { a, b, m }
    }

    /// `√x` for a positive rational `x`, as an element of `Q(√(num·den))`.
    pub fn sqrt_of(x: &BigRational) -> Self {
        assert!(x.is_positive(), "square root of a nonpositive rational");
        // √(p/q) = √(p·q)/q
        let m = x.numer() * x.denom();
        let coeff = BigRational::new(BigInt::one(), x.denom().clone());
        QuadSurd::new(BigRational::zero(), coeff, m)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        (!self.b.is_zero()).then_some(&self.m)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_m(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => BigInt::zero(),
            (false, true) => self.m.clone(),
            (true, false) => other.m.clone(),
            (false, false) => {
                assert_eq!(self.m, other.m, "mixing different quadratic fields");
                self.m.clone()
            }
        }
    }

    fn build(a: BigRational, b: BigRational, m: BigInt) -> Self {
        if b.is_zero() {
            QuadSurd::rational(a)
        } else {
            QuadSurd { a, b, m }
        }
    }

    fn conjugate(&self) -> Self {
        QuadSurd { a: self.a.clone(), b: -self.b.clone(), m: self.m.clone() }
    }

    fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.m.clone())
    }

    fn signum(&self) -> i32 {
        // sign(a + b√m) by comparing a² against b²m.
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2m = &self.b * &self.b * BigRational::from_integer(self.m.clone());
        if a2 > b2m {
            sa
        } else {
            sb
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.m)
        }
    }
}

impl super::ExactField for QuadSurd {
    fn zero_elem() -> Self {
        QuadSurd::rational(BigRational::zero())
    }
    fn one_elem() -> Self {
        QuadSurd::rational(BigRational::one())
    }
    fn from_rational(r: &BigRational) -> Self {
        QuadSurd::rational(r.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        let m = self.common_m(other);
        QuadSurd::build(&self.a + &other.a, &self.b + &other.b, m)
    }
    fn minus(&self, other: &Self) -> Self {
        let m = self.common_m(other);
        QuadSurd::build(&self.a - &other.a, &self.b - &other.b, m)
    }
    fn times(&self, other: &Self) -> Self {
        let m = self.common_m(other);
        let mr = BigRational::from_integer(m.clone());
        let a = &self.a * &other.a + &self.b * &other.b * mr;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadSurd::build(a, b, m)
    }
    fn inverse(&self) -> Self {
        if self.b.is_zero() {
            return QuadSurd::rational(self.a.recip());
        }
        let n = self.norm();
        let c = self.conjugate();
        QuadSurd::build(c.a / &n, c.b / n, self.m.clone())
    }
    fn is_zero_elem(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_positive_elem(&self) -> bool {
        self.signum() > 0
    }
    fn approx_f64(&self) -> f64 {
        let a = super::rational_to_f64(&self.a);
        if self.b.is_zero() {
            return a;
        }
        let m = super::rational_to_f64(&BigRational::from_integer(self.m.clone()));
        a + super::rational_to_f64(&self.b) * m.sqrt()
    }
    fn root_exact(&self, n: u32) -> Option<Self> {
        if self.b.is_zero() {
            return super::rational_root_exact(&self.a, n).map(QuadSurd::rational);
        }
        if n == 1 {
            return Some(self.clone());
        }
        None
    }
}
