use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exactly-represented ordered field, enough for Schur-orthogonality
/// bookkeeping over modular spectra.
pub trait ExactField: Clone + PartialEq + Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// Panics on zero, like rational division.
    fn inverse(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn is_positive_elem(&self) -> bool;
    fn approx_f64(&self) -> f64;

    fn over(&self, other: &Self) -> Self {
        self.times(&other.inverse())
    }

    fn pow_int(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one_elem();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact `n`-th root when it exists in the field.
    fn root_exact(&self, n: u32) -> Option<Self>;
}

impl ExactField for BigRational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive_elem(&self) -> bool {
        Signed::is_positive(self)
    }
    fn approx_f64(&self) -> f64 {
        super::rational_to_f64(self)
    }
    fn root_exact(&self, n: u32) -> Option<Self> {
        super::rational_root_exact(self, n)
    }
}
