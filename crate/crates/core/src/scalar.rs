//! Scalar abstraction for the real-valued side of the crate.
//!
//! Counting formulas and probability bounds are written once against
//! [`Scalar`] and evaluated either exactly over [`BigRational`] or in
//! floating point (`f32`/`f64`).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive + Send + Sync {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;
    fn to_f64(&self) -> f64;

    fn from_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 is representable")
    }

    /// `self^e` for a signed integer exponent; `e < 0` requires `self != 0`.
    fn powi(&self, e: i64) -> Self {
        let base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        ratio_to_f64(&BigRational::new(num.clone(), den.clone()))
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        ratio_to_f64(&BigRational::new(num.clone(), den.clone())) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Converts a rational to the nearest-ish `f64`, robust to huge numerators
/// and denominators (it rescales by powers of two before dividing).
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        r.numer() / (r.denom() << (shift as usize))
    } else {
        (r.numer() << ((-shift) as usize)) / r.denom()
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn is_one(r: &BigRational) -> bool {
    r.is_one()
}
