//! Closed-form counts over `M_n(t)` and related exact quantities.
//!
//! Real-valued helpers are generic over [`Scalar`], so the same formula is
//! evaluated exactly with [`Rational`] or approximately with `f64`/`f32`.

mod zeta;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gfield::{gf, poly};
use crate::linalg::factorize;
use crate::scalar::Scalar;
use crate::Rational;

pub use zeta::{
    power_enclosure, zeta_from_exponents, zeta_general, zeta_leading, zeta_simple, Enclosure,
    ZetaBreakdown,
};

/// An exact count together with the name of the formula that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub value: Rational,
    pub formula: &'static str,
}

impl CountResult {
    fn int(v: BigUint, formula: &'static str) -> Self {
        CountResult {
            value: Rational::from_integer(BigInt::from(v)),
            formula,
        }
    }

    pub fn as_integer(&self) -> Option<BigUint> {
        if self.value.is_integer() {
            self.value.to_integer().to_biguint()
        } else {
            None
        }
    }
}

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

pub fn big_pow(base: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}

/// `F(u, v) = (1 - u^-1)(1 - u^-2)...(1 - u^-v)`, with `F(u, 0) = 1`.
pub fn f_uv<S: Scalar>(u: u64, v: u32) -> S {
    let uu = <S as Scalar>::from_u64(u);
    let mut acc = S::one();
    for i in 1..=v {
        acc = acc * (S::one() - uu.powi(-(i as i64)));
    }
    acc
}

/// Two-sided enclosure of `φ(1/2) = prod_{i>=1} (1 - 2^-i)`:
/// `[F(2,64)(1 - 2^-64), F(2,64)]`.
pub fn phi_half() -> (Rational, Rational) {
    let hi: Rational = f_uv(2, 64);
    let lo = &hi * (Rational::one() - Rational::new(BigInt::one(), BigInt::from(2u8).pow(64)));
    (lo, hi)
}

/// `|GL_n(t)| = prod_{i<n} (t^n - t^i)`.
pub fn gl_order(n: u64, t: u64) -> BigUint {
    let tn = big_pow(t, n);
    (0..n).map(|i| &tn - big_pow(t, i)).product()
}

/// `|PGL_n(t)| = |GL_n(t)| / (t - 1)`.
pub fn pgl_order(n: u64, t: u64) -> BigUint {
    gl_order(n, t) / big(t - 1)
}

/// `|M_n(q^m)^×| = q^{mn²} F(q^m, n)`.
pub fn count_units(n: u64, m: u64, q: u64) -> CountResult {
    CountResult::int(gl_order(n, q.pow(m as u32)), "units: q^(mn^2) F(q^m, n)")
}

/// Nilpotent `n × n` matrices over `F_t`: `t^(n^2 - n)`.
pub fn count_nilpotents(n: u64, t: u64) -> CountResult {
    CountResult::int(big_pow(t, n * n - n), "nilpotents: t^(n^2-n)")
}

/// Matrices in `M_n(t)` with characteristic polynomial `f`:
/// `t^(n^2-n) F(t,n) / prod_i F(t^(d_i), α_i)`.
pub fn count_charpoly(t: u64, f: &[u32]) -> Result<CountResult> {
    let k = gf(t)?;
    let n = poly::degree(f).ok_or_else(|| Error::invalid("zero polynomial"))? as u64;
    let fac = factorize(&k, f)?;
    let mut v: Rational =
        Rational::from_integer(BigInt::from(big_pow(t, n * n - n))) * f_uv::<Rational>(t, n as u32);
    for x in &fac.factors {
        v /= f_uv::<Rational>(t.pow(x.degree as u32), x.multiplicity);
    }
    Ok(CountResult {
        value: v,
        formula: "charpoly: t^(n^2-n) F(t,n) / prod F(t^d_i, a_i)",
    })
}

/// Matrices in `M_n(t)` of rank `α`: `prod_{i<α} (t^n - t^i)^2 / (t^α - t^i)`.
pub fn count_rank(n: u64, t: u64, alpha: u64) -> Result<CountResult> {
    if alpha > n {
        return Err(Error::invalid(format!("rank {alpha} exceeds n = {n}")));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..alpha {
        let a = big_pow(t, n) - big_pow(t, i);
        num *= &a * &a;
        den *= big_pow(t, alpha) - big_pow(t, i);
    }
    Ok(CountResult::int(
        num / den,
        "rank: prod (t^n - t^i)^2 / (t^a - t^i)",
    ))
}

pub fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducible polynomials of degree `x` over `F_q`.
pub fn nu_q(q: u64, x: u64) -> CountResult {
    let mut acc = BigInt::zero();
    for d in 1..=x {
        if x.is_multiple_of(d) {
            acc += BigInt::from(mobius(d)) * BigInt::from(big_pow(q, x / d));
        }
    }
    let v = acc / BigInt::from(x);
    CountResult {
        value: Rational::from_integer(v),
        formula: "nu_q(x) = (1/x) sum mu(d) q^(x/d)",
    }
}

/// Exact `P(M_n(q^m))` for `n = 1` (any `m`) and `n ∈ {2, 3}` with `m = 1`.
pub fn exact_p_small(n: u64, m: u64, q: u64) -> Result<Rational> {
    let r = |num: BigUint, den: BigUint| Rational::new(BigInt::from(num), BigInt::from(den));
    match (n, m) {
        (1, _) => {
            let nu = nu_q(q, m).as_integer().expect("integral");
            Ok(r(big(m) * nu, big_pow(q, m)))
        }
        (2, 1) => Ok(r(big(q - 1) * big(q * q - 1), big_pow(q, 3))),
        (3, 1) => {
            let a = big(q * q - 1);
            Ok(r(&a * &a * big(q * q * q - 1), big_pow(q, 7)))
        }
        _ => Err(Error::invalid(format!(
            "no closed form for n = {n}, m = {m}"
        ))),
    }
}

/// Whether `M_n(q^m)^α` is `l`-generated, given `P(S, l)`:
/// `α <= q^(l m n^2) P(S,l) / (m |PGL_n(q^m)|)`.
pub fn power_criterion(n: u64, m: u64, q: u64, alpha: u64, l: u64, p_sl: &Rational) -> bool {
    let t = q.pow(m as u32);
    let bound = Rational::from_integer(BigInt::from(big_pow(q, l * m * n * n))) * p_sl
        / Rational::from_integer(BigInt::from(big(m) * pgl_order(n, t)));
    Rational::from_integer(BigInt::from(alpha)) <= bound
}

/// Exact `ω(r)`: number of distinct prime divisors.
pub fn omega(r: u64) -> u64 {
    crate::gfield::prime_divisors(r).len() as u64
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    crate::scalar::ratio_to_f64(r)
}

/// `⌈x⌉` for an exact rational.
pub fn ceil_rational(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_rem(r.denom());
    if rem.is_zero() || r.numer().sign() == num_bigint::Sign::Minus {
        q
    } else {
        q + 1
    }
}

pub fn to_u64(b: &BigUint) -> Option<u64> {
    b.to_u64()
}
