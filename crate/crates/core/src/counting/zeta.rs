//! Subalgebra zeta function `ζ_A(ε) = Σ_B [A:B]^{-ε}` over conjugacy-class
//! representatives of maximal subalgebras.
//!
//! Every index is a power `q^k`, so each term is `q^{-εk}`. Terms with an
//! integral exponent are exact; the others are enclosed between two dyadic
//! rationals at 128 bits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::big_pow;
use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::maxsub::{m_min, standard_reps, ClassKind};
use crate::scalar::ratio_to_f64;
use crate::Rational;

const PRECISION_BITS: u64 = 128;

/// A closed interval `[lo, hi]` of rationals containing the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Enclosure::exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> f64 {
        ratio_to_f64(&((&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))))
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }
}

impl Serialize for Enclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 4)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("exact", &self.is_exact())?;
        st.serialize_field("approx", &self.midpoint())?;
        st.end()
    }
}

/// Encloses `q^{-εk}` for `ε > 0`.
pub fn power_enclosure(q: u64, k: u64, eps: &Rational) -> Result<Enclosure> {
    if eps <= &Rational::zero() {
        return Err(Error::invalid("ε must be positive"));
    }
    let a = eps.numer().to_biguint().expect("positive") * BigUint::from(k);
    let b = eps.denom().to_biguint().expect("positive");
    let g = a.gcd(&b);
    let (num, den) = (a / &g, b / &g);
    let num = u64::try_from(&num).map_err(|_| Error::too_large("exponent of q in ζ term"))?;
    let den = u32::try_from(&den).map_err(|_| Error::too_large("denominator of ε"))?;
    let y = big_pow(q, num);
    if den == 1 {
        return Ok(Enclosure::exact(Rational::new(
            BigInt::one(),
            BigInt::from(y),
        )));
    }
    // y^{-1/den} = (2^{P·den} / y)^{1/den} / 2^P
    let scale = BigUint::one() << (PRECISION_BITS * den as u64);
    let r = (scale / y).nth_root(den);
    let unit = BigInt::one() << PRECISION_BITS;
    Ok(Enclosure {
        lo: Rational::new(BigInt::from(r.clone()), unit.clone()),
        hi: Rational::new(BigInt::from(r + 1u32), unit),
    })
}

/// `Σ_k q^{-εk}` over the given codimensions.
pub fn zeta_from_exponents(q: u64, codims: &[u64], eps: &Rational) -> Result<Enclosure> {
    codims.iter().try_fold(Enclosure::zero(), |acc, &k| {
        Ok(acc.add(&power_enclosure(q, k, eps)?))
    })
}

/// The three partial sums and their total. For simple algebras the pieces
/// come from `S1`, `S2`, `S3`; otherwise from `T1`, `T2`, `T3`.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaBreakdown {
    pub pieces: [Enclosure; 3],
    pub total: Enclosure,
}

fn breakdown(q: u64, groups: [Vec<u64>; 3], eps: &Rational) -> Result<ZetaBreakdown> {
    let pieces = [
        zeta_from_exponents(q, &groups[0], eps)?,
        zeta_from_exponents(q, &groups[1], eps)?,
        zeta_from_exponents(q, &groups[2], eps)?,
    ];
    let total = pieces[0].add(&pieces[1]).add(&pieces[2]);
    Ok(ZetaBreakdown { pieces, total })
}

/// `ζ` of `M_n(q^m)` from the codimensions of the standard representatives.
pub fn zeta_simple(n: u64, m: u64, q: u64, eps: &Rational) -> Result<ZetaBreakdown> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("n and m must be positive"));
    }
    let s1 = (1..n).map(|l| m * l * (n - l)).collect();
    let s2 = crate::gfield::prime_divisors(n)
        .into_iter()
        .map(|a| m * n * n - m * n * n / a)
        .collect();
    let s3 = crate::gfield::prime_divisors(m)
        .into_iter()
        .map(|b| (m - m / b) * n * n)
        .collect();
    breakdown(q, [s1, s2, s3], eps)
}

/// `ζ` summed over [`standard_reps`].
pub fn zeta_general(spec: &AlgebraSpec, eps: &Rational) -> Result<ZetaBreakdown> {
    let mut groups: [Vec<u64>; 3] = Default::default();
    for c in standard_reps(spec)? {
        let g = match c.kind {
            ClassKind::S1 { .. } | ClassKind::T1 { .. } => 0,
            ClassKind::S2 { .. } | ClassKind::T2 { .. } => 1,
            ClassKind::S3 { .. } | ClassKind::T3 { .. } => 2,
        };
        groups[g].push(c.codim as u64);
    }
    breakdown(spec.q(), groups, eps)
}

/// Leading term `δ(A) m(A)^{-ε}` (`δ = 1` for `n = 2`, else 2) and the
/// remainder `ζ - leading` for a simple `M_n(q^m)` with `n > 1`.
pub fn zeta_leading(spec: &AlgebraSpec, eps: &Rational) -> Result<(Enclosure, Enclosure)> {
    let dec = spec.require_decomposition()?;
    if dec.r() != 1 || !dec.is_semisimple() {
        return Err(Error::invalid(
            "leading term is defined for simple algebras",
        ));
    }
    let (n, m) = dec.shapes()[0];
    if n < 2 {
        return Err(Error::invalid("leading term needs n > 1"));
    }
    let delta = if n == 2 { 1u64 } else { 2 };
    let k = m_min(spec)?.codim;
    let one = power_enclosure(spec.q(), k, eps)?;
    let lead = Enclosure {
        lo: &one.lo * Rational::from_integer(BigInt::from(delta)),
        hi: &one.hi * Rational::from_integer(BigInt::from(delta)),
    };
    let z = zeta_simple(n as u64, m as u64, spec.q(), eps)?.total;
    let rem = z.sub(&lead);
    Ok((lead, rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn k_is_zero() {
        assert_eq!(
            zeta_simple(1, 1, 5, &rat(1, 1)).unwrap().total,
            Enclosure::zero()
        );
    }

    #[test]
    fn m22_at_one() {
        assert_eq!(
            zeta_simple(2, 1, 2, &rat(1, 1)).unwrap().total.value(),
            Some(&rat(3, 4))
        );
    }

    #[test]
    fn m2_over_f8() {
        for q in [2i64, 3] {
            let want = rat(1, q.pow(3)) + rat(1, q.pow(6)) + rat(1, q.pow(8));
            assert_eq!(
                zeta_simple(2, 3, q as u64, &rat(1, 1))
                    .unwrap()
                    .total
                    .value(),
                Some(&want)
            );
        }
    }

    #[test]
    fn irrational_terms_enclosed() {
        let e = power_enclosure(2, 1, &rat(1, 2)).unwrap();
        assert!(!e.is_exact());
        let x = e.midpoint();
        assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(e.width() <= rat(1, 1) / Rational::from_integer(BigInt::one() << 127));
        let sq_lo = &e.lo * &e.lo;
        let sq_hi = &e.hi * &e.hi;
        assert!(sq_lo <= rat(1, 2) && rat(1, 2) <= sq_hi);
    }

    #[test]
    fn quarter_power_exact_when_integral() {
        assert_eq!(
            power_enclosure(3, 8, &rat(1, 4)).unwrap().value(),
            Some(&rat(1, 9))
        );
    }

    #[test]
    fn nonpositive_eps_rejected() {
        assert!(power_enclosure(2, 1, &rat(0, 1)).is_err());
    }
}
