//! Factorisation of monic polynomials over finite fields: squarefree
//! decomposition, distinct-degree splitting, then Cantor–Zassenhaus.

use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfield::{poly, Field, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: Poly,
    pub multiplicity: u32,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFactorization {
    pub factors: Vec<Factor>,
}

impl PolyFactorization {
    /// Number of distinct irreducible factors.
    pub fn s(&self) -> usize {
        self.factors.len()
    }

    pub fn expand(&self, k: &Field) -> Poly {
        self.factors.iter().fold(vec![1], |acc, f| {
            poly::mul(k, &acc, &poly::pow(k, &f.poly, f.multiplicity))
        })
    }
}

pub fn factorize(k: &Field, f: &[u32]) -> Result<PolyFactorization> {
    let deg = poly::degree(f).ok_or_else(|| Error::invalid("cannot factor the zero polynomial"))?;
    if deg == 0 {
        return Err(Error::invalid("cannot factor a constant"));
    }
    if f[deg] != 1 {
        return Err(Error::invalid("polynomial is not monic"));
    }
    let mut seed = [0u8; 32];
    for (i, b) in poly::encode(k, f).to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= b.rotate_left((i / 32) as u32);
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let mut out: Vec<Factor> = Vec::new();
    for (sf, mult) in squarefree(k, f) {
        for (g, d) in distinct_degree(k, &sf) {
            for h in equal_degree(k, &g, d, &mut rng) {
                out.push(Factor {
                    poly: h,
                    multiplicity: mult,
                    degree: d,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.degree, poly::encode(k, &a.poly)).cmp(&(b.degree, poly::encode(k, &b.poly)))
    });
    Ok(PolyFactorization { factors: out })
}

/// `f^(1/p)` for a polynomial whose derivative vanishes.
fn pth_root(k: &Field, f: &[u32]) -> Poly {
    let p = k.characteristic() as usize;
    // a -> a^(|k|/p) inverts the Frobenius a -> a^p.
    let e = (k.order() / k.characteristic()) as u64;
    let mut out: Poly = f.iter().step_by(p).map(|&a| k.pow(a, e)).collect();
    poly::trim(&mut out);
    out
}

/// Squarefree parts with multiplicities (monic input).
fn squarefree(k: &Field, f: &[u32]) -> Vec<(Poly, u32)> {
    let p = k.characteristic();
    let mut out = Vec::new();
    let df = poly::derivative(k, f);
    if df.is_empty() {
        for (g, m) in squarefree(k, &pth_root(k, f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = poly::gcd(k, f, &df);
    let mut w = poly::divrem(k, f, &c).0;
    let mut i = 1;
    while !poly::is_one(&w) {
        let y = poly::gcd(k, &w, &c);
        let fac = poly::divrem(k, &w, &y).0;
        if !poly::is_one(&fac) {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = poly::divrem(k, &c, &w).0;
    }
    if !poly::is_one(&c) {
        for (g, m) in squarefree(k, &pth_root(k, &c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Groups a squarefree monic polynomial's factors by degree.
fn distinct_degree(k: &Field, f: &[u32]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut h = poly::rem(k, &[0, 1], &rest);
    let mut i = 1;
    while rest.len() > 2 * i {
        h = poly::powmod(k, &h, k.order() as u64, &rest);
        let g = poly::gcd(k, &rest, &poly::sub(k, &h, &[0, 1]));
        if !poly::is_one(&g) {
            rest = poly::divrem(k, &rest, &g).0;
            h = poly::rem(k, &h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.len() > 1 {
        let d = rest.len() - 1;
        out.push((rest, d));
    }
    out
}

fn random_poly(k: &Field, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut g: Poly = (0..deg)
        .map(|_| (rng.next_u64() % k.order() as u64) as u32)
        .collect();
    poly::trim(&mut g);
    g
}

/// Splits a product of distinct degree-`d` irreducibles.
fn equal_degree(k: &Field, f: &[u32], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a = random_poly(k, n, rng);
        if a.len() < 2 {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // Trace map a + a^2 + ... + a^(2^(r d - 1)) with |k| = 2^r.
            let steps = k.abs_degree() as usize * d;
            let mut t = a.clone();
            let mut cur = a.clone();
            for _ in 1..steps {
                cur = poly::mulmod(k, &cur, &cur, f);
                t = poly::add(k, &t, &cur);
            }
            t
        } else {
            let e = (BigUint::from(k.order()).pow(d as u32) - 1u32) / 2u32;
            poly::sub(k, &poly::powmod_big(k, &a, &e, f), &[1])
        };
        let g = poly::gcd(k, f, &b);
        if g.len() > 1 && g.len() < f.len() {
            let h = poly::divrem(k, f, &g).0;
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::gf;

    #[test]
    fn x_to_the_n() {
        let k = gf(2).unwrap();
        let f = factorize(&k, &poly::x_pow(5)).unwrap();
        assert_eq!(
            f.factors,
            vec![Factor {
                poly: vec![0, 1],
                multiplicity: 5,
                degree: 1
            }]
        );
    }

    #[test]
    fn x2_plus_1_over_f2() {
        let k = gf(2).unwrap();
        let f = factorize(&k, &[1, 0, 1]).unwrap();
        assert_eq!(
            f.factors,
            vec![Factor {
                poly: vec![1, 1],
                multiplicity: 2,
                degree: 1
            }]
        );
    }

    #[test]
    fn x4_plus_x_over_f2() {
        let k = gf(2).unwrap();
        let f = factorize(&k, &[0, 1, 0, 0, 1]).unwrap();
        let got: Vec<(Poly, u32, usize)> = f
            .factors
            .iter()
            .map(|x| (x.poly.clone(), x.multiplicity, x.degree))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 1], 1, 1),
                (vec![1, 1], 1, 1),
                (vec![1, 1, 1], 1, 2)
            ]
        );
    }

    #[test]
    fn non_monic_rejected() {
        let k = gf(3).unwrap();
        assert!(factorize(&k, &[1, 2]).is_err());
        assert!(factorize(&k, &[1]).is_err());
    }

    #[test]
    fn pth_power_inputs() {
        let k = gf(3).unwrap();
        // (X^2+1)^3 (X+1)^4 over F_3
        let f = poly::mul(
            &k,
            &poly::pow(&k, &[1, 0, 1], 3),
            &poly::pow(&k, &[1, 1], 4),
        );
        let fac = factorize(&k, &f).unwrap();
        assert_eq!(fac.expand(&k), f);
        assert_eq!(fac.s(), 2);
    }
}
