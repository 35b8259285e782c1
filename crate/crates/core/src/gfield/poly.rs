//! Dense univariate polynomials over a [`Field`].
//!
//! A polynomial is a little-endian coefficient vector of element codes with
//! no trailing zeros; the zero polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::Zero;

use super::Field;

pub type Poly = Vec<u32>;

pub fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn degree(f: &[u32]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn is_one(f: &[u32]) -> bool {
    f.len() == 1 && f[0] == 1
}

pub fn x_pow(k: usize) -> Poly {
    let mut f = vec![0; k + 1];
    f[k] = 1;
    f
}

pub fn add(k: &Field, f: &[u32], g: &[u32]) -> Poly {
    let n = f.len().max(g.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            k.add(a, b)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(k: &Field, f: &[u32], g: &[u32]) -> Poly {
    let n = f.len().max(g.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            k.sub(a, b)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn scale(k: &Field, f: &[u32], c: u32) -> Poly {
    if c == 0 {
        return Vec::new();
    }
    f.iter().map(|&a| k.mul(a, c)).collect()
}

pub fn mul(k: &Field, f: &[u32], g: &[u32]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            if b != 0 {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; panics if `g` is zero.
pub fn divrem(k: &Field, f: &[u32], g: &[u32]) -> (Poly, Poly) {
    assert!(!g.is_empty(), "division by the zero polynomial");
    let mut r: Poly = f.to_vec();
    trim(&mut r);
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let dg = g.len() - 1;
    let lead_inv = k.inv(g[dg]);
    let mut q = vec![0u32; r.len() - dg];
    while r.len() > dg {
        let dr = r.len() - 1;
        let c = k.mul(r[dr], lead_inv);
        let shift = dr - dg;
        q[shift] = c;
        for (i, &b) in g.iter().enumerate() {
            if b != 0 {
                r[shift + i] = k.sub(r[shift + i], k.mul(c, b));
            }
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(k: &Field, f: &[u32], g: &[u32]) -> Poly {
    divrem(k, f, g).1
}

pub fn monic(k: &Field, f: &[u32]) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&lead) => scale(k, f, k.inv(lead)),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(k: &Field, f: &[u32], g: &[u32]) -> Poly {
    let mut a: Poly = f.to_vec();
    let mut b: Poly = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

pub fn derivative(k: &Field, f: &[u32]) -> Poly {
    let mut out: Poly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &a)| {
            let c = (i as u64 % k.characteristic() as u64) as u32;
            k.mul(a, c)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mulmod(k: &Field, f: &[u32], g: &[u32], modulus: &[u32]) -> Poly {
    rem(k, &mul(k, f, g), modulus)
}

pub fn powmod(k: &Field, base: &[u32], mut e: u64, modulus: &[u32]) -> Poly {
    let mut acc: Poly = rem(k, &[1], modulus);
    let mut b = rem(k, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(k, &acc, &b, modulus);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(k, &b, &b, modulus);
        }
    }
    acc
}

pub fn powmod_big(k: &Field, base: &[u32], e: &BigUint, modulus: &[u32]) -> Poly {
    let mut acc: Poly = rem(k, &[1], modulus);
    let b = rem(k, base, modulus);
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = mulmod(k, &acc, &acc, modulus);
        if e.bit(i) {
            acc = mulmod(k, &acc, &b, modulus);
        }
    }
    acc
}

/// `X^(Q^i) mod f` for `i = 0..=count`, where `Q = |k|`.
fn frobenius_powers(k: &Field, f: &[u32], count: usize) -> Vec<Poly> {
    let x = rem(k, &[0, 1], f);
    let mut out = vec![x.clone()];
    let mut cur = x;
    for _ in 0..count {
        cur = powmod(k, &cur, k.order() as u64, f);
        out.push(cur.clone());
    }
    out
}

/// Irreducibility via the gcd criterion: `f` of degree `d` is irreducible iff
/// `gcd(f, X^(Q^i) - X) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(k: &Field, f: &[u32]) -> bool {
    let d = match degree(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let pows = frobenius_powers(k, f, d / 2);
    (1..=d / 2).all(|i| {
        let h = sub(k, &pows[i], &[0, 1]);
        is_one(&gcd(k, f, &h))
    })
}

pub fn eval(k: &Field, f: &[u32], x: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

/// Integer encoding `sum a_i Q^i` of the coefficient vector, used for ordering
/// and for deriving per-polynomial seeds.
pub fn encode(k: &Field, f: &[u32]) -> BigUint {
    let q = BigUint::from(k.order());
    f.iter()
        .rev()
        .fold(BigUint::zero(), |acc, &c| acc * &q + BigUint::from(c))
}

/// Least monic irreducible polynomial of degree `d` over `k` in the canonical
/// order (integer encoding of the low coefficients, `a_0` least significant).
pub fn least_irreducible(k: &Field, d: usize) -> Poly {
    assert!(d >= 1);
    let q = k.order() as u64;
    let mut code: u64 = 0;
    loop {
        let mut f = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            f.push((c % q) as u32);
            c /= q;
        }
        f.push(1);
        if is_irreducible(k, &f) {
            return f;
        }
        code += 1;
    }
}

pub fn pow(k: &Field, f: &[u32], e: u32) -> Poly {
    let mut acc: Poly = vec![1];
    for _ in 0..e {
        acc = mul(k, &acc, f);
    }
    acc
}

pub fn is_zero(f: &[u32]) -> bool {
    f.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let k = Field::prime(3).unwrap();
        let f = vec![1, 2, 0, 1, 2];
        let g = vec![2, 1, 1];
        let (q, r) = divrem(&k, &f, &g);
        let back = add(&k, &mul(&k, &q, &g), &r);
        assert_eq!(back, f);
        assert!(r.len() < g.len());
    }

    #[test]
    fn least_irreducible_small_cases() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(least_irreducible(&f2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(&f2, 3), vec![1, 1, 0, 1]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(least_irreducible(&f3, 1), vec![0, 1]);
    }

    #[test]
    fn x3_plus_x2_plus_1_is_later_in_order() {
        let f2 = Field::prime(2).unwrap();
        let a = vec![1, 1, 0, 1];
        let b = vec![1, 0, 1, 1];
        assert!(is_irreducible(&f2, &b));
        assert!(encode(&f2, &a) < encode(&f2, &b));
        for x in 0..2 {
            assert_ne!(eval(&f2, &a, x), 0);
        }
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let k = Field::prime(5).unwrap();
        assert!(is_one(&gcd(&k, &[1, 1], &[2, 1])));
        assert_eq!(gcd(&k, &mul(&k, &[1, 1], &[2, 1]), &[1, 1]), vec![1, 1]);
    }
}
