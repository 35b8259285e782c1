//! Finite fields and the tower `F_p ⊂ F_q ⊂ F_{q^m}`.
//!
//! Every field element is a `u32` code: the packed base-`p` digits of its
//! coordinate vector over the prime field (little-endian). For `p = 2` the
//! code is a bit vector and addition is XOR. Fields up to 2^16 elements carry
//! exp/log tables; larger ones multiply through polynomial arithmetic.

pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::FqMatrix;

pub use poly::Poly;

const TABLE_LIMIT: u64 = 1 << 16;
const ORDER_LIMIT: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field, either prime or a simple extension of a smaller field.
pub struct Field {
    p: u32,
    order: u32,
    degree: u32,
    base: Option<Arc<Field>>,
    modulus: Poly,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)?;
        if let Some(b) = &self.base {
            write!(f, "/GF({}) mod {:?}", b.order, self.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.modulus == other.modulus
            && self.base.as_deref() == other.base.as_deref()
    }
}

impl Eq for Field {}

impl Field {
    pub fn prime(p: u32) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Arc::new(Field {
            p,
            order: p,
            degree: 1,
            base: None,
            modulus: Vec::new(),
            tables: None,
        }))
    }

    /// `base[X]/(modulus)`; the modulus must be monic and irreducible.
    pub fn extend(base: &Arc<Field>, modulus: Poly) -> Result<Arc<Field>> {
        let d = modulus.len().saturating_sub(1);
        if d == 0 || modulus[d] != 1 {
            return Err(Error::invalid(
                "extension modulus must be monic of degree >= 1",
            ));
        }
        if d == 1 {
            return Ok(base.clone());
        }
        let order = (base.order as u64)
            .checked_pow(d as u32)
            .filter(|&o| o <= ORDER_LIMIT);
        let order = order.ok_or_else(|| Error::too_large("field order exceeds 2^31"))?;
        if !poly::is_irreducible(base, &modulus) {
            return Err(Error::invalid("extension modulus is reducible"));
        }
        let mut field = Field {
            p: base.p,
            order: order as u32,
            degree: base.degree * d as u32,
            base: Some(base.clone()),
            modulus,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    fn build_tables(&self) -> Tables {
        let n = self.order as u64 - 1;
        let primes = prime_divisors(n);
        let gen = (2..self.order)
            .find(|&g| primes.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for i in 0..n as usize {
            exp[i] = x;
            exp[i + n as usize] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, gen);
        }
        Tables { exp, log }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree over the prime field.
    pub fn abs_degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Defining polynomial over the base field; empty for a prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// Coordinates over the base field (length = relative degree).
    pub fn coords(&self, a: u32) -> Vec<u32> {
        match &self.base {
            None => vec![a],
            Some(b) => {
                let d = self.modulus.len() - 1;
                let mut out = Vec::with_capacity(d);
                let mut x = a;
                for _ in 0..d {
                    out.push(x % b.order);
                    x /= b.order;
                }
                out
            }
        }
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        match &self.base {
            None => c.first().copied().unwrap_or(0),
            Some(b) => c.iter().rev().fold(0, |acc, &x| acc * b.order + x),
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.base.is_none() {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut pw) = (0, 1);
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * pw;
            pw *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.base.is_none() {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut a, mut out, mut pw) = (a, 0, 1);
        while a > 0 {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * pw;
            pw *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.base.is_none() {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let base = self.base.as_ref().expect("extension field");
        let prod = poly::mul(base, &self.coords(a), &self.coords(b));
        let r = poly::rem(base, &prod, &self.modulus);
        self.from_coords(&r)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut acc, mut b) = (1u32, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.order as u64 - 1;
            let k = (t.log[a as usize] as u64 * (e % n)) % n;
            return t.exp[k as usize];
        }
        let (mut acc, mut b, mut e) = (1u32, a, e);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            return t.exp[((n - t.log[a as usize]) % n) as usize];
        }
        self.pow(a, self.order as u64 - 2)
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    /// Embeds a prime-field integer.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Canonical string: decimal for prime fields, base-`p` digits (most
    /// significant first) for extensions.
    pub fn format_elem(&self, a: u32) -> String {
        if self.base.is_none() {
            return a.to_string();
        }
        let digits: Vec<char> = (0..self.degree)
            .rev()
            .map(|i| {
                let d = (a / self.p.pow(i)) % self.p;
                std::char::from_digit(d, 36).unwrap_or('?')
            })
            .collect();
        let s: String = digits.into_iter().collect();
        let trimmed = s.trim_start_matches('0');
        if trimmed.is_empty() {
            "0".into()
        } else {
            trimmed.into()
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<u32> {
        let radix = if self.base.is_none() { 10 } else { self.p };
        let v = u64::from_str_radix(s.trim(), radix)
            .map_err(|_| Error::invalid(format!("bad field element {s:?}")))?;
        if v >= self.order as u64 {
            return Err(Error::invalid(format!("field element {s:?} out of range")));
        }
        Ok(v as u32)
    }

    /// Renders a polynomial over this field as `X^2+X+1`; non-prime
    /// coefficients other than 1 are parenthesised.
    pub fn format_poly(&self, f: &[u32]) -> String {
        if f.is_empty() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in f.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = self.format_elem(c);
            let coef = if self.base.is_some() {
                format!("({coef})")
            } else {
                coef
            };
            let term = match (i, c) {
                (0, _) => coef,
                (1, 1) => "X".into(),
                (1, _) => format!("{coef}*X"),
                (_, 1) => format!("X^{i}"),
                _ => format!("{coef}*X^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }

    /// Parses the format produced by [`Field::format_poly`].
    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned == "0" {
            return Ok(Vec::new());
        }
        let mut out: Poly = Vec::new();
        for term in split_terms(&cleaned) {
            let (coef, rest) = match term.find('X') {
                None => (term.as_str(), None),
                Some(pos) => (term[..pos].trim_end_matches('*'), Some(&term[pos + 1..])),
            };
            let c = if coef.is_empty() {
                1
            } else {
                self.parse_elem(coef.trim_start_matches('(').trim_end_matches(')'))?
            };
            let e = match rest {
                None => 0,
                Some("") => 1,
                Some(r) => r
                    .strip_prefix('^')
                    .and_then(|x| x.parse::<usize>().ok())
                    .ok_or_else(|| Error::invalid(format!("bad term {term:?}")))?,
            };
            if out.len() <= e {
                out.resize(e + 1, 0);
            }
            out[e] = self.add(out[e], c);
        }
        poly::trim(&mut out);
        Ok(out)
    }
}

fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

/// An element of `F_{q^m}` as its coordinate vector over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<u32>,
}

/// The tower `F_p ⊂ F_q ⊂ F_{q^m}` with least irreducible defining polynomials.
#[derive(Debug)]
pub struct FieldTower {
    p: u32,
    e: u32,
    m: u32,
    h: Poly,
    g: Poly,
    fp: Arc<Field>,
    fq: Arc<Field>,
    fqm: Arc<Field>,
}

type TowerCache = Mutex<HashMap<(u32, u32, u32), Arc<FieldTower>>>;

fn tower_cache() -> &'static TowerCache {
    static CACHE: OnceLock<TowerCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldTower {
    pub fn new(p: u32, e: u32, m: u32) -> Result<Arc<FieldTower>> {
        if e == 0 || m == 0 {
            return Err(Error::invalid("tower degrees must be positive"));
        }
        if let Some(t) = tower_cache().lock().expect("tower cache").get(&(p, e, m)) {
            return Ok(t.clone());
        }
        let fp = Field::prime(p)?;
        let h = poly::least_irreducible(&fp, e as usize);
        let fq = Field::extend(&fp, h.clone())?;
        let g = poly::least_irreducible(&fq, m as usize);
        let fqm = Field::extend(&fq, g.clone())?;
        let tower = Arc::new(FieldTower {
            p,
            e,
            m,
            h,
            g,
            fp,
            fq,
            fqm,
        });
        tower_cache()
            .lock()
            .expect("tower cache")
            .insert((p, e, m), tower.clone());
        Ok(tower)
    }

    /// Tower for `F_q ⊂ F_{q^m}` given `q` as an integer.
    pub fn for_q(q: u64, m: u32) -> Result<Arc<FieldTower>> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        FieldTower::new(p, e, m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.fq.order()
    }

    /// Defining polynomial of `F_q` over `F_p`.
    pub fn h(&self) -> &[u32] {
        &self.h
    }

    /// Defining polynomial of `F_{q^m}` over `F_q`.
    pub fn g(&self) -> &[u32] {
        &self.g
    }

    pub fn prime_field(&self) -> &Arc<Field> {
        &self.fp
    }

    pub fn base_field(&self) -> &Arc<Field> {
        &self.fq
    }

    pub fn top_field(&self) -> &Arc<Field> {
        &self.fqm
    }

    pub fn encode(&self, x: &FieldElement) -> u32 {
        let q = self.q();
        x.coords.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn decode(&self, code: u32) -> FieldElement {
        let q = self.q();
        let mut coords = Vec::with_capacity(self.m as usize);
        let mut x = code;
        for _ in 0..self.m {
            coords.push(x % q);
            x /= q;
        }
        FieldElement { coords }
    }

    pub fn zero(&self) -> FieldElement {
        self.decode(0)
    }

    pub fn one(&self) -> FieldElement {
        self.decode(1)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.decode(self.fqm.add(self.encode(a), self.encode(b)))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.decode(self.fqm.mul(self.encode(a), self.encode(b)))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        let c = self.encode(a);
        if c == 0 {
            return Err(Error::invalid("inverse of zero"));
        }
        Ok(self.decode(self.fqm.inv(c)))
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.decode(self.fqm.pow(self.encode(a), e))
    }

    /// `x^(q^j)`, with `j` taken modulo `m`.
    pub fn frobenius(&self, x: &FieldElement, j: i64) -> FieldElement {
        self.decode(self.frobenius_code(self.encode(x), j))
    }

    pub fn frobenius_code(&self, x: u32, j: i64) -> u32 {
        let j = j.rem_euclid(self.m as i64) as u32;
        self.fqm.pow(x, (self.q() as u64).pow(j))
    }

    /// `F_q`-basis of the subfield `F_{q^(m/b)}`, as the kernel of
    /// `Frob^(m/b) - id`.
    pub fn subfield_basis(&self, b: u32) -> Result<Vec<FieldElement>> {
        if b == 0 || !self.m.is_multiple_of(b) {
            return Err(Error::invalid(format!(
                "{b} does not divide m = {}",
                self.m
            )));
        }
        let m = self.m as usize;
        let fq = &self.fq;
        let step = (self.m / b) as i64;
        let mut mat = FqMatrix::zero(fq.clone(), m, m);
        for i in 0..m {
            let mut e = vec![0u32; m];
            e[i] = 1;
            let img = self.frobenius(&FieldElement { coords: e }, step);
            for r in 0..m {
                let v = if r == i {
                    fq.sub(img.coords[r], 1)
                } else {
                    img.coords[r]
                };
                mat.set(r, i, v);
            }
        }
        Ok(mat
            .kernel()
            .into_iter()
            .map(|coords| FieldElement { coords })
            .collect())
    }

    /// Degree over `F_q` of the minimal polynomial of `x`.
    pub fn min_poly_degree(&self, x: &FieldElement) -> u32 {
        let c = self.encode(x);
        (1..=self.m)
            .find(|&d| self.m.is_multiple_of(d) && self.frobenius_code(c, d as i64) == c)
            .unwrap_or(self.m)
    }

    /// Stable byte serialisation of the defining data.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [self.p, self.e, self.m] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for f in [&self.h, &self.g] {
            out.extend_from_slice(&(f.len() as u32).to_le_bytes());
            for &c in f.iter() {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        out
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        self.fqm.format_elem(self.encode(x))
    }
}

/// `GF(q)` with its least irreducible modulus over the prime field.
pub fn gf(q: u64) -> Result<Arc<Field>> {
    Ok(FieldTower::for_q(q, 1)?.base_field().clone())
}

/// Integer-encoded `F_q`-linear view of multiplication by `x` on `F_{q^m}`:
/// column `k` holds the coordinates of `x * w_k` where `w_k = X^k`.
pub fn regular_matrix(tower: &FieldTower, x: u32) -> FqMatrix {
    let m = tower.m() as usize;
    let mut mat = FqMatrix::zero(tower.base_field().clone(), m, m);
    let q = tower.q() as u64;
    for k in 0..m {
        let wk = q.pow(k as u32) as u32;
        let img = tower.decode(tower.top_field().mul(x, wk));
        for r in 0..m {
            mat.set(r, k, img.coords[r]);
        }
    }
    mat
}
