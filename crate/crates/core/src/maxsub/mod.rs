//! Maximal subalgebras: standard representatives of the conjugacy classes,
//! indices, class sizes, minimal index, `κ(A)`, exact counts per index and
//! inclusion-exclusion bounds on `1 - P(A, d)`.

mod bimodule;
mod orbit;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{
    embed_inner, embed_subfield, frobenius_twist, simple_algebra, AlgElement, AlgebraSpec,
};
use crate::counting::{big_pow, gl_order, pgl_order};
use crate::error::{Error, Result};
use crate::gfield::prime_divisors;
use crate::linalg::Subspace;
use crate::Rational;

pub use bimodule::{maximal_radical_ideals, solve, RadicalQuotient, DUAL_LIMIT};
pub use orbit::{orbit, primitive_element, unit_generators, unit_group_order, ORBIT_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// `P_{l,n-l}(q^m)`.
    S1 { l: usize },
    /// `M_{n/a}(q^{ma})`, `a` a prime divisor of `n`.
    S2 { a: usize },
    /// `M_n(q^{m/b})`, `b` a prime divisor of `m`.
    S3 { b: usize },
    /// A maximal subalgebra of factor `j`, all other factors and `J`.
    T1 { j: usize, inner: Box<ClassKind> },
    /// Diagonal of factors `j1 ≅ j2`; the `m` Galois twists form one entry.
    T2 { j1: usize, j2: usize },
    /// `S ⊕ H` for the `h`-th maximal ideal `H ⊂ J`.
    T3 { h: usize },
}

impl ClassKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ClassKind::S1 { .. } => "S1",
            ClassKind::S2 { .. } => "S2",
            ClassKind::S3 { .. } => "S3",
            ClassKind::T1 { .. } => "T1",
            ClassKind::T2 { .. } => "T2",
            ClassKind::T3 { .. } => "T3",
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match self {
            ClassKind::S1 { l } => vec![*l],
            ClassKind::S2 { a } => vec![*a],
            ClassKind::S3 { b } => vec![*b],
            ClassKind::T1 { j, inner } => std::iter::once(*j).chain(inner.params()).collect(),
            ClassKind::T2 { j1, j2 } => vec![*j1, *j2],
            ClassKind::T3 { h } => vec![*h],
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::T1 { j, inner } => write!(f, "T1({j}, {inner})"),
            other => {
                let ps: Vec<String> = other.params().iter().map(|p| p.to_string()).collect();
                write!(f, "{}({})", other.tag(), ps.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubalgebraClass {
    pub kind: ClassKind,
    /// `dim A - dim B`.
    pub codim: usize,
    /// `[A:B] = q^codim`.
    pub index: BigUint,
    /// Number of maximal subalgebras in the class; `None` when neither a
    /// formula nor an orbit enumeration within budget is available.
    pub class_size: Option<BigUint>,
    pub rep_basis: Vec<AlgElement>,
    /// Further representatives whose orbits complete the class (the Galois
    /// twists of a diagonal).
    pub extra_reps: Vec<Vec<AlgElement>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDoc {
    pub kind: String,
    pub params: Vec<usize>,
    pub index: String,
    pub class_size: Option<String>,
}

impl SubalgebraClass {
    pub fn to_doc(&self) -> ClassDoc {
        ClassDoc {
            kind: self.kind.tag().to_string(),
            params: self.kind.params(),
            index: self.index.to_string(),
            class_size: self.class_size.as_ref().map(|c| c.to_string()),
        }
    }
}

/// Gaussian binomial `[n choose l]_t`.
pub fn gaussian_binomial(n: u64, l: u64, t: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..l {
        num *= big_pow(t, n - i) - 1u32;
        den *= big_pow(t, i + 1) - 1u32;
    }
    num / den
}

struct Local {
    kind: ClassKind,
    codim: usize,
    basis: Vec<AlgElement>,
    class_size: Option<BigUint>,
}

/// Standard representatives of `M_n(q^m)` in its own coordinates.
fn simple_local(n: usize, m: usize, q: u64) -> Result<Vec<Local>> {
    let dim = n * n * m;
    let t = q.pow(m as u32);
    let mut out = Vec::new();
    for l in 1..n {
        let basis = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !(i >= l && j < l))
            .flat_map(|(i, j)| (0..m).map(move |k| (i * n + j) * m + k))
            .map(|idx| {
                let mut v = vec![0; dim];
                v[idx] = 1;
                v
            })
            .collect();
        out.push(Local {
            kind: ClassKind::S1 { l },
            codim: m * l * (n - l),
            basis,
            class_size: Some(gaussian_binomial(n as u64, l as u64, t)),
        });
    }
    for a in prime_divisors(n as u64) {
        let a = a as usize;
        let basis = embed_inner(n, m, q, a)?.images;
        let codim = dim - basis.len();
        let class_size = if gl_order(n as u64, t) <= BigUint::from(ORBIT_LIMIT) {
            let host = simple_algebra(n, m, q)?;
            Some(BigUint::from(orbit(&host, &basis)?.len()))
        } else {
            None
        };
        out.push(Local {
            kind: ClassKind::S2 { a },
            codim,
            basis,
            class_size,
        });
    }
    for b in prime_divisors(m as u64) {
        let b = b as usize;
        let basis = embed_subfield(n, m, q, b)?.images;
        let codim = dim - basis.len();
        let sub = q.pow((m / b) as u32);
        // |N(B^×)| = |B^×| (t - 1) / (t^{1/b} - 1)
        let class_size = gl_order(n as u64, t) * BigUint::from(sub - 1)
            / (gl_order(n as u64, sub) * BigUint::from(t - 1));
        out.push(Local {
            kind: ClassKind::S3 { b },
            codim,
            basis,
            class_size: Some(class_size),
        });
    }
    Ok(out)
}

fn finish(
    spec: &AlgebraSpec,
    kind: ClassKind,
    codim: usize,
    class_size: Option<BigUint>,
    basis: Vec<AlgElement>,
) -> SubalgebraClass {
    SubalgebraClass {
        kind,
        codim,
        index: big_pow(spec.q(), codim as u64),
        class_size,
        rep_basis: basis,
        extra_reps: Vec::new(),
    }
}

/// Standard representatives of the conjugacy classes of maximal subalgebras.
pub fn standard_reps(spec: &AlgebraSpec) -> Result<Vec<SubalgebraClass>> {
    let dec = spec.require_decomposition()?;
    let field = spec.field().clone();
    if dec.r() == 1 && dec.is_semisimple() {
        let f = &dec.factors[0];
        return simple_local(f.n, f.m, spec.q())?
            .into_iter()
            .map(|c| {
                let basis = c.basis.iter().map(|v| f.image(&field, v)).collect();
                Ok(finish(spec, c.kind, c.codim, c.class_size, basis))
            })
            .collect();
    }
    let factor_basis = |skip: &[usize]| -> Vec<AlgElement> {
        dec.factors
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .flat_map(|(_, f)| f.basis.iter().cloned())
            .collect()
    };
    let mut out = Vec::new();
    for (j, f) in dec.factors.iter().enumerate() {
        for c in simple_local(f.n, f.m, spec.q())? {
            let mut basis: Vec<AlgElement> = c.basis.iter().map(|v| f.image(&field, v)).collect();
            basis.extend(factor_basis(&[j]));
            basis.extend(dec.radical_basis.iter().cloned());
            let kind = ClassKind::T1 {
                j,
                inner: Box::new(c.kind),
            };
            out.push(finish(spec, kind, c.codim, c.class_size, basis));
        }
    }
    for j1 in 0..dec.r() {
        for j2 in j1 + 1..dec.r() {
            let (f1, f2) = (&dec.factors[j1], &dec.factors[j2]);
            if (f1.n, f1.m) != (f2.n, f2.m) {
                continue;
            }
            let (n, m) = (f1.n, f1.m);
            let mut twists = Vec::with_capacity(m);
            for tw in 0..m {
                let images = frobenius_twist(n, m, spec.q(), tw as i64)?.images;
                let mut basis: Vec<AlgElement> = f1
                    .basis
                    .iter()
                    .zip(&images)
                    .map(|(x, img)| spec.add(x, &f2.image(&field, img)))
                    .collect();
                basis.extend(factor_basis(&[j1, j2]));
                basis.extend(dec.radical_basis.iter().cloned());
                twists.push(basis);
            }
            let size = BigUint::from(m) * pgl_order(n as u64, spec.q().pow(m as u32));
            let mut c = finish(
                spec,
                ClassKind::T2 { j1, j2 },
                f1.dim(),
                Some(size),
                twists.remove(0),
            );
            c.extra_reps = twists;
            out.push(c);
        }
    }
    if !dec.is_semisimple() {
        let s = factor_basis(&[]);
        for (h, rq) in maximal_radical_ideals(spec)?.into_iter().enumerate() {
            let mut basis = s.clone();
            basis.extend(rq.h_basis);
            let size = big_pow(spec.q(), rq.conj_exponent as u64);
            out.push(finish(
                spec,
                ClassKind::T3 { h },
                rq.codim,
                Some(size),
                basis,
            ));
        }
    }
    Ok(out)
}

/// Number of conjugates of a standard representative.
pub fn class_size(rep: &SubalgebraClass) -> Result<BigUint> {
    rep.class_size.clone().ok_or_else(|| Error::TooLarge {
        what: format!(
            "class size of {} (orbit beyond {} units)",
            rep.kind, ORBIT_LIMIT
        ),
        lower: None,
        upper: None,
    })
}

/// Minimal index `m(A)` as `(codim, witnesses)`.
#[derive(Clone, Debug)]
pub struct MinIndex {
    pub codim: u64,
    pub index: BigUint,
    pub witnesses: Vec<SubalgebraClass>,
}

pub fn m_min(spec: &AlgebraSpec) -> Result<MinIndex> {
    let reps = standard_reps(spec)?;
    let codim = reps
        .iter()
        .map(|c| c.codim)
        .min()
        .ok_or_else(|| Error::invalid("m(A) is undefined for A = F_q"))? as u64;
    let witnesses: Vec<SubalgebraClass> = reps
        .into_iter()
        .filter(|c| c.codim as u64 == codim)
        .collect();
    Ok(MinIndex {
        codim,
        index: big_pow(spec.q(), codim),
        witnesses,
    })
}

/// `log_q m(A)` for `M_n(q^m)` from the closed-form table.
pub fn m_min_table(n: u64, m: u64) -> Result<u64> {
    match (n, m) {
        (1, 1) => Err(Error::invalid("m(A) is undefined for A = F_q")),
        (1, _) => {
            let p = prime_divisors(m)[0];
            Ok(m - m / p)
        }
        (2, _) => Ok(m),
        _ => Ok(m * (n - 1)),
    }
}

fn simple_shape(spec: &AlgebraSpec) -> Result<(u64, u64)> {
    let dec = spec.require_decomposition()?;
    if dec.r() != 1 || !dec.is_semisimple() {
        return Err(Error::invalid("operation needs a simple algebra"));
    }
    Ok((dec.factors[0].n as u64, dec.factors[0].m as u64))
}

/// `κ(A) = ξ q^{-m(n-1)} (q^{mn} - 1)/(q^m - 1)` with `ξ = 2` for `n > 2`.
pub fn kappa(spec: &AlgebraSpec) -> Result<Rational> {
    let (n, m) = simple_shape(spec)?;
    kappa_nm(n, m, spec.q())
}

pub fn kappa_nm(n: u64, m: u64, q: u64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::invalid("κ(A) needs n > 1"));
    }
    let xi = if n > 2 { 2u32 } else { 1 };
    let num = BigUint::from(xi) * (big_pow(q, m * n) - 1u32);
    let den = big_pow(q, m * (n - 1)) * (big_pow(q, m) - 1u32);
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exact `m_k(A)`: total number of maximal subalgebras of each index.
pub fn m_n_counts(spec: &AlgebraSpec) -> Result<BTreeMap<BigUint, BigUint>> {
    let mut out: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    for c in standard_reps(spec)? {
        let size = class_size(&c)?;
        *out.entry(c.index.clone()).or_insert_with(BigUint::zero) += size;
    }
    Ok(out)
}

/// Every maximal subalgebra of `A`, listed explicitly.
pub const ENUMERATION_LIMIT: usize = 4096;

pub fn enumerate_maximal(spec: &AlgebraSpec) -> Result<Vec<(SubalgebraClass, Subspace)>> {
    let reps = standard_reps(spec)?;
    let mut total = BigUint::zero();
    for c in &reps {
        total += class_size(c)?;
    }
    if total > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::TooLarge {
            what: format!("{total} maximal subalgebras"),
            lower: None,
            upper: None,
        });
    }
    let mut out = Vec::new();
    for c in reps {
        let mut members = orbit(spec, &c.rep_basis)?;
        for extra in &c.extra_reps {
            members.extend(orbit(spec, extra)?);
        }
        if BigUint::from(members.len()) != class_size(&c)? {
            return Err(Error::Indeterminate(format!(
                "orbit of {} has {} members, class size says {}",
                c.kind,
                members.len(),
                class_size(&c)?
            )));
        }
        out.extend(members.into_iter().map(|s| (c.clone(), s)));
    }
    Ok(out)
}

/// Bonferroni bounds `(lower, upper)` on `1 - P(A, d)`.
pub fn bonferroni(spec: &AlgebraSpec, d: u32) -> Result<(Rational, Rational)> {
    let all = enumerate_maximal(spec)?;
    let q = spec.q();
    let dim = spec.dim();
    let term = |codim: usize| {
        Rational::new(
            BigInt::one(),
            BigInt::from(big_pow(q, codim as u64 * d as u64)),
        )
    };
    let mut upper = Rational::zero();
    for (_, s) in &all {
        upper += term(dim - s.dim());
    }
    let mut pairs = Rational::zero();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            pairs += term(dim - all[i].1.intersect(&all[j].1).dim());
        }
    }
    Ok((&upper - pairs, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product, truncated_poly};
    use crate::scalar::rat;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn counts(spec: &AlgebraSpec) -> Vec<(u64, u64)> {
        m_n_counts(spec)
            .unwrap()
            .into_iter()
            .map(|(k, v)| (u64::try_from(k).unwrap(), u64::try_from(v).unwrap()))
            .collect()
    }

    #[test]
    fn reps_of_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let reps = standard_reps(&a).unwrap();
        let got: Vec<(String, BigUint)> = reps
            .iter()
            .map(|c| (c.kind.to_string(), c.index.clone()))
            .collect();
        assert_eq!(
            got,
            vec![("S1(1)".to_string(), big(2)), ("S2(2)".to_string(), big(4))]
        );
        assert!(reps.iter().all(|c| a.is_subalgebra(&c.rep_basis)));
        assert_eq!(reps[0].class_size, Some(big(3)));
        assert_eq!(reps[1].class_size, Some(big(1)));
    }

    #[test]
    fn reps_of_m2_over_f4() {
        let a = simple_algebra(2, 2, 2).unwrap();
        let idx: Vec<BigUint> = standard_reps(&a)
            .unwrap()
            .into_iter()
            .map(|c| c.index)
            .collect();
        assert_eq!(idx, vec![big(4), big(16), big(16)]);
    }

    #[test]
    fn k_has_no_maximal_subalgebras() {
        let k = simple_algebra(1, 1, 3).unwrap();
        assert!(standard_reps(&k).unwrap().is_empty());
        assert!(m_n_counts(&k).unwrap().is_empty());
        assert!(m_min(&k).is_err());
        assert_eq!(bonferroni(&k, 2).unwrap(), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn minimal_index_table() {
        assert_eq!(
            m_min(&simple_algebra(2, 1, 3).unwrap()).unwrap().index,
            big(3)
        );
        let m3 = m_min(&simple_algebra(3, 1, 2).unwrap()).unwrap();
        assert_eq!(m3.index, big(4));
        assert_eq!(m3.witnesses.len(), 2);
        assert_eq!(
            m_min(&simple_algebra(1, 6, 2).unwrap()).unwrap().index,
            big(8)
        );
        for (n, m) in [(1, 2), (1, 6), (2, 2), (3, 1), (4, 1), (2, 3)] {
            let a = simple_algebra(n, m, 2).unwrap();
            assert_eq!(
                m_min(&a).unwrap().codim,
                m_min_table(n as u64, m as u64).unwrap()
            );
        }
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&simple_algebra(2, 1, 2).unwrap()).unwrap(), rat(3, 2));
        assert_eq!(kappa(&simple_algebra(3, 1, 2).unwrap()).unwrap(), rat(7, 2));
        assert!(kappa(&simple_algebra(1, 2, 2).unwrap()).is_err());
    }

    #[test]
    fn counts_m22() {
        assert_eq!(
            counts(&simple_algebra(2, 1, 2).unwrap()),
            vec![(2, 3), (4, 1)]
        );
    }

    #[test]
    fn counts_f4_squared() {
        let f4 = simple_algebra(1, 2, 2).unwrap();
        let a = product(&[f4.clone(), f4]).unwrap();
        assert_eq!(counts(&a), vec![(2, 2), (4, 2)]);
    }

    #[test]
    fn counts_k_squared() {
        let k = simple_algebra(1, 1, 2).unwrap();
        assert_eq!(counts(&product(&[k.clone(), k]).unwrap()), vec![(2, 1)]);
    }

    #[test]
    fn counts_truncated() {
        assert_eq!(counts(&truncated_poly(2, 3).unwrap()), vec![(2, 1)]);
    }

    #[test]
    fn bonferroni_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        assert_eq!(bonferroni(&a, 2).unwrap(), (rat(37, 64), rat(13, 16)));
    }

    #[test]
    fn gaussian() {
        assert_eq!(gaussian_binomial(4, 2, 2), big(35));
        assert_eq!(gaussian_binomial(3, 1, 3), big(13));
    }

    #[test]
    fn s2_orbit_matches_normaliser_count() {
        // |GL_n(t)| / (a |GL_{n/a}(t^a)|)
        for (n, m, q) in [(2, 1, 2u64), (2, 1, 3), (3, 1, 2), (2, 2, 2), (4, 1, 2)] {
            let t = q.pow(m as u32);
            for c in simple_local(n, m, q).unwrap() {
                if let ClassKind::S2 { a } = c.kind {
                    let want = gl_order(n as u64, t)
                        / (big(a as u64) * gl_order((n / a) as u64, t.pow(a as u32)));
                    assert_eq!(c.class_size, Some(want), "n={n} m={m} q={q}");
                }
            }
        }
    }
}
