//! Exact-uniform sampling of elements, units, nilpotents and matrices with a
//! prescribed characteristic polynomial or rank, with the acceptance rates
//! the rejection steps are expected to show.

mod stream;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::algebra::{matrix_coords, AlgElement, AlgebraSpec, FactorBlock};
use crate::counting::{big_pow, count_charpoly, f_uv};
use crate::error::{Error, Result};
use crate::gfield::{gf, poly, Field, FieldTower, Poly};
use crate::linalg::FqMatrix;
use crate::Rational;

pub use stream::{stream_id, RandomStream};

/// Rejection samplers refuse targets whose predicted acceptance is below
/// `2^-24`.
pub const ACCEPTANCE_FLOOR_BITS: u32 = 24;

/// A sampled value and the number of candidates drawn to obtain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draw<T> {
    pub value: T,
    pub attempts: u64,
}

/// Restriction placed on the sampled elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    None,
    Nilpotent,
    Unit,
    /// Characteristic polynomial over `F_{q^m}` (simple algebras only).
    Charpoly(Poly),
    /// Rank over `F_{q^m}` (simple algebras only).
    Rank(usize),
}

impl Condition {
    pub fn label(&self) -> String {
        match self {
            Condition::None => "none".into(),
            Condition::Nilpotent => "nilpotent".into(),
            Condition::Unit => "unit".into(),
            Condition::Charpoly(f) => format!("charpoly({f:?})"),
            Condition::Rank(a) => format!("rank({a})"),
        }
    }
}

fn floor_check(predicted: &Rational, what: &str) -> Result<()> {
    let floor = Rational::new(BigInt::one(), BigInt::one() << ACCEPTANCE_FLOOR_BITS);
    if predicted < &floor {
        return Err(Error::TooLarge {
            what: format!(
                "{what}: predicted acceptance {predicted} (≈{:.3e}) is below 2^-{ACCEPTANCE_FLOOR_BITS}",
                predicted.to_f64().unwrap_or(0.0)
            ),
            lower: None,
            upper: None,
        });
    }
    Ok(())
}

pub fn uniform_element(spec: &AlgebraSpec, s: &mut RandomStream) -> AlgElement {
    let q = spec.q();
    (0..spec.dim()).map(|_| s.below(q) as u32).collect()
}

pub fn uniform_matrix(k: &Arc<Field>, rows: usize, cols: usize, s: &mut RandomStream) -> FqMatrix {
    let t = k.order() as u64;
    let data = (0..rows * cols).map(|_| s.below(t) as u32).collect();
    FqMatrix::from_vec(k.clone(), rows, cols, data)
}

/// `F(q^m, n)`: chance that a uniform matrix of `M_n(q^m)` is invertible.
pub fn unit_acceptance(n: usize, m: usize, q: u64) -> Rational {
    f_uv(q.pow(m as u32), n as u32)
}

/// `t^{-n}`: chance that a uniform matrix of `M_n(t)` is nilpotent.
pub fn nilpotent_acceptance(n: usize, t: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(big_pow(t, n as u64)))
}

/// `|A_f| / t^{n^2}`.
pub fn charpoly_acceptance(t: u64, f: &[u32]) -> Result<Rational> {
    let mut f = f.to_vec();
    poly::trim(&mut f);
    let f = &f[..];
    let n = poly::degree(f).ok_or_else(|| Error::invalid("zero polynomial"))? as u64;
    Ok(count_charpoly(t, f)?.value / Rational::from_integer(BigInt::from(big_pow(t, n * n))))
}

/// `prod_{i<α} (1 - t^{i-n})`: chance that a uniform `n × α` matrix has
/// full column rank.
pub fn full_rank_acceptance(n: usize, t: u64, alpha: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..alpha {
        acc *= Rational::one()
            - Rational::new(BigInt::one(), BigInt::from(big_pow(t, (n - i) as u64)));
    }
    acc
}

fn factor_matrix(
    f: &FactorBlock,
    q: u64,
    s: &mut RandomStream,
    accept: impl Fn(&FqMatrix) -> bool,
) -> Result<(FqMatrix, u64)> {
    let tower = FieldTower::for_q(q, f.m as u32)?;
    let k = tower.top_field().clone();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let mat = uniform_matrix(&k, f.n, f.n, s);
        if accept(&mat) {
            return Ok((mat, attempts));
        }
    }
}

fn embed(spec: &AlgebraSpec, f: &FactorBlock, mat: &FqMatrix) -> Result<AlgElement> {
    let tower = FieldTower::for_q(spec.q(), f.m as u32)?;
    Ok(f.image(spec.field(), &matrix_coords(&tower, mat)))
}

fn radical_element(spec: &AlgebraSpec, s: &mut RandomStream) -> Result<AlgElement> {
    let dec = spec.require_decomposition()?;
    let q = spec.q();
    let mut out = spec.zero();
    for v in &dec.radical_basis {
        let c = s.below(q) as u32;
        out = spec.add(&out, &spec.scale(c, v));
    }
    Ok(out)
}

/// Factorwise sampling `S^× × J` (or `S^N × J`) with per-factor rejection.
fn decomposed(
    spec: &AlgebraSpec,
    s: &mut RandomStream,
    nilpotent: bool,
) -> Result<Draw<AlgElement>> {
    let dec = spec.require_decomposition()?;
    let q = spec.q();
    for f in &dec.factors {
        let t = q.pow(f.m as u32);
        let p = if nilpotent {
            nilpotent_acceptance(f.n, t)
        } else {
            unit_acceptance(f.n, f.m, q)
        };
        floor_check(
            &p,
            if nilpotent {
                "nilpotent sampler"
            } else {
                "unit sampler"
            },
        )?;
    }
    let mut out = radical_element(spec, s)?;
    let mut attempts = 0;
    for f in &dec.factors {
        let (mat, a) = if nilpotent {
            factor_matrix(f, q, s, |m| m.is_nilpotent())?
        } else {
            factor_matrix(f, q, s, |m| m.is_unit())?
        };
        attempts += a;
        out = spec.add(&out, &embed(spec, f, &mat)?);
    }
    Ok(Draw {
        value: out,
        attempts,
    })
}

/// Uniform unit: `A^× = S^× + J` with each factor of `S^×` drawn by rejection
/// (acceptance `F(q^m, n)`).
pub fn uniform_unit(spec: &AlgebraSpec, s: &mut RandomStream) -> Result<Draw<AlgElement>> {
    decomposed(spec, s, false)
}

/// Uniform nilpotent: `A^N = S^N + J`, each factor by rejection (acceptance
/// `t^{-n}`).
pub fn uniform_nilpotent(spec: &AlgebraSpec, s: &mut RandomStream) -> Result<Draw<AlgElement>> {
    decomposed(spec, s, true)
}

/// Uniform matrix of `M_n(q^m)` with characteristic polynomial `f`.
pub fn uniform_charpoly(
    n: usize,
    m: usize,
    q: u64,
    f: &[u32],
    s: &mut RandomStream,
) -> Result<Draw<FqMatrix>> {
    let mut want = f.to_vec();
    poly::trim(&mut want);
    if poly::degree(&want) != Some(n) || want[n] != 1 {
        return Err(Error::invalid(format!(
            "characteristic polynomial must be monic of degree {n}"
        )));
    }
    let t = q.pow(m as u32);
    floor_check(&charpoly_acceptance(t, &want)?, "charpoly sampler")?;
    let tower = FieldTower::for_q(q, m as u32)?;
    let k = tower.top_field().clone();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let mat = uniform_matrix(&k, n, n, s);
        if mat.charpoly() == want {
            return Ok(Draw {
                value: mat,
                attempts,
            });
        }
    }
}

/// Uniform `rows × cols` matrix of full rank `min(rows, cols)`.
pub fn uniform_full_rank(
    k: &Arc<Field>,
    rows: usize,
    cols: usize,
    s: &mut RandomStream,
) -> Draw<FqMatrix> {
    let r = rows.min(cols);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let mat = uniform_matrix(k, rows, cols, s);
        if mat.rank() == r {
            return Draw {
                value: mat,
                attempts,
            };
        }
    }
}

/// Uniform rank-`α` matrix of `M_n(t)` as `U V` with `U` (`n × α`) and `V`
/// (`α × n`) of full rank; each such matrix has `|GL_α(t)|` factorisations.
pub fn uniform_rank(
    n: usize,
    t: u64,
    alpha: usize,
    s: &mut RandomStream,
) -> Result<Draw<FqMatrix>> {
    if alpha > n {
        return Err(Error::invalid(format!("rank {alpha} exceeds n = {n}")));
    }
    let k = gf(t)?;
    if alpha == 0 {
        return Ok(Draw {
            value: FqMatrix::zero(k, n, n),
            attempts: 0,
        });
    }
    let u = uniform_full_rank(&k, n, alpha, s);
    let v = uniform_full_rank(&k, alpha, n, s);
    Ok(Draw {
        value: u.value.mul(&v.value)?,
        attempts: u.attempts + v.attempts,
    })
}

/// Shape `(n, m)` and factor of a simple algebra.
pub(crate) fn simple_factor(spec: &AlgebraSpec) -> Result<&FactorBlock> {
    let dec = spec.require_decomposition()?;
    if dec.r() != 1 || !dec.is_semisimple() {
        return Err(Error::invalid("condition needs a simple algebra M(n,m,q)"));
    }
    Ok(&dec.factors[0])
}

/// Maps a matrix over `F_{q^m}` into a simple algebra.
pub fn matrix_to_element(spec: &AlgebraSpec, mat: &FqMatrix) -> Result<AlgElement> {
    embed(spec, simple_factor(spec)?, mat)
}

/// Uniform element of `A` satisfying `cond`.
pub fn sample_condition(
    spec: &AlgebraSpec,
    cond: &Condition,
    s: &mut RandomStream,
) -> Result<Draw<AlgElement>> {
    match cond {
        Condition::None => Ok(Draw {
            value: uniform_element(spec, s),
            attempts: 1,
        }),
        Condition::Unit => uniform_unit(spec, s),
        Condition::Nilpotent => uniform_nilpotent(spec, s),
        Condition::Charpoly(f) => {
            let fb = simple_factor(spec)?;
            let d = uniform_charpoly(fb.n, fb.m, spec.q(), f, s)?;
            Ok(Draw {
                value: embed(spec, fb, &d.value)?,
                attempts: d.attempts,
            })
        }
        Condition::Rank(a) => {
            let fb = simple_factor(spec)?;
            let d = uniform_rank(fb.n, spec.q().pow(fb.m as u32), *a, s)?;
            Ok(Draw {
                value: embed(spec, fb, &d.value)?,
                attempts: d.attempts,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parabolic, simple_algebra};
    use crate::scalar::rat;
    use std::collections::HashMap;

    #[test]
    fn units_are_units() {
        let a = simple_algebra(2, 1, 3).unwrap();
        let mut s = RandomStream::new(5, 0);
        for _ in 0..200 {
            assert!(a.is_unit(&uniform_unit(&a, &mut s).unwrap().value));
        }
    }

    #[test]
    fn nilpotents_are_nilpotent() {
        let a = simple_algebra(3, 1, 2).unwrap();
        let mut s = RandomStream::new(5, 1);
        for _ in 0..200 {
            assert!(a.is_nilpotent(&uniform_nilpotent(&a, &mut s).unwrap().value));
        }
    }

    #[test]
    fn parabolic_nilpotents_are_radical() {
        let a = parabolic(&[1, 1], 1, 2).unwrap();
        let mut s = RandomStream::new(9, 0);
        let mut seen: HashMap<AlgElement, u32> = HashMap::new();
        for _ in 0..2000 {
            *seen
                .entry(uniform_nilpotent(&a, &mut s).unwrap().value)
                .or_default() += 1;
        }
        assert_eq!(seen.len(), 2);
        assert!(seen.keys().all(|x| a.is_nilpotent(x)));
        assert!(seen.values().all(|&c| c > 900));
    }

    #[test]
    fn acceptance_predictions() {
        assert_eq!(unit_acceptance(2, 1, 2), rat(3, 8));
        assert_eq!(unit_acceptance(1, 1, 5), rat(4, 5));
        assert_eq!(nilpotent_acceptance(2, 2), rat(1, 4));
        assert_eq!(charpoly_acceptance(2, &[1, 1, 1]).unwrap(), rat(1, 8));
        assert_eq!(full_rank_acceptance(2, 2, 2), rat(3, 8));
    }

    #[test]
    fn rank_zero_is_zero() {
        let mut s = RandomStream::new(0, 0);
        assert!(uniform_rank(3, 2, 0, &mut s).unwrap().value.is_zero());
    }

    #[test]
    fn rank_draws_have_rank() {
        let mut s = RandomStream::new(0, 0);
        for a in 0..=3 {
            for _ in 0..20 {
                assert_eq!(uniform_rank(3, 3, a, &mut s).unwrap().value.rank(), a);
            }
        }
    }

    #[test]
    fn charpoly_draws_match() {
        let mut s = RandomStream::new(3, 3);
        for _ in 0..50 {
            let d = uniform_charpoly(2, 1, 2, &[1, 1, 1], &mut s).unwrap();
            assert_eq!(d.value.charpoly(), vec![1, 1, 1]);
        }
    }

    #[test]
    fn floor_rejects_tiny_targets() {
        let a = simple_algebra(7, 1, 16).unwrap();
        let mut s = RandomStream::new(0, 0);
        assert!(matches!(
            uniform_nilpotent(&a, &mut s),
            Err(Error::TooLarge { .. })
        ));
    }
}
