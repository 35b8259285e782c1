//! Exact minimal generator number by exhaustive search over canonical tuples.
//!
//! A tuple generates iff the span of `{1, x_1, ..., x_d}` does, so candidates
//! are taken modulo `F_q·1`, scaled to a leading 1, and only strictly
//! increasing tuples of such representatives are tried.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{close, Kernel};
use crate::algebra::{AlgElement, AlgebraSpec};
use crate::error::{Error, Result};
use crate::with_kernel;

pub const DEFAULT_D_CAP: usize = 4;
pub const DEFAULT_D_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug)]
pub struct DSearchConfig {
    pub cap: usize,
    /// Maximum closure calls per value of `d`.
    pub budget: u64,
    /// Random tuples tried before each exhaustive pass.
    pub random_trials: u64,
    pub seed: u64,
}

impl Default for DSearchConfig {
    fn default() -> Self {
        DSearchConfig {
            cap: DEFAULT_D_CAP,
            budget: DEFAULT_D_BUDGET,
            random_trials: 4096,
            seed: 0,
        }
    }
}

pub fn d_exact(spec: &AlgebraSpec, cap: usize) -> Result<usize> {
    d_exact_with(
        spec,
        DSearchConfig {
            cap,
            ..Default::default()
        },
    )
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Representatives of `(A / F_q·1) \ 0` up to scalars, in code order.
fn candidates(spec: &AlgebraSpec) -> Result<Vec<AlgElement>> {
    let one = spec.one();
    let p = one.iter().position(|&c| c != 0).expect("unity is nonzero");
    let n = spec.dim() - 1;
    let q = spec.q();
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 32)
        .ok_or_else(|| Error::too_large("candidate set for the generator search"))?;
    let mut out = Vec::new();
    for code in 1..total {
        let mut rest = code;
        let mut v = vec![0u32; spec.dim()];
        for (i, x) in v.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            *x = (rest % q) as u32;
            rest /= q;
        }
        if v.iter().find(|&&c| c != 0) == Some(&1) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Visits strictly increasing `d`-tuples whose first index is `first`,
/// returning true as soon as `f` does.
fn any_tuple(n: usize, d: usize, first: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let mut idx: Vec<usize> = (0..d).map(|i| first + i).collect();
    if d == 0 || idx[d - 1] >= n {
        return false;
    }
    loop {
        if f(&idx) {
            return true;
        }
        // advance positions 1..d
        let mut pos = d - 1;
        loop {
            if pos == 0 {
                return false;
            }
            if idx[pos] + (d - pos) < n {
                idx[pos] += 1;
                for j in pos + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            pos -= 1;
        }
    }
}

fn search<K: Kernel>(k: &K, spec: &AlgebraSpec, cfg: DSearchConfig) -> Result<usize> {
    let dim = spec.dim();
    if dim == 1 {
        return Ok(0);
    }
    let cands: Vec<K::Vector> = candidates(spec)?.iter().map(|x| k.from_coords(x)).collect();
    let n = cands.len();
    let gen = |idx: &[usize]| {
        let seeds: Vec<K::Vector> = idx.iter().map(|&i| cands[i].clone()).collect();
        close(k, &seeds, true).basis.len() == dim
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_hit = |d: usize, rng: &mut ChaCha8Rng| {
        (0..cfg.random_trials).any(|_| {
            let idx: Vec<usize> = (0..d)
                .map(|_| (rng.next_u64() % n as u64) as usize)
                .collect();
            gen(&idx)
        })
    };
    for d in 1..=cfg.cap {
        if d > n {
            break;
        }
        if random_hit(d, &mut rng) {
            return Ok(d);
        }
        let work = binomial(n as u64, d as u64).unwrap_or(u64::MAX);
        if work > cfg.budget {
            let upper = (d + 1..=cfg.cap).find(|&e| random_hit(e, &mut rng));
            return Err(Error::TooLarge {
                what: format!("exhaustive generator search at d = {d} needs {work} closures"),
                lower: Some(d as u64),
                upper: upper.map(|u| u as u64),
            });
        }
        let found = (0..n)
            .into_par_iter()
            .any(|first| any_tuple(n, d, first, &mut |idx| gen(idx)));
        if found {
            return Ok(d);
        }
    }
    Err(Error::TooLarge {
        what: format!("no generating tuple of size <= {}", cfg.cap),
        lower: Some(cfg.cap as u64 + 1),
        upper: None,
    })
}

pub fn d_exact_with(spec: &AlgebraSpec, cfg: DSearchConfig) -> Result<usize> {
    let engine = super::Engine::new(spec);
    with_kernel!(&engine, k => search(k, spec, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product, simple_algebra};

    #[test]
    fn d_of_k_is_zero() {
        assert_eq!(d_exact(&simple_algebra(1, 1, 2).unwrap(), 4).unwrap(), 0);
        assert_eq!(d_exact(&simple_algebra(1, 1, 5).unwrap(), 4).unwrap(), 0);
    }

    #[test]
    fn d_of_m22_is_two() {
        assert_eq!(d_exact(&simple_algebra(2, 1, 2).unwrap(), 4).unwrap(), 2);
    }

    #[test]
    fn d_of_k_cubed() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let a = product(&[k.clone(), k.clone(), k]).unwrap();
        assert_eq!(d_exact(&a, 4).unwrap(), 2);
    }

    #[test]
    fn field_is_one_generated() {
        assert_eq!(d_exact(&simple_algebra(1, 3, 2).unwrap(), 4).unwrap(), 1);
    }

    #[test]
    fn tuples_enumerated() {
        let mut seen = Vec::new();
        for first in 0..5 {
            any_tuple(5, 3, first, &mut |idx| {
                seen.push(idx.to_vec());
                false
            });
        }
        assert_eq!(seen.len(), 10);
        assert!(seen.iter().all(|t| t[0] < t[1] && t[1] < t[2]));
    }

    #[test]
    fn budget_exceeded_reports_bounds() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let a = product(&vec![k; 6]).unwrap();
        let cfg = DSearchConfig {
            cap: 4,
            budget: 10,
            random_trials: 0,
            seed: 1,
        };
        match d_exact_with(&a, cfg) {
            Err(Error::TooLarge { lower, .. }) => assert_eq!(lower, Some(1)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
