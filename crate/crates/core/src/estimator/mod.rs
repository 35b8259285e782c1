//! Exhaustive and Monte Carlo estimates of generation probabilities,
//! expected generation times, PFG invariants and the inequality suites.

mod chain;
mod pfg;
mod suites;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algebra::{AlgElement, AlgebraSpec, DEFAULT_EXHAUSTIVE_THRESHOLD};
use crate::closure::{close, Engine, Kernel};
use crate::error::{Error, Result};
use crate::gfield::{poly, FieldTower};
use crate::linalg::FqMatrix;
use crate::sampler::{matrix_to_element, sample_condition, Condition, RandomStream};
use crate::scalar::ratio_to_f64;
use crate::with_kernel;
use crate::Rational;

pub use chain::{SubalgebraChain, CHAIN_BUDGET};
pub use pfg::{estimate_e, growth_degree, pfg_report, v_eta, Check, EtaInverse, PfgReport};
pub use suites::{best_estimate, composition_length, default_grid, mind_f, verify_suite, SUITES};

/// Default closure-call budget for exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 26;
/// Monte Carlo draws per shard; each shard has its own stream.
pub const SHARD_SIZE: u64 = 4096;
pub const DEFAULT_LEVEL: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    /// Exact, from the subalgebra Markov chain.
    Chain,
    MonteCarlo,
}

impl Method {
    pub fn is_exact(self) -> bool {
        self != Method::MonteCarlo
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EstimateValue {
    Exact(Rational),
    Approx(f64),
}

impl EstimateValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            EstimateValue::Exact(r) => ratio_to_f64(r),
            EstimateValue::Approx(x) => *x,
        }
    }
}

impl Serialize for EstimateValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EstimateValue::Exact(r) => s.serialize_str(&r.to_string()),
            EstimateValue::Approx(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub value: EstimateValue,
    pub method: Method,
    pub samples: u64,
    pub ci: (f64, f64),
    pub level: f64,
    #[serde(serialize_with = "seed_string")]
    pub seed: u64,
    pub condition: String,
    pub d: usize,
}

fn seed_string<S: Serializer>(seed: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&seed.to_string())
}

impl Estimate {
    pub fn exact(
        v: Rational,
        method: Method,
        samples: u64,
        cfg: &EstimatorConfig,
        cond: &Condition,
        d: usize,
    ) -> Self {
        let x = ratio_to_f64(&v);
        Estimate {
            value: EstimateValue::Exact(v),
            method,
            samples,
            ci: (x, x),
            level: cfg.level,
            seed: cfg.seed,
            condition: cond.label(),
            d,
        }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.value {
            EstimateValue::Exact(r) => Some(r),
            EstimateValue::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Binomial standard error of a Monte Carlo proportion; zero when exact.
    pub fn stderr(&self) -> f64 {
        if self.method.is_exact() || self.samples == 0 {
            return 0.0;
        }
        let p = self.to_f64();
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo(u64),
    /// Exhaustive when within budget, otherwise Monte Carlo with the given
    /// sample count.
    Auto(u64),
}

#[derive(Clone, Debug)]
pub struct EstimatorConfig {
    pub seed: u64,
    /// Maximum number of closure calls for exhaustive enumeration.
    pub budget: u64,
    pub level: f64,
    /// Largest set enumerated element by element.
    pub exhaustive_threshold: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            seed: 0,
            budget: DEFAULT_BUDGET,
            level: DEFAULT_LEVEL,
            exhaustive_threshold: DEFAULT_EXHAUSTIVE_THRESHOLD,
        }
    }
}

impl EstimatorConfig {
    pub fn with_seed(seed: u64) -> Self {
        EstimatorConfig {
            seed,
            ..Default::default()
        }
    }

    /// Two-sided normal quantile for the configured level.
    pub fn z(&self) -> f64 {
        z_value(self.level)
    }
}

pub fn z_value(level: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64, level: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = z_value(level);
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if k as f64 == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// All `n × n` matrices over `F_{q^m}`, in code order.
pub fn all_matrices(n: usize, m: usize, q: u64, threshold: u64) -> Result<Vec<FqMatrix>> {
    let tower = FieldTower::for_q(q, m as u32)?;
    let k = tower.top_field().clone();
    let t = k.order() as u64;
    let total = t
        .checked_pow((n * n) as u32)
        .filter(|&x| x <= threshold)
        .ok_or_else(|| {
            Error::too_large(format!(
                "{t}^{} matrices exceed the exhaustive threshold",
                n * n
            ))
        })?;
    Ok((0..total)
        .map(|mut code| {
            let data = (0..n * n)
                .map(|_| {
                    let d = (code % t) as u32;
                    code /= t;
                    d
                })
                .collect();
            FqMatrix::from_vec(k.clone(), n, n, data)
        })
        .collect())
}

/// Every element of `A` satisfying `cond`.
pub fn target_set(spec: &AlgebraSpec, cond: &Condition, threshold: u64) -> Result<Vec<AlgElement>> {
    match cond {
        Condition::None => {
            spec.require_enumerable(threshold)?;
            Ok(spec.elements().collect())
        }
        Condition::Unit => {
            spec.require_enumerable(threshold)?;
            Ok(spec.elements().filter(|x| spec.is_unit(x)).collect())
        }
        Condition::Nilpotent => {
            spec.require_enumerable(threshold)?;
            Ok(spec.elements().filter(|x| spec.is_nilpotent(x)).collect())
        }
        Condition::Charpoly(f) => {
            let mut want = f.clone();
            poly::trim(&mut want);
            matrices_where(spec, threshold, |m| m.charpoly() == want)
        }
        Condition::Rank(a) => {
            let n = crate::sampler::simple_factor(spec)?.n;
            if *a > n {
                return Err(Error::invalid(format!("rank {a} exceeds n = {n}")));
            }
            matrices_where(spec, threshold, |m| m.rank() == *a)
        }
    }
}

fn matrices_where(
    spec: &AlgebraSpec,
    threshold: u64,
    keep: impl Fn(&FqMatrix) -> bool,
) -> Result<Vec<AlgElement>> {
    let fb = crate::sampler::simple_factor(spec)?;
    all_matrices(fb.n, fb.m, spec.q(), threshold)?
        .into_iter()
        .filter(|m| keep(m))
        .map(|m| matrix_to_element(spec, &m))
        .collect()
}

/// Number of `d`-tuples from `set` that generate, in parallel over the first
/// coordinate.
fn count_generating<K: Kernel>(k: &K, set: &[K::Vector], d: usize) -> u64 {
    let full = k.dim();
    let n = set.len();
    if d == 0 {
        return (close(k, &[], true).basis.len() == full) as u64;
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0usize; d - 1];
            let mut tuple = vec![set[first].clone(); d];
            let mut count = 0u64;
            loop {
                for (j, &i) in idx.iter().enumerate() {
                    tuple[j + 1] = set[i].clone();
                }
                if close(k, &tuple, true).basis.len() == full {
                    count += 1;
                }
                let mut j = 0;
                loop {
                    if j == d - 1 {
                        return count;
                    }
                    idx[j] += 1;
                    if idx[j] < n {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        })
        .sum()
}

/// Exact count of generating `d`-tuples from an explicit set.
pub fn count_generating_tuples(spec: &AlgebraSpec, set: &[AlgElement], d: usize) -> u64 {
    let engine = Engine::new(spec);
    with_kernel!(&engine, k => {
        let vs: Vec<_> = set.iter().map(|x| k.from_coords(x)).collect();
        count_generating(k, &vs, d)
    })
}

fn tuple_count(set_len: u64, d: usize) -> Option<u64> {
    set_len.checked_pow(d as u32)
}

fn exhaustive(
    spec: &AlgebraSpec,
    cond: &Condition,
    d: usize,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    let set = target_set(spec, cond, cfg.exhaustive_threshold)?;
    if set.is_empty() {
        return Err(Error::invalid(format!(
            "no element satisfies {}",
            cond.label()
        )));
    }
    let total = tuple_count(set.len() as u64, d)
        .filter(|&t| t <= cfg.budget)
        .ok_or_else(|| {
            Error::too_large(format!(
                "{}^{d} tuples exceed the budget {}",
                set.len(),
                cfg.budget
            ))
        })?;
    let hits = count_generating_tuples(spec, &set, d);
    let v = Rational::new(BigInt::from(hits), BigInt::from(total));
    Ok(Estimate::exact(v, Method::Exhaustive, total, cfg, cond, d))
}

/// Generating tuples among `samples` Monte Carlo draws. Shard `i` reads
/// stream `(seed, tag, i)`, so the count does not depend on thread count.
pub fn mc_hits(
    spec: &AlgebraSpec,
    cond: &Condition,
    d: usize,
    samples: u64,
    seed: u64,
    tag: &str,
) -> Result<u64> {
    let engine = Engine::new(spec);
    let shards = samples.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|sh| {
            let mut s = RandomStream::for_shard(seed, tag, sh as u32);
            let n = SHARD_SIZE.min(samples - sh * SHARD_SIZE);
            let mut hits = 0u64;
            for _ in 0..n {
                let xs = (0..d)
                    .map(|_| sample_condition(spec, cond, &mut s).map(|dr| dr.value))
                    .collect::<Result<Vec<_>>>()?;
                if engine.generates(&xs) {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn monte_carlo(
    spec: &AlgebraSpec,
    cond: &Condition,
    d: usize,
    samples: u64,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one sample"));
    }
    let hits = mc_hits(
        spec,
        cond,
        d,
        samples,
        cfg.seed,
        &format!("P:{}", cond.label()),
    )?;
    Ok(Estimate {
        value: EstimateValue::Approx(hits as f64 / samples as f64),
        method: Method::MonteCarlo,
        samples,
        ci: wilson(hits, samples, cfg.level),
        level: cfg.level,
        seed: cfg.seed,
        condition: cond.label(),
        d,
    })
}

/// Probability that `d` uniform elements satisfying `cond` generate `A`.
pub fn estimate_conditional(
    spec: &AlgebraSpec,
    cond: &Condition,
    d: usize,
    mode: Mode,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    match mode {
        Mode::Exhaustive => exhaustive(spec, cond, d, cfg),
        Mode::MonteCarlo(n) => monte_carlo(spec, cond, d, n, cfg),
        Mode::Auto(n) => match exhaustive(spec, cond, d, cfg) {
            Err(Error::TooLarge { .. }) => monte_carlo(spec, cond, d, n, cfg),
            other => other,
        },
    }
}

/// `P(A, d)`.
pub fn estimate_p(
    spec: &AlgebraSpec,
    d: usize,
    mode: Mode,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    estimate_conditional(spec, &Condition::None, d, mode, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product, simple_algebra};
    use crate::counting::exact_p_small;
    use crate::scalar::rat;

    fn cfg() -> EstimatorConfig {
        EstimatorConfig::with_seed(1)
    }

    #[test]
    fn m22_exhaustive() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let e = estimate_p(&a, 2, Mode::Exhaustive, &cfg()).unwrap();
        assert_eq!(e.exact_value(), Some(&rat(3, 8)));
        assert_eq!(e.ci, (0.375, 0.375));
        assert_eq!(
            estimate_p(&a, 1, Mode::Exhaustive, &cfg())
                .unwrap()
                .exact_value(),
            Some(&rat(0, 1))
        );
    }

    #[test]
    fn field_d0_is_one() {
        let k = simple_algebra(1, 1, 2).unwrap();
        assert_eq!(
            estimate_p(&k, 0, Mode::Exhaustive, &cfg())
                .unwrap()
                .exact_value(),
            Some(&rat(1, 1))
        );
    }

    #[test]
    fn m23_matches_formula() {
        let a = simple_algebra(2, 1, 3).unwrap();
        let e = estimate_p(&a, 2, Mode::Exhaustive, &cfg()).unwrap();
        assert_eq!(e.exact_value(), Some(&exact_p_small(2, 1, 3).unwrap()));
    }

    #[test]
    fn nilpotent_pairs_in_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let e =
            estimate_conditional(&a, &Condition::Nilpotent, 2, Mode::Exhaustive, &cfg()).unwrap();
        assert_eq!(e.samples, 16);
        assert_eq!(e.exact_value(), Some(&rat(3, 8)));
    }

    #[test]
    fn subfield_charpoly_never_generates() {
        let a = simple_algebra(1, 2, 2).unwrap();
        let e = estimate_conditional(
            &a,
            &Condition::Charpoly(vec![1, 1]),
            2,
            Mode::Exhaustive,
            &cfg(),
        )
        .unwrap();
        assert_eq!(e.exact_value(), Some(&rat(0, 1)));
    }

    #[test]
    fn mc_is_reproducible_and_near() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let e1 = estimate_p(&a, 2, Mode::MonteCarlo(10_000), &cfg()).unwrap();
        let e2 = estimate_p(&a, 2, Mode::MonteCarlo(10_000), &cfg()).unwrap();
        assert_eq!(e1.value, e2.value);
        assert!((e1.to_f64() - 0.375).abs() < 4.0 * e1.stderr());
        assert!(e1.ci.0 < 0.375 && 0.375 < e1.ci.1);
    }

    #[test]
    fn auto_falls_back_to_mc() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let c = EstimatorConfig {
            budget: 10,
            ..cfg()
        };
        assert_eq!(
            estimate_p(&a, 2, Mode::Auto(100), &c).unwrap().method,
            Method::MonteCarlo
        );
        assert!(estimate_p(&a, 2, Mode::Exhaustive, &c).is_err());
        assert!(estimate_p(&a, 2, Mode::MonteCarlo(0), &c).is_err());
    }

    #[test]
    fn independent_factors_multiply() {
        let f4 = simple_algebra(1, 2, 2).unwrap();
        let a = product(&[f4.clone(), f4.clone()]).unwrap();
        let pa = estimate_p(&a, 1, Mode::Exhaustive, &cfg()).unwrap();
        // conjugate coordinates share a minimal polynomial, so one element never suffices
        assert_eq!(pa.exact_value(), Some(&rat(0, 1)));
        let pb = estimate_p(&a, 2, Mode::Exhaustive, &cfg()).unwrap();
        assert!(pb.exact_value().unwrap() > &rat(0, 1));
    }

    #[test]
    fn wilson_contains_point() {
        let (lo, hi) = wilson(30, 100, 0.95);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson(0, 10, 0.95).0, 0.0);
    }
}
