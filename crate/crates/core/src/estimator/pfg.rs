//! Expected generation time, `V_η`, and the polynomial-growth report.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::chain::{SubalgebraChain, CHAIN_BUDGET};
use super::{
    estimate_p, z_value, Estimate, EstimateValue, EstimatorConfig, Method, Mode, SHARD_SIZE,
};
use crate::algebra::{AlgElement, AlgebraSpec};
use crate::closure::{d_exact, Engine, DEFAULT_D_CAP};
use crate::error::{Error, Result};
use crate::maxsub::{enumerate_maximal, m_n_counts};
use crate::sampler::{uniform_element, Condition, RandomStream};
use crate::scalar::ratio_to_f64;
use crate::Rational;

/// Largest `d` tried when searching for `V_η`.
pub const V_DMAX: usize = 64;
/// Truncation target for the `E(A)` tail bound.
pub const E_TAIL: f64 = 1e-6;

/// One inequality instance `lhs ≤ rhs` (or `<` when `strict`).
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub spec: String,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub pass: bool,
    /// `rhs - lhs`.
    pub margin: f64,
    pub method: String,
    pub note: Option<String>,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        spec: &str,
        lhs: f64,
        rhs: f64,
        strict: bool,
        method: &str,
    ) -> Check {
        let pass = if strict { lhs < rhs } else { lhs <= rhs };
        Check {
            id: id.into(),
            spec: spec.to_string(),
            lhs,
            rhs,
            strict,
            pass,
            margin: rhs - lhs,
            method: method.to_string(),
            note: None,
        }
    }

    /// Decided in exact arithmetic; `lhs`/`rhs` are for display.
    pub fn exact(
        id: impl Into<String>,
        spec: &str,
        lhs: &Rational,
        rhs: &Rational,
        strict: bool,
    ) -> Check {
        let mut c = Check::new(
            id,
            spec,
            ratio_to_f64(lhs),
            ratio_to_f64(rhs),
            strict,
            "exact",
        );
        c.pass = if strict { lhs < rhs } else { lhs <= rhs };
        c
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Check {
        self.pass = pass;
        self
    }
}

/// Rational enclosure `[lo, hi]` of a threshold `η^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaInverse {
    pub lo: Rational,
    pub hi: Rational,
}

impl EtaInverse {
    pub fn from_eta(eta: &Rational) -> Result<EtaInverse> {
        if eta <= &Rational::zero() {
            return Err(Error::invalid("η must be positive"));
        }
        let v = eta.recip();
        Ok(EtaInverse {
            lo: v.clone(),
            hi: v,
        })
    }

    /// `1/e` between consecutive partial sums of `Σ (-1)^k / k!`.
    pub fn e() -> EtaInverse {
        let mut term = Rational::one();
        let mut sum = Rational::one();
        let mut prev = sum.clone();
        for k in 1..=40i64 {
            term = -term / Rational::from_integer(BigInt::from(k));
            prev = sum.clone();
            sum += &term;
        }
        let (lo, hi) = if sum < prev { (sum, prev) } else { (prev, sum) };
        EtaInverse { lo, hi }
    }
}

/// `V_η(A) = min{d ≥ 1 : P(A, d) > η^{-1}}`, with the `P(A, d)` that decided it.
pub fn v_eta(
    spec: &AlgebraSpec,
    eta_inv: &EtaInverse,
    mode: Mode,
    cfg: &EstimatorConfig,
) -> Result<(usize, Estimate)> {
    if eta_inv.lo >= Rational::one() {
        return Err(Error::Indeterminate(
            "P(A, d) never exceeds a threshold of at least 1".into(),
        ));
    }
    if !matches!(mode, Mode::MonteCarlo(_)) {
        match SubalgebraChain::build(spec, CHAIN_BUDGET) {
            Ok(chain) => {
                for (d, p) in chain.p_iter().enumerate().skip(1).take(V_DMAX) {
                    if p > eta_inv.hi {
                        return Ok((
                            d,
                            Estimate::exact(p, Method::Chain, 0, cfg, &Condition::None, d),
                        ));
                    }
                    if p > eta_inv.lo {
                        return Err(Error::Indeterminate(format!(
                            "P(A, {d}) = {p} lies inside the threshold enclosure"
                        )));
                    }
                }
                return Err(Error::Indeterminate(format!(
                    "no d ≤ {V_DMAX} exceeds the threshold"
                )));
            }
            Err(Error::TooLarge { .. }) if !matches!(mode, Mode::Exhaustive) => {}
            Err(e) => return Err(e),
        }
    }
    let start = match mode {
        Mode::MonteCarlo(n) | Mode::Auto(n) => n.max(1),
        Mode::Exhaustive => unreachable!(),
    };
    let (lo, hi) = (ratio_to_f64(&eta_inv.lo), ratio_to_f64(&eta_inv.hi));
    for d in 1..=V_DMAX {
        let mut n = start;
        loop {
            let est = estimate_p(spec, d, Mode::MonteCarlo(n), cfg)?;
            if est.ci.0 > hi {
                return Ok((d, est));
            }
            if est.ci.1 <= lo {
                break;
            }
            n = n.saturating_mul(4);
            if n > cfg.budget {
                return Err(Error::Indeterminate(format!(
                    "P(A, {d}) ≈ {} with interval [{}, {}] straddles the threshold at the sample budget",
                    est.to_f64(),
                    est.ci.0,
                    est.ci.1
                )));
            }
        }
    }
    Err(Error::Indeterminate(format!(
        "no d ≤ {V_DMAX} exceeds the threshold"
    )))
}

/// `Σ_{d ≥ D} Σ_n m_n n^{-d}`, the tail bound on `Σ_{d ≥ D} (1 - P(A, d))`.
fn tail_bound(counts: &[(f64, f64)], big_d: u32) -> f64 {
    counts
        .iter()
        .map(|&(n, m)| m * n.powi(-(big_d as i32)) / (1.0 - 1.0 / n))
        .sum()
}

/// `E(A) = Σ_{d ≥ 0} (1 - P(A, d))`, exact from the subalgebra chain when it
/// fits, otherwise by simulating the generation time capped at `D`, with
/// the tail beyond `D` bounded by the maximal-subalgebra counts.
pub fn estimate_e(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Estimate> {
    match SubalgebraChain::build(spec, CHAIN_BUDGET) {
        Ok(chain) => {
            return Ok(Estimate::exact(
                chain.expected_time(),
                Method::Chain,
                0,
                cfg,
                &Condition::None,
                0,
            ))
        }
        Err(Error::TooLarge { .. }) => {}
        Err(e) => return Err(e),
    }
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one sample"));
    }
    let counts: Vec<(f64, f64)> = m_n_counts(spec)?
        .iter()
        .map(|(n, m)| {
            (
                n.to_f64().unwrap_or(f64::INFINITY),
                m.to_f64().unwrap_or(f64::INFINITY),
            )
        })
        .collect();
    let cap = (1..=4096u32)
        .find(|&d| tail_bound(&counts, d) < E_TAIL)
        .ok_or_else(|| Error::invalid("no truncation point brings the tail bound below 1e-6"))?;
    let tail = tail_bound(&counts, cap);
    let engine = Engine::new(spec);
    let shards = samples.div_ceil(SHARD_SIZE);
    let (sum, sum_sq) = (0..shards)
        .into_par_iter()
        .map(|sh| {
            let mut s = RandomStream::for_shard(cfg.seed, "E", sh as u32);
            let n = SHARD_SIZE.min(samples - sh * SHARD_SIZE);
            let (mut a, mut b) = (0u64, 0u64);
            for _ in 0..n {
                let t = capped_time(spec, &engine, cap as u64, &mut s);
                a += t;
                b += t * t;
            }
            (a, b)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let nf = samples as f64;
    let mean = sum as f64 / nf;
    let var = (sum_sq as f64 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    let half = z_value(cfg.level) * (var / nf).sqrt();
    Ok(Estimate {
        value: EstimateValue::Approx(mean),
        method: Method::MonteCarlo,
        samples,
        ci: ((mean - half).max(0.0), mean + half + tail),
        level: cfg.level,
        seed: cfg.seed,
        condition: Condition::None.label(),
        d: cap as usize,
    })
}

/// `min(τ_A, cap)` for one run of uniform draws.
fn capped_time(spec: &AlgebraSpec, engine: &Engine, cap: u64, s: &mut RandomStream) -> u64 {
    let mut basis: Vec<AlgElement> = engine.generated_subalgebra(&[]).basis;
    let full = spec.dim();
    let mut t = 0;
    while basis.len() < full && t < cap {
        basis.push(uniform_element(spec, s));
        basis = engine.generated_subalgebra(&basis).basis;
        t += 1;
    }
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct PfgReport {
    pub spec: String,
    /// `(n, m_n)` as decimal strings.
    pub m_n: Vec<(String, String)>,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "V")]
    pub v: Option<usize>,
    #[serde(rename = "E")]
    pub e: Option<Estimate>,
    pub d: Option<usize>,
    pub r: usize,
    pub checks: Vec<Check>,
    /// Quantities that could not be computed, with the reason.
    pub flags: Vec<String>,
}

/// Snaps floating values within rounding of an integer, so that ceilings
/// of exact integers are not pushed up by one.
fn snap(x: f64) -> f64 {
    if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x
    }
}

/// `M(A) = max_{n>1} log m_n / log n`; zero when there are no maximal
/// subalgebras.
pub fn growth_degree(table: &[(f64, f64)]) -> f64 {
    snap(
        table
            .iter()
            .filter(|(n, _)| *n > 1.0)
            .map(|(n, m)| m.ln() / n.ln())
            .fold(0.0, f64::max),
    )
}

pub fn pfg_report(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<PfgReport> {
    let label = spec.label().to_string();
    let table = m_n_counts(spec)?;
    let numeric: Vec<(f64, f64)> = table
        .iter()
        .map(|(n, m)| {
            (
                n.to_f64().unwrap_or(f64::INFINITY),
                m.to_f64().unwrap_or(f64::INFINITY),
            )
        })
        .collect();
    let big_m = growth_degree(&numeric);
    let r = spec.require_decomposition()?.r();
    let q = spec.q() as f64;
    let mut flags = Vec::new();
    let mut checks = Vec::new();

    let d = match d_exact(spec, DEFAULT_D_CAP) {
        Ok(d) => Some(d),
        Err(e) => {
            flags.push(format!("d: {e}"));
            None
        }
    };
    let v = match v_eta(spec, &EtaInverse::e(), Mode::Auto(samples), cfg) {
        Ok((v, _)) => Some(v),
        Err(e) => {
            flags.push(format!("V: {e}"));
            None
        }
    };
    let e = match estimate_e(spec, samples, cfg) {
        Ok(e) => Some(e),
        Err(err) => {
            flags.push(format!("E: {err}"));
            None
        }
    };

    if let Some(d) = d {
        let rhs = 2.0 * (r as f64).ln() / q.ln() + d as f64 + 2.0;
        checks.push(Check::new("PSAA(i)", &label, big_m, rhs, false, "exact"));
    }
    if let Some(v) = v {
        let v = v as f64;
        checks.push(Check::new(
            "PSAA(ii).lower",
            &label,
            (big_m - 5.24).ceil(),
            v,
            false,
            "exact",
        ));
        checks.push(Check::new(
            "PSAA(ii).upper",
            &label,
            v,
            (big_m + 2.02).ceil(),
            false,
            "exact",
        ));
    }
    if let Some(e) = &e {
        let method = if e.method.is_exact() {
            "exact"
        } else {
            "montecarlo"
        };
        checks.push(Check::new(
            "PSAA(iii).lower",
            &label,
            (big_m - 5.80).ceil(),
            e.ci.0,
            false,
            method,
        ));
        checks.push(Check::new(
            "PSAA(iii).upper",
            &label,
            e.ci.1,
            big_m.ceil() + 3.0,
            false,
            method,
        ));
    }
    if let Some(d) = d {
        let rf = r as f64;
        for &(n, m) in &numeric {
            let rhs = n * (6.93 * rf + rf * (rf - 1.0) / 2.0 + rf * rf * n.powi(d as i32));
            checks.push(Check::new(
                format!("mn(n={n})"),
                &label,
                m,
                rhs,
                false,
                "exact",
            ));
        }
    }
    match core_checks(spec, &label) {
        Ok(cs) => checks.extend(cs),
        Err(e) => flags.push(format!("cores: {e}")),
    }

    Ok(PfgReport {
        spec: label,
        m_n: table
            .iter()
            .map(|(n, m)| (n.to_string(), m.to_string()))
            .collect(),
        big_m,
        v,
        e,
        d,
        r,
        checks,
        flags,
    })
}

/// Trivial-core counts per index and the index factorisation for pairs of
/// maximal subalgebras with distinct cores, on the enumerated list.
fn core_checks(spec: &AlgebraSpec, label: &str) -> Result<Vec<Check>> {
    let all = enumerate_maximal(spec)?;
    let dim = spec.dim();
    let q = spec.q() as f64;
    let cores = all
        .iter()
        .map(|(_, s)| spec.core(s.basis()))
        .collect::<Result<Vec<_>>>()?;
    let mut trivial: std::collections::BTreeMap<usize, u64> = Default::default();
    for ((_, s), c) in all.iter().zip(&cores) {
        trivial.entry(dim - s.dim()).or_default();
        if c.dim() == 0 {
            *trivial.get_mut(&(dim - s.dim())).expect("entry") += 1;
        }
    }
    let mut out: Vec<Check> = trivial
        .into_iter()
        .map(|(codim, count)| {
            let n = q.powi(codim as i32);
            Check::new(
                format!("trivialcore(n={n})"),
                label,
                count as f64,
                6.93 * n,
                false,
                "exact",
            )
        })
        .collect();
    let mut pairs = 0u64;
    let mut bad = 0u64;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if cores[i] == cores[j] {
                continue;
            }
            pairs += 1;
            let (a, b) = (&all[i].1, &all[j].1);
            if dim - a.intersect(b).dim() != (dim - a.dim()) + (dim - b.dim()) {
                bad += 1;
            }
        }
    }
    out.push(
        Check::new("probindep", label, bad as f64, 0.0, false, "exact")
            .with_note(format!("{pairs} pairs with distinct cores")),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product, simple_algebra};
    use crate::scalar::rat;

    #[test]
    fn e_enclosure_brackets() {
        let e = EtaInverse::e();
        assert!(ratio_to_f64(&e.lo) <= (-1f64).exp() && (-1f64).exp() <= ratio_to_f64(&e.hi));
        assert!(e.lo < e.hi);
    }

    #[test]
    fn v_of_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let cfg = EstimatorConfig::default();
        assert_eq!(
            v_eta(&a, &EtaInverse::e(), Mode::Auto(1000), &cfg)
                .unwrap()
                .0,
            2
        );
        let strict = EtaInverse::from_eta(&rat(8, 3)).unwrap();
        assert_eq!(v_eta(&a, &strict, Mode::Auto(1000), &cfg).unwrap().0, 3);
        let one = EtaInverse::from_eta(&rat(1, 1)).unwrap();
        assert!(matches!(
            v_eta(&a, &one, Mode::Auto(1000), &cfg),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn v_by_monte_carlo() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let cfg = EstimatorConfig::with_seed(3);
        assert_eq!(
            v_eta(&a, &EtaInverse::e(), Mode::MonteCarlo(2000), &cfg)
                .unwrap()
                .0,
            2
        );
    }

    #[test]
    fn e_values() {
        let cfg = EstimatorConfig::default();
        let k = simple_algebra(1, 1, 2).unwrap();
        assert_eq!(
            estimate_e(&k, 10, &cfg).unwrap().exact_value(),
            Some(&rat(0, 1))
        );
        let f4 = simple_algebra(1, 2, 2).unwrap();
        assert_eq!(
            estimate_e(&f4, 10, &cfg).unwrap().exact_value(),
            Some(&rat(2, 1))
        );
    }

    #[test]
    fn report_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let rep = pfg_report(&a, 1000, &EstimatorConfig::default()).unwrap();
        assert!((rep.big_m - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
        assert_eq!(rep.d, Some(2));
        assert_eq!(rep.v, Some(2));
        assert!(rep.flags.is_empty(), "{:?}", rep.flags);
        assert!(rep.checks.iter().all(|c| c.pass), "{:?}", rep.checks);
    }

    #[test]
    fn report_k2() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let a = product(&[k.clone(), k]).unwrap();
        let rep = pfg_report(&a, 1000, &EstimatorConfig::default()).unwrap();
        assert_eq!(rep.m_n, vec![("2".to_string(), "1".to_string())]);
        assert!(rep.checks.iter().all(|c| c.pass), "{:?}", rep.checks);
    }
}
