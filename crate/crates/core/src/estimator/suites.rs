//! Named inequality suites evaluated over grids of algebras.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::chain::{SubalgebraChain, CHAIN_BUDGET};
use super::pfg::Check;
use super::{estimate_conditional, Estimate, EstimatorConfig, Method, Mode};
use crate::algebra::AlgebraSpec;
use crate::closure::{d_exact, DEFAULT_D_CAP};
use crate::counting::{big_pow, count_rank, omega, phi_half, power_enclosure, zeta_general};
use crate::error::{Error, Result};
use crate::gfield::prime_divisors;
use crate::linalg::Subspace;
use crate::maxsub::{bonferroni, kappa, m_min};
use crate::sampler::Condition;
use crate::scalar::{rat, ratio_to_f64};
use crate::Rational;

pub const SUITES: [&str; 7] = [
    "minP",
    "second",
    "secondnil",
    "estimateprob",
    "rank_i",
    "ranklemma",
    "mind",
];

/// Grid each suite runs on when none is given.
pub fn default_grid(name: &str) -> Result<Vec<&'static str>> {
    Ok(match name {
        "minP" => vec![
            "M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "GF(2,1)", "GF(2,2)", "GF(2,3)", "GF(2,4)",
            "GF(2,5)", "GF(2,6)",
        ],
        "second" => vec!["M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "M(2,2,2)", "M(4,1,2)"],
        "secondnil" => vec!["M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "M(2,2,2)"],
        "estimateprob" => vec!["M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "M(2,2,2)"],
        "rank_i" => vec![
            "M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "M(3,1,3)", "M(4,1,2)", "M(4,1,3)",
        ],
        "ranklemma" => vec!["M(2,1,2)", "M(2,1,3)", "M(3,1,2)", "M(2,2,2)"],
        "mind" => vec![
            "M(2,1,2)",
            "M(2,1,3)",
            "M(3,1,2)",
            "GF(2,2)",
            "prod(GF(2,2),GF(2,2))",
            "prod(GF(2,1),GF(2,1),GF(2,1))",
            "prod(GF(2,1),GF(2,1),GF(2,1),GF(2,1),GF(2,1))",
            "prod(GF(2,3),GF(2,3))",
            "prod(M(2,1,2),M(2,1,2))",
            "prod(M(2,1,2),GF(2,2))",
            "T(2,2)",
            "T(2,3)",
            "T(2,4)",
            "T(3,3)",
            "P(1,1;1,2)",
            "P(1,2;1,2)",
            "P(1,1,1;1,2)",
            "P(1,1;1,3)",
            "P(1,1;2,2)",
        ],
        _ => {
            return Err(Error::invalid(format!(
                "unknown suite {name}; expected one of {SUITES:?}"
            )))
        }
    })
}

/// Exact when the subalgebra chain or exhaustive enumeration fits,
/// otherwise Monte Carlo.
pub fn best_estimate(
    spec: &AlgebraSpec,
    cond: &Condition,
    d: usize,
    samples: u64,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    if *cond == Condition::None {
        match SubalgebraChain::build(spec, CHAIN_BUDGET) {
            Ok(c) => return Ok(Estimate::exact(c.p(d), Method::Chain, 0, cfg, cond, d)),
            Err(Error::TooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    estimate_conditional(spec, cond, d, Mode::Auto(samples), cfg)
}

/// `1 - P ≤ rhs` (or `<`), using the Wilson lower edge of `P` when inexact.
fn complement_check(id: &str, label: &str, est: &Estimate, rhs: &Rational, strict: bool) -> Check {
    match est.exact_value() {
        Some(p) => Check::exact(id, label, &(Rational::one() - p), rhs, strict),
        None => Check::new(
            id,
            label,
            1.0 - est.ci.0,
            ratio_to_f64(rhs),
            strict,
            "montecarlo",
        ),
    }
}

/// `rhs ≤ P`, using the Wilson lower edge of `P` when inexact.
fn lower_check(id: &str, label: &str, lower: &Rational, est: &Estimate) -> Check {
    match est.exact_value() {
        Some(p) => Check::exact(id, label, lower, p, false),
        None => Check::new(
            id,
            label,
            ratio_to_f64(lower),
            est.ci.0,
            false,
            "montecarlo",
        ),
    }
}

/// `(n, m)` of a simple algebra.
fn simple_shape(spec: &AlgebraSpec) -> Result<(u64, u64)> {
    let dec = spec.require_decomposition()?;
    if dec.r() != 1 || !dec.is_semisimple() {
        return Err(Error::invalid(format!("{} is not simple", spec.label())));
    }
    let (n, m) = dec.shapes()[0];
    Ok((n as u64, m as u64))
}

fn recip_pow(t: u64, e: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(big_pow(t, e)))
}

/// Composition length of `J(A)` as an `S`-bimodule: each block
/// `e_a J e_b` is a sum of copies of the simple `M_{n_a}(q^{m_a}) ⊗
/// M_{n_b}(q^{m_b})^op`-module of dimension `n_a n_b lcm(m_a, m_b)`.
pub fn composition_length(spec: &AlgebraSpec) -> Result<u64> {
    let dec = spec.require_decomposition()?;
    let field = spec.field();
    let idems: Vec<_> = dec.factors.iter().map(|f| f.idempotent(field)).collect();
    let mut total = 0u64;
    for (fa, ea) in dec.factors.iter().zip(&idems) {
        for (fb, eb) in dec.factors.iter().zip(&idems) {
            let images: Vec<_> = dec
                .radical_basis
                .iter()
                .map(|j| spec.mul(&spec.mul(ea, j), eb))
                .collect();
            let dim = Subspace::span(field.clone(), spec.dim(), &images).dim() as u64;
            let simple = (fa.n * fb.n * fa.m.lcm(&fb.m)) as u64;
            if !dim.is_multiple_of(simple) {
                return Err(Error::invalid(
                    "radical block dimension is not a multiple of the simple module",
                ));
            }
            total += dim / simple;
        }
    }
    Ok(total)
}

/// `f(A) = max_i log_q(α_i m_i) / (m_i n_i^2)` over isomorphism types of
/// simple factors, `α_i` being the multiplicity.
pub fn mind_f(spec: &AlgebraSpec) -> Result<f64> {
    let dec = spec.require_decomposition()?;
    let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for s in dec.shapes() {
        *mult.entry(s).or_default() += 1;
    }
    let lq = (spec.q() as f64).ln();
    Ok(mult
        .iter()
        .map(|(&(n, m), &a)| ((a * m as u64) as f64).ln() / lq / (m * n * n) as f64)
        .fold(f64::NEG_INFINITY, f64::max))
}

fn is_m22(spec: &AlgebraSpec) -> bool {
    spec.q() == 2 && simple_shape(spec).ok() == Some((2, 1))
}

fn suite_min_p(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Vec<Check>> {
    let label = spec.label();
    let est = best_estimate(spec, &Condition::None, 2, samples, cfg)?;
    let bound = rat(3, 8);
    let mut c = lower_check("minP", label, &bound, &est);
    if let Some(p) = est.exact_value() {
        c = c.with_pass(p >= &bound && ((p == &bound) == is_m22(spec)));
    }
    Ok(vec![c.with_note("equality exactly at M_2(2)")])
}

fn suite_second(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Vec<Check>> {
    let est = best_estimate(spec, &Condition::None, 2, samples, cfg)?;
    let zeta = zeta_general(spec, &Rational::one())?.total;
    let (_, phi_hi) = phi_half();
    Ok(vec![complement_check(
        "second",
        spec.label(),
        &est,
        &(zeta.lo / phi_hi),
        false,
    )])
}

fn suite_second_nil(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Vec<Check>> {
    let est = best_estimate(spec, &Condition::Nilpotent, 2, samples, cfg)?;
    let zeta = zeta_general(spec, &rat(1, 4))?.total;
    let (_, phi_hi) = phi_half();
    Ok(vec![complement_check(
        "secondnil",
        spec.label(),
        &est,
        &(zeta.lo / phi_hi),
        true,
    )])
}

fn suite_estimate_prob(
    spec: &AlgebraSpec,
    samples: u64,
    cfg: &EstimatorConfig,
) -> Result<Vec<Check>> {
    let label = spec.label();
    let est = best_estimate(spec, &Condition::None, 2, samples, cfg)?;
    let p = est
        .exact_value()
        .cloned()
        .ok_or_else(|| Error::too_large("the bracket needs an exact P(A)"))?;
    let (lo, hi) = bonferroni(spec, 2)?;
    let miss = Rational::one() - &p;
    let k = kappa(spec)?;
    let m = Rational::from_integer(BigInt::from(m_min(spec)?.index));
    let ratio = ratio_to_f64(&(&miss - &k / &m)).abs() / ratio_to_f64(&m).powf(-4.0 / 3.0);
    Ok(vec![
        Check::exact("estimateprob.lower", label, &lo, &miss, false),
        Check::exact("estimateprob.upper", label, &miss, &hi, false),
        Check::new(
            "estimateprob.ratio",
            label,
            ratio,
            f64::INFINITY,
            false,
            "report",
        )
        .with_note("|1 - P - κ/m| / m^(-4/3), reported only"),
    ])
}

fn suite_rank_i(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Vec<Check>> {
    let label = spec.label();
    let (n, m) = simple_shape(spec)?;
    if n < 2 {
        return Err(Error::invalid("rank suite needs n ≥ 2"));
    }
    let q = spec.q();
    let t = q.pow(m as u32);
    let p = *prime_divisors(n).iter().min().expect("n ≥ 2");
    let tp = t.pow(p as u32);
    let mut out = Vec::new();
    for alpha in 1..=n / p {
        let a = count_rank(n, t, alpha)?.value;
        let b = count_rank(n / p, tp, alpha)?.value;
        let bound = recip_pow(t, p * alpha * alpha);
        out.push(Check::exact(
            format!("woot(α={alpha})"),
            label,
            &bound,
            &(b / &a),
            false,
        ));
        let small = spec.order().is_some_and(|o| o <= 1 << 12);
        let pairs = a.numer() * a.numer();
        if small && pairs <= BigInt::from(cfg.budget) {
            let est = estimate_conditional(
                spec,
                &Condition::Rank(alpha as usize),
                2,
                Mode::Auto(samples),
                cfg,
            )?;
            let rhs = Rational::one() - recip_pow(t, 2 * p * alpha * alpha);
            let c = match est.exact_value() {
                Some(v) => Check::exact(format!("rank_i(α={alpha})"), label, v, &rhs, false),
                None => Check::new(
                    format!("rank_i(α={alpha})"),
                    label,
                    est.ci.1,
                    ratio_to_f64(&rhs),
                    false,
                    "montecarlo",
                ),
            };
            out.push(c);
        }
    }
    Ok(out)
}

fn suite_rank_lemma(spec: &AlgebraSpec, samples: u64, cfg: &EstimatorConfig) -> Result<Vec<Check>> {
    let label = spec.label();
    let (n, m) = simple_shape(spec)?;
    let q = spec.q();
    let t = q.pow(m as u32);
    let total = Rational::from_integer(BigInt::from(big_pow(t, n * n)));
    let x_lo = power_enclosure(q, m * n, &rat(1, 4))?.lo;
    let c = Rational::from_integer(BigInt::from(2 * (2 * n - 2 + omega(m))));
    let mut out = Vec::new();
    for alpha in 1..=n {
        let frac = count_rank(n, t, alpha)?.value / &total;
        let pk = &frac * &frac;
        let rhs = Rational::one() - &c * &x_lo / &pk;
        let id = format!("ranklemma(α={alpha})");
        if rhs <= Rational::zero() {
            out.push(
                Check::exact(id, label, &rhs, &Rational::zero(), false)
                    .with_note("vacuous: bound is not positive"),
            );
            continue;
        }
        let est = estimate_conditional(
            spec,
            &Condition::Rank(alpha as usize),
            2,
            Mode::Auto(samples),
            cfg,
        )?;
        out.push(lower_check(&id, label, &rhs, &est));
    }
    Ok(out)
}

fn suite_mind(spec: &AlgebraSpec) -> Result<Vec<Check>> {
    let label = spec.label();
    let d = d_exact(spec, DEFAULT_D_CAP.max(spec.dim()))? as f64;
    let f = mind_f(spec)?;
    let mu = composition_length(spec)? as f64;
    let note = format!("d = {d}, f = {f:.4}, μ = {mu}");
    Ok(vec![
        Check::new("mind.lower", label, -2.33, d - f, true, "exact").with_note(note.clone()),
        Check::new("mind.upper", label, d - f, mu + 3.42, true, "exact").with_note(note),
    ])
}

/// Runs suite `name` on every spec; per-spec failures become flagged
/// checks rather than aborting the suite.
pub fn verify_suite(
    name: &str,
    grid: &[AlgebraSpec],
    samples: u64,
    cfg: &EstimatorConfig,
) -> Result<Vec<Check>> {
    default_grid(name)?;
    let mut out = Vec::new();
    for spec in grid {
        let res = match name {
            "minP" => suite_min_p(spec, samples, cfg),
            "second" => suite_second(spec, samples, cfg),
            "secondnil" => suite_second_nil(spec, samples, cfg),
            "estimateprob" => suite_estimate_prob(spec, samples, cfg),
            "rank_i" => suite_rank_i(spec, samples, cfg),
            "ranklemma" => suite_rank_lemma(spec, samples, cfg),
            "mind" => suite_mind(spec),
            _ => unreachable!(),
        };
        match res {
            Ok(cs) => out.extend(cs),
            Err(e) => out.push(
                Check::new(name, spec.label(), f64::NAN, f64::NAN, false, "error")
                    .with_pass(false)
                    .with_note(e.to_string()),
            ),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;

    fn run(name: &str, specs: &[&str]) -> Vec<Check> {
        let grid: Vec<AlgebraSpec> = specs.iter().map(|s| parse_spec(s).unwrap()).collect();
        verify_suite(name, &grid, 20_000, &EstimatorConfig::with_seed(7)).unwrap()
    }

    #[test]
    fn composition_lengths() {
        assert_eq!(
            composition_length(&parse_spec("T(2,3)").unwrap()).unwrap(),
            2
        );
        assert_eq!(
            composition_length(&parse_spec("P(1,1;1,2)").unwrap()).unwrap(),
            1
        );
        assert_eq!(
            composition_length(&parse_spec("P(1,2;1,2)").unwrap()).unwrap(),
            1
        );
        assert_eq!(
            composition_length(&parse_spec("P(1,1,1;1,2)").unwrap()).unwrap(),
            3
        );
        assert_eq!(
            composition_length(&parse_spec("M(2,1,2)").unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn f_of_field_square() {
        let a = parse_spec("prod(GF(2,2),GF(2,2))").unwrap();
        assert!((mind_f(&a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_p_on_m22_and_fields() {
        let cs = run("minP", &["M(2,1,2)", "GF(2,3)"]);
        assert!(cs.iter().all(|c| c.pass), "{cs:?}");
        assert_eq!(cs[0].rhs, 0.375);
    }

    #[test]
    fn second_on_m22() {
        let cs = run("second", &["M(2,1,2)"]);
        assert!(cs[0].pass);
        assert_eq!(cs[0].lhs, 0.625);
        assert!((cs[0].rhs - 2.597).abs() < 1e-3);
    }

    #[test]
    fn mind_on_field_square() {
        let cs = run("mind", &["prod(GF(2,2),GF(2,2))"]);
        assert!(cs.iter().all(|c| c.pass), "{cs:?}");
        assert_eq!(cs[1].lhs, 1.0);
        assert_eq!(cs[1].rhs, 3.42);
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(verify_suite("nope", &[], 1, &EstimatorConfig::default()).is_err());
    }
}
