use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use fqalg::algebra::AlgebraSpec;
use fqalg::closure::{d_exact, generated_subalgebra};
use fqalg::counting::{big_pow, count_charpoly, count_rank, count_units, f_uv, zeta_general};
use fqalg::estimator::{mc_hits, wilson, SubalgebraChain, CHAIN_BUDGET};
use fqalg::gfield::FieldTower;
use fqalg::linalg::{FqMatrix, Subspace};
use fqalg::maxsub::{bonferroni, enumerate_maximal, m_n_counts};
use fqalg::parse::parse_spec;
use fqalg::sampler::{
    uniform_charpoly, uniform_element, uniform_nilpotent, uniform_rank, Condition, RandomStream,
};
use fqalg::Rational;

fn spec(text: &str) -> AlgebraSpec {
    parse_spec(text).expect("valid spec")
}

const SMALL: [&str; 8] = [
    "M(2,1,2)",
    "M(2,1,3)",
    "GF(2,4)",
    "GF(3,2)",
    "prod(GF(2,2),GF(2,2))",
    "prod(GF(2,1),GF(2,1),GF(2,1))",
    "T(2,3)",
    "P(1,1;1,2)",
];

fn field_shape() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![
        (2u64, 1u32),
        (2, 3),
        (3, 2),
        (4, 2),
        (5, 1),
        (8, 2),
        (9, 1),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((q, m) in field_shape(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let tower = FieldTower::for_q(q, m).unwrap();
        let k = tower.top_field();
        let (a, b, c) = (a % k.order(), b % k.order(), c % k.order());
        prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(k.mul(a, k.inv(a)), 1);
        }
        // Frobenius is a ring map of order m
        prop_assert_eq!(tower.frobenius_code(k.mul(a, b), 1), k.mul(tower.frobenius_code(a, 1), tower.frobenius_code(b, 1)));
        prop_assert_eq!(tower.frobenius_code(k.add(a, b), 1), k.add(tower.frobenius_code(a, 1), tower.frobenius_code(b, 1)));
        prop_assert_eq!(tower.frobenius_code(a, m as i64), a);
    }

    #[test]
    fn matrix_identities(t in prop::sample::select(vec![2u64, 3, 4, 5]), n in 1usize..5, seed in any::<u64>()) {
        let k = FieldTower::for_q(t, 1).unwrap().top_field().clone();
        let mut s = RandomStream::for_shard(seed, "matrix", 0);
        let a = fqalg::sampler::uniform_matrix(&k, n, n, &mut s);
        let b = fqalg::sampler::uniform_matrix(&k, n, n, &mut s);
        prop_assert_eq!(a.rank(), a.transpose().rank());
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        // Cayley-Hamilton
        prop_assert!(a.eval_poly(&a.charpoly()).is_zero());
        prop_assert_eq!(a.is_unit(), a.rank() == n);
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv).unwrap(), FqMatrix::identity(k.clone(), n));
        }
    }

    #[test]
    fn subspace_dimension_formula(seed in any::<u64>(), r in 0usize..5, s_ in 0usize..5) {
        let k = FieldTower::for_q(3, 1).unwrap().top_field().clone();
        let mut st = RandomStream::for_shard(seed, "subspace", 0);
        let u = fqalg::sampler::uniform_matrix(&k, r.max(1), 5, &mut st);
        let v = fqalg::sampler::uniform_matrix(&k, s_.max(1), 5, &mut st);
        let rows = |m: &FqMatrix, c: usize| (0..c).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
        let u = Subspace::span(k.clone(), 5, &rows(&u, r));
        let v = Subspace::span(k.clone(), 5, &rows(&v, s_));
        prop_assert_eq!(u.sum(&v).dim() + u.intersect(&v).dim(), u.dim() + v.dim());
        prop_assert!(u.sum(&v).contains_space(&u));
        prop_assert!(u.contains_space(&u.intersect(&v)));
    }

    #[test]
    fn closure_is_a_subalgebra(i in 0usize..SMALL.len(), seed in any::<u64>(), d in 0usize..3) {
        let a = spec(SMALL[i]);
        let mut s = RandomStream::for_shard(seed, "closure", 0);
        let gens: Vec<_> = (0..d).map(|_| uniform_element(&a, &mut s)).collect();
        let c = generated_subalgebra(&a, &gens);
        let sub = Subspace::span(a.field().clone(), a.dim(), &c.basis);
        prop_assert_eq!(sub.dim(), c.dim);
        prop_assert!(sub.contains(a.one()));
        for g in &gens {
            prop_assert!(sub.contains(g));
        }
        for x in &c.basis {
            for y in &c.basis {
                prop_assert!(sub.contains(&a.mul(x, y)));
            }
        }
        prop_assert_eq!(generated_subalgebra(&a, &c.basis).dim, c.dim);
        prop_assert_eq!(c.generates, c.dim == a.dim());
    }

    #[test]
    fn sampler_postconditions(seed in any::<u64>(), t in prop::sample::select(vec![2u64, 3, 4]), n in 1usize..4) {
        let mut s = RandomStream::for_shard(seed, "post", 0);
        for alpha in 0..=n {
            prop_assert_eq!(uniform_rank(n, t, alpha, &mut s).unwrap().value.rank(), alpha);
        }
        let a = spec(&format!("M({n},1,{t})"));
        let x = uniform_nilpotent(&a, &mut s).unwrap().value;
        prop_assert!(a.is_nilpotent(&x));
        // X^2 + X + 1 is irreducible over F_2 and F_4 is handled through F_q codes
        if t == 2 {
            let m = uniform_charpoly(2, 1, 2, &[1, 1, 1], &mut s).unwrap().value;
            prop_assert_eq!(m.charpoly(), vec![1, 1, 1]);
        }
    }

    #[test]
    fn wilson_interval_is_ordered(n in 1u64..100_000, frac in 0.0f64..=1.0, level in 0.5f64..0.999) {
        let k = ((n as f64) * frac) as u64;
        let (lo, hi) = wilson(k, n, level);
        let p = k as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
        let (lo2, hi2) = wilson(k, n, (level + 1.0) / 2.0);
        prop_assert!(lo2 <= lo + 1e-12 && hi <= hi2 + 1e-12);
    }

    #[test]
    fn monte_carlo_is_reproducible(seed in any::<u64>()) {
        let a = spec("M(2,1,2)");
        let x = mc_hits(&a, &Condition::None, 2, 5000, seed, "P:none").unwrap();
        let y = mc_hits(&a, &Condition::None, 2, 5000, seed, "P:none").unwrap();
        prop_assert_eq!(x, y);
    }
}

#[test]
fn counts_partition_the_matrix_algebra() {
    for t in [2u64, 3, 4, 5, 7] {
        for n in 1..=4u64 {
            let total: Rational = (0..=n).map(|a| count_rank(n, t, a).unwrap().value).sum();
            assert_eq!(
                total,
                Rational::from_integer(BigInt::from(big_pow(t, n * n)))
            );
            let units =
                Rational::from_integer(BigInt::from(count_units(n, 1, t).as_integer().unwrap()));
            let f: Rational = f_uv(t, n as u32);
            assert_eq!(
                units,
                f * Rational::from_integer(BigInt::from(big_pow(t, n * n)))
            );
        }
    }
    for t in [2u64, 3] {
        for n in 1..=3usize {
            let mut total = BigUint::zero();
            let mut coeffs = vec![0u32; n];
            loop {
                let mut f = coeffs.clone();
                f.push(1);
                total += count_charpoly(t, &f).unwrap().as_integer().unwrap();
                let Some(i) = coeffs.iter().position(|&c| c + 1 < t as u32) else {
                    break;
                };
                coeffs[i] += 1;
                coeffs[..i].iter_mut().for_each(|c| *c = 0);
            }
            assert_eq!(total, big_pow(t, (n * n) as u64), "t={t} n={n}");
        }
    }
}

#[test]
fn zeta_decreases_in_epsilon() {
    let eps = [
        Rational::new(1.into(), 4.into()),
        Rational::new(1.into(), 2.into()),
        Rational::one(),
        Rational::from_integer(2.into()),
    ];
    for text in [
        "M(2,1,2)",
        "M(3,1,2)",
        "M(2,2,3)",
        "GF(2,6)",
        "prod(M(2,1,2),GF(2,2))",
    ] {
        let a = spec(text);
        let z: Vec<_> = eps
            .iter()
            .map(|e| zeta_general(&a, e).unwrap().total)
            .collect();
        for w in z.windows(2) {
            assert!(w[1].hi <= w[0].lo, "{text}");
        }
    }
}

#[test]
fn chain_probabilities_are_consistent() {
    for text in SMALL {
        let a = spec(text);
        let chain = SubalgebraChain::build(&a, CHAIN_BUDGET).unwrap();
        let ps = chain.p_upto(6);
        assert!(ps.windows(2).all(|w| w[0] <= w[1]), "{text}");
        let d = d_exact(&a, 6).unwrap();
        assert!(ps[d] > Rational::zero(), "{text}");
        if d > 0 {
            assert!(ps[d - 1].is_zero(), "{text}");
        }
        let table = m_n_counts(&a).unwrap();
        for (dd, p) in ps.iter().enumerate().skip(1) {
            // 1 - P(A, d) is at most the union bound over maximal subalgebras
            let union: Rational = table
                .iter()
                .map(|(n, m)| {
                    Rational::new(
                        BigInt::from(m.clone()),
                        BigInt::from(num_traits::pow(n.clone(), dd)),
                    )
                })
                .sum();
            assert!(Rational::one() - p <= union, "{text} d={dd}");
            if let Ok((lo, hi)) = bonferroni(&a, dd as u32) {
                assert!(
                    lo <= Rational::one() - p && Rational::one() - p <= hi,
                    "{text} d={dd}"
                );
            }
        }
    }
}

#[test]
fn maximal_subalgebras_in_distinct_factors_are_independent() {
    for (text, split) in [
        ("prod(GF(2,2),GF(2,3))", 2usize),
        ("prod(M(2,1,2),GF(2,2))", 4),
    ] {
        let a = spec(text);
        let k = a.field().clone();
        let unit = |i: usize| {
            let mut v = vec![0u32; a.dim()];
            v[i] = 1;
            v
        };
        let first = Subspace::span(
            k.clone(),
            a.dim(),
            &(0..split).map(unit).collect::<Vec<_>>(),
        );
        let second = Subspace::span(
            k.clone(),
            a.dim(),
            &(split..a.dim()).map(unit).collect::<Vec<_>>(),
        );
        let all = enumerate_maximal(&a).unwrap();
        let in_first: Vec<_> = all
            .iter()
            .filter(|(_, s)| s.contains_space(&second))
            .map(|(_, s)| s)
            .collect();
        let in_second: Vec<_> = all
            .iter()
            .filter(|(_, s)| s.contains_space(&first))
            .map(|(_, s)| s)
            .collect();
        assert!(!in_first.is_empty() && !in_second.is_empty(), "{text}");
        for b1 in &in_first {
            for b2 in &in_second {
                assert_eq!(
                    b1.intersect(b2).dim() + a.dim(),
                    b1.dim() + b2.dim(),
                    "{text}"
                );
            }
        }
    }
}
