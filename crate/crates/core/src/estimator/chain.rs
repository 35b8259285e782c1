//! The subalgebra chain: drawing uniform elements one at a time, the
//! subalgebra generated so far is a Markov chain on subalgebras. From state
//! `B`, a uniform `x` moves to `⟨B, x⟩`, which depends only on the coset
//! `x + B`. This gives `P(A, d)` for every `d` and `E(A)` exactly.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{AlgElement, AlgebraSpec};
use crate::closure::Engine;
use crate::error::{Error, Result};
use crate::linalg::{combine, Subspace};
use crate::Rational;

/// Default bound on total coset representatives examined.
pub const CHAIN_BUDGET: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct SubalgebraChain {
    pub states: Vec<Subspace>,
    /// `(target, number of cosets)` per state; the self loop is included.
    pub transitions: Vec<Vec<(usize, u64)>>,
    /// Number of cosets `|A/B|` per state.
    pub cosets: Vec<u64>,
    pub start: usize,
    pub full: usize,
}

impl SubalgebraChain {
    pub fn build(spec: &AlgebraSpec, budget: u64) -> Result<SubalgebraChain> {
        let engine = Engine::new(spec);
        let field = spec.field().clone();
        let dim = spec.dim();
        let q = spec.q();
        let to_space = |basis: &[AlgElement]| Subspace::span(field.clone(), dim, basis);
        let start = to_space(&engine.generated_subalgebra(&[]).basis);
        let mut index: HashMap<Subspace, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        let mut transitions = Vec::new();
        let mut cosets = Vec::new();
        index.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut spent = 0u64;
        while let Some(i) = queue.pop_front() {
            let b = states[i].clone();
            let comp = b.complement();
            let count = q
                .checked_pow(comp.len() as u32)
                .ok_or_else(|| Error::too_large("cosets of a subalgebra"))?;
            spent += count;
            if spent > budget {
                return Err(Error::too_large(format!(
                    "subalgebra chain exceeds {budget} coset steps"
                )));
            }
            let mut out: HashMap<usize, u64> = HashMap::new();
            for code in 0..count {
                let mut rest = code;
                let coeffs = comp.iter().map(|v| {
                    let c = (rest % q) as u32;
                    rest /= q;
                    (c, v.clone())
                });
                let x = combine(&field, dim, coeffs);
                let target = if code == 0 {
                    i
                } else {
                    let mut seeds = b.basis().to_vec();
                    seeds.push(x);
                    let s = to_space(&engine.generated_subalgebra(&seeds).basis);
                    match index.get(&s) {
                        Some(&j) => j,
                        None => {
                            let j = states.len();
                            states.push(s.clone());
                            index.insert(s, j);
                            queue.push_back(j);
                            j
                        }
                    }
                };
                *out.entry(target).or_default() += 1;
            }
            let mut out: Vec<(usize, u64)> = out.into_iter().collect();
            out.sort_unstable();
            while transitions.len() <= i {
                transitions.push(Vec::new());
                cosets.push(0);
            }
            transitions[i] = out;
            cosets[i] = count;
        }
        let full = states
            .iter()
            .position(|s| s.dim() == dim)
            .ok_or_else(|| Error::invalid("chain never reaches the whole algebra"))?;
        Ok(SubalgebraChain {
            states,
            transitions,
            cosets,
            start: 0,
            full,
        })
    }

    fn step(&self, dist: &[Rational]) -> Vec<Rational> {
        let mut next = vec![Rational::zero(); dist.len()];
        for (i, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let den = BigInt::from(self.cosets[i]);
            for &(j, c) in &self.transitions[i] {
                next[j] += p * Rational::new(BigInt::from(c), den.clone());
            }
        }
        next
    }

    /// `P(A, d)` for `d = 0, 1, ..., dmax`.
    pub fn p_upto(&self, dmax: usize) -> Vec<Rational> {
        let mut dist = vec![Rational::zero(); self.states.len()];
        dist[self.start] = Rational::one();
        let mut out = vec![dist[self.full].clone()];
        for _ in 0..dmax {
            dist = self.step(&dist);
            out.push(dist[self.full].clone());
        }
        out
    }

    pub fn p(&self, d: usize) -> Rational {
        self.p_upto(d).pop().expect("nonempty")
    }

    /// Iterator over `P(A, 0), P(A, 1), ...`.
    pub fn p_iter(&self) -> impl Iterator<Item = Rational> + '_ {
        let mut dist = vec![Rational::zero(); self.states.len()];
        dist[self.start] = Rational::one();
        let mut first = true;
        std::iter::from_fn(move || {
            if !first {
                dist = self.step(&dist);
            }
            first = false;
            Some(dist[self.full].clone())
        })
    }

    /// `E(A)`: expected number of uniform draws until the whole algebra is
    /// generated, by first-step analysis from the top down.
    pub fn expected_time(&self) -> Rational {
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.states[i].dim()));
        let mut h = vec![Rational::zero(); self.states.len()];
        for i in order {
            if i == self.full {
                continue;
            }
            let n = self.cosets[i];
            let mut stay = 0u64;
            let mut acc = Rational::from_integer(BigInt::from(n));
            for &(j, c) in &self.transitions[i] {
                if j == i {
                    stay = c;
                } else {
                    acc += &h[j] * Rational::from_integer(BigInt::from(c));
                }
            }
            h[i] = acc / Rational::from_integer(BigInt::from(n - stay));
        }
        h[self.start].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product, simple_algebra};
    use crate::scalar::rat;

    #[test]
    fn m22_probabilities() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let c = SubalgebraChain::build(&a, CHAIN_BUDGET).unwrap();
        let p = c.p_upto(2);
        assert_eq!(p, vec![rat(0, 1), rat(0, 1), rat(3, 8)]);
    }

    #[test]
    fn field_expected_time() {
        let f4 = simple_algebra(1, 2, 2).unwrap();
        let c = SubalgebraChain::build(&f4, CHAIN_BUDGET).unwrap();
        assert_eq!(c.expected_time(), rat(2, 1));
        let k = simple_algebra(1, 1, 2).unwrap();
        assert_eq!(
            SubalgebraChain::build(&k, CHAIN_BUDGET)
                .unwrap()
                .expected_time(),
            rat(0, 1)
        );
    }

    #[test]
    fn expected_time_is_tail_sum() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let a = product(&[k.clone(), k.clone(), k]).unwrap();
        let c = SubalgebraChain::build(&a, CHAIN_BUDGET).unwrap();
        let tail: Rational = c.p_iter().take(80).map(|p| Rational::one() - p).sum();
        let e = c.expected_time();
        assert!(e >= tail && &e - &tail < rat(1, 1_000_000));
    }
}
