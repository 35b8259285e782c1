//! Maximal ideals of `A` inside `J`, found as maximal sub-bimodules of
//! `V = J/J^2` over the semisimple part `S`.
//!
//! Maximal submodules of `V` are annihilators of minimal submodules of the
//! dual `V*`, and every minimal submodule is cyclic, so it suffices to close
//! each functional under the dual actions and keep the minimal results.

use std::collections::HashSet;

use crate::algebra::{AlgElement, AlgebraSpec};
use crate::error::{Error, Result};
use crate::gfield::Field;
use crate::linalg::{combine, FqMatrix, Subspace};

/// Dual space enumeration is refused above this many functionals.
pub const DUAL_LIMIT: u64 = 1 << 20;

/// A maximal ideal `H ⊂ J` together with the data needed to count the
/// conjugates of `S ⊕ H`.
#[derive(Clone, Debug)]
pub struct RadicalQuotient {
    /// Basis of `H` (including `J^2`) in algebra coordinates.
    pub h_basis: Vec<AlgElement>,
    /// `dim J/H`.
    pub codim: usize,
    /// `dim J - dim C` where `C = {z ∈ J : [z, s] ∈ H for all s ∈ S}`.
    pub conj_exponent: usize,
}

/// Solves `v = sum x_i basis_i`.
pub fn solve(field: &std::sync::Arc<Field>, basis: &[AlgElement], v: &[u32]) -> Option<Vec<u32>> {
    let rows = v.len();
    let cols = basis.len() + 1;
    let mut m = FqMatrix::zero(field.clone(), rows, cols);
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    for (i, &x) in v.iter().enumerate() {
        m.set(i, basis.len(), x);
    }
    let (r, pivots) = m.rref();
    if pivots.last() == Some(&basis.len()) {
        return None;
    }
    let mut out = vec![0u32; basis.len()];
    for (i, &pc) in pivots.iter().enumerate() {
        out[pc] = r.get(i, basis.len());
    }
    Some(out)
}

struct Quotient {
    field: std::sync::Arc<Field>,
    /// Lifts to `J` of a basis of `V`.
    lifts: Vec<AlgElement>,
    j2: Vec<AlgElement>,
    /// Left and right action matrices on `V` (acting on columns), per basis
    /// element of `S`.
    left: Vec<FqMatrix>,
    right: Vec<FqMatrix>,
}

impl Quotient {
    fn new(spec: &AlgebraSpec) -> Result<Quotient> {
        let dec = spec.require_decomposition()?;
        let field = spec.field().clone();
        let d = spec.dim();
        let j2 = dec.radical_powers.first().cloned().unwrap_or_default();
        let mut cur = Subspace::span(field.clone(), d, &j2);
        let lifts: Vec<AlgElement> = dec
            .radical_basis
            .iter()
            .filter(|v| cur.insert(v))
            .cloned()
            .collect();
        let k = lifts.len();
        let all: Vec<AlgElement> = lifts.iter().chain(j2.iter()).cloned().collect();
        let coords = |z: &[u32]| -> Vec<u32> {
            let mut x = solve(&field, &all, z).expect("element of J");
            x.truncate(k);
            x
        };
        let s_basis: Vec<&AlgElement> = dec.factors.iter().flat_map(|f| f.basis.iter()).collect();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for s in s_basis {
            let mut lm = FqMatrix::zero(field.clone(), k, k);
            let mut rm = FqMatrix::zero(field.clone(), k, k);
            for (b, c) in lifts.iter().enumerate() {
                for (a, &x) in coords(&spec.mul(s, c)).iter().enumerate() {
                    lm.set(a, b, x);
                }
                for (a, &x) in coords(&spec.mul(c, s)).iter().enumerate() {
                    rm.set(a, b, x);
                }
            }
            left.push(lm);
            right.push(rm);
        }
        Ok(Quotient {
            field,
            lifts,
            j2,
            left,
            right,
        })
    }

    fn dim(&self) -> usize {
        self.lifts.len()
    }

    fn row_times(&self, f: &[u32], m: &FqMatrix) -> Vec<u32> {
        let k = &self.field;
        (0..m.cols())
            .map(|j| {
                f.iter()
                    .enumerate()
                    .fold(0, |acc, (i, &x)| k.add(acc, k.mul(x, m.get(i, j))))
            })
            .collect()
    }

    /// Submodule of `V*` generated by the functional `f`.
    fn dual_closure(&self, f: &[u32]) -> Subspace {
        let mut w = Subspace::span(self.field.clone(), self.dim(), &[f.to_vec()]);
        let mut frontier = vec![f.to_vec()];
        while let Some(g) = frontier.pop() {
            for m in self.left.iter().chain(&self.right) {
                let h = self.row_times(&g, m);
                if w.insert(&h) {
                    frontier.push(h);
                }
            }
        }
        w
    }
}

/// All maximal ideals of `A` contained in `J`.
pub fn maximal_radical_ideals(spec: &AlgebraSpec) -> Result<Vec<RadicalQuotient>> {
    let quo = Quotient::new(spec)?;
    let k = quo.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    let q = spec.q();
    let total = q
        .checked_pow(k as u32)
        .filter(|&t| t <= DUAL_LIMIT)
        .ok_or_else(|| Error::too_large(format!("dual of J/J^2 with dimension {k}")))?;
    let mut cyclic: HashSet<Subspace> = HashSet::new();
    for code in 1..total {
        let mut rest = code;
        let f: Vec<u32> = (0..k)
            .map(|_| {
                let d = (rest % q) as u32;
                rest /= q;
                d
            })
            .collect();
        if f.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        cyclic.insert(quo.dual_closure(&f));
    }
    let mut minimal: Vec<Subspace> = cyclic
        .iter()
        .filter(|w| {
            !cyclic
                .iter()
                .any(|x| x.dim() < w.dim() && w.contains_space(x))
        })
        .cloned()
        .collect();
    minimal.sort_by(|a, b| (a.dim(), a.basis()).cmp(&(b.dim(), b.basis())));
    let field = spec.field().clone();
    let d = spec.dim();
    let mut out = Vec::new();
    for w in minimal {
        let wm = FqMatrix::from_rows(field.clone(), w.basis())?;
        let h_bar = wm.kernel();
        let mut h_basis: Vec<AlgElement> = h_bar
            .iter()
            .map(|v| {
                combine(
                    &field,
                    d,
                    v.iter().zip(&quo.lifts).map(|(&c, l)| (c, l.clone())),
                )
            })
            .collect();
        h_basis.extend(quo.j2.iter().cloned());
        let mut rows = Vec::new();
        for (lm, rm) in quo.left.iter().zip(&quo.right) {
            for wv in w.basis() {
                let a = quo.row_times(wv, rm);
                let b = quo.row_times(wv, lm);
                rows.push(
                    a.iter()
                        .zip(&b)
                        .map(|(&x, &y)| field.sub(x, y))
                        .collect::<Vec<u32>>(),
                );
            }
        }
        let conj_exponent = FqMatrix::from_rows(field.clone(), &rows)?.rank();
        out.push(RadicalQuotient {
            h_basis,
            codim: w.dim(),
            conj_exponent,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parabolic, truncated_poly};

    #[test]
    fn truncated_polynomial_has_one_commuting_ideal() {
        let a = truncated_poly(2, 3).unwrap();
        let hs = maximal_radical_ideals(&a).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].codim, 1);
        assert_eq!(hs[0].conj_exponent, 0);
    }

    #[test]
    fn parabolic_radical_is_simple() {
        let a = parabolic(&[1, 1], 1, 2).unwrap();
        let hs = maximal_radical_ideals(&a).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].codim, 1);
        assert_eq!(hs[0].conj_exponent, 1);
        assert!(hs[0].h_basis.is_empty());
    }

    #[test]
    fn solve_recovers_coefficients() {
        let k = crate::gfield::gf(3).unwrap();
        let basis = vec![vec![1, 0, 1], vec![0, 1, 2]];
        assert_eq!(solve(&k, &basis, &[2, 1, 1]), Some(vec![2, 1]));
        assert_eq!(solve(&k, &basis, &[0, 0, 1]), None);
    }
}
