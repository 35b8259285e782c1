//! Conjugation orbits of subspaces under the unit group.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;

use crate::algebra::{AlgElement, AlgebraSpec};
use crate::counting::{big_pow, gl_order};
use crate::error::{Error, Result};
use crate::gfield::{prime_divisors, Field, FieldTower};
use crate::linalg::Subspace;

/// Orbit enumeration is refused above this unit-group order.
pub const ORBIT_LIMIT: u64 = 1 << 20;

/// `|A^×| = prod |GL_{n_i}(q^{m_i})| · q^{dim J}`.
pub fn unit_group_order(spec: &AlgebraSpec) -> Result<BigUint> {
    let dec = spec.require_decomposition()?;
    let q = spec.q();
    let mut acc = big_pow(q, dec.radical_dim() as u64);
    for f in &dec.factors {
        acc *= gl_order(f.n as u64, q.pow(f.m as u32));
    }
    Ok(acc)
}

pub fn primitive_element(k: &Field) -> u32 {
    let t = k.order() as u64;
    if t == 2 {
        return 1;
    }
    let ps = prime_divisors(t - 1);
    (2..t as u32)
        .find(|&z| ps.iter().all(|&p| k.pow(z, (t - 1) / p) != 1))
        .expect("multiplicative group is cyclic")
}

/// Units generating `A^×`, paired with their inverses: per factor the
/// transvections `I + λE_ab` (λ over an `F_p`-basis of `F_{q^m}`) and
/// `diag(ζ, 1, ..., 1)`; then `1 + λv` for `v` in the bases of `J, J^2, ...`.
pub fn unit_generators(spec: &AlgebraSpec) -> Result<Vec<(AlgElement, AlgElement)>> {
    let dec = spec.require_decomposition()?;
    let field = spec.field().clone();
    let q = spec.q();
    let e = field.abs_degree();
    let p = field.characteristic();
    let fp_basis: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();
    let one = spec.one().clone();
    let mut out = Vec::new();
    let mut push = |u: AlgElement| {
        let inv = spec.inverse(&u).expect("generator is a unit");
        out.push((u, inv));
    };
    for f in &dec.factors {
        let (n, m) = (f.n, f.m);
        let idem = f.idempotent(&field);
        let rest = spec.sub(&one, &idem);
        let mut ident = vec![0u32; n * n * m];
        for i in 0..n {
            ident[(i * n + i) * m] = 1;
        }
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for k in 0..m {
                    for &c in &fp_basis {
                        let mut g = ident.clone();
                        g[(a * n + b) * m + k] = c;
                        push(spec.add(&f.image(&field, &g), &rest));
                    }
                }
            }
        }
        let tower = FieldTower::for_q(q, m as u32)?;
        let zeta = primitive_element(tower.top_field());
        if zeta != 1 {
            let mut g = ident.clone();
            g[..m].copy_from_slice(&tower.decode(zeta).coords);
            push(spec.add(&f.image(&field, &g), &rest));
        }
    }
    let layers = std::iter::once(&dec.radical_basis).chain(dec.radical_powers.iter());
    for layer in layers {
        for v in layer {
            for &c in &fp_basis {
                push(spec.add(&one, &spec.scale(c, v)));
            }
        }
    }
    Ok(out)
}

fn conjugate(spec: &AlgebraSpec, s: &Subspace, u: &AlgElement, uinv: &AlgElement) -> Subspace {
    let imgs: Vec<AlgElement> = s
        .basis()
        .iter()
        .map(|x| spec.mul(&spec.mul(u, x), uinv))
        .collect();
    Subspace::span(spec.field().clone(), spec.dim(), &imgs)
}

/// All conjugates `uBu^{-1}` of the span of `basis`, by breadth-first search
/// over the generators.
pub fn orbit(spec: &AlgebraSpec, basis: &[AlgElement]) -> Result<Vec<Subspace>> {
    let order = unit_group_order(spec)?;
    if order > BigUint::from(ORBIT_LIMIT) {
        return Err(Error::TooLarge {
            what: format!("conjugation orbit under a unit group of order {order}"),
            lower: None,
            upper: None,
        });
    }
    let gens = unit_generators(spec)?;
    let start = Subspace::span(spec.field().clone(), spec.dim(), basis);
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        for (u, uinv) in &gens {
            let t = conjugate(spec, &s, u, uinv);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parabolic, simple_algebra};
    use crate::closure::generated_subalgebra;

    #[test]
    fn generators_generate_gl22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let gens = unit_generators(&a).unwrap();
        let mut group: HashSet<AlgElement> = HashSet::new();
        let mut queue = vec![a.one().clone()];
        group.insert(a.one().clone());
        while let Some(x) = queue.pop() {
            for (u, _) in &gens {
                let y = a.mul(&x, u);
                if group.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        assert_eq!(group.len(), 6);
    }

    #[test]
    fn generators_generate_parabolic_units() {
        let a = parabolic(&[1, 1], 1, 3).unwrap();
        let gens = unit_generators(&a).unwrap();
        let mut group: HashSet<AlgElement> = HashSet::new();
        let mut queue = vec![a.one().clone()];
        group.insert(a.one().clone());
        while let Some(x) = queue.pop() {
            for (u, _) in &gens {
                let y = a.mul(&x, u);
                if group.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        assert_eq!(BigUint::from(group.len()), unit_group_order(&a).unwrap());
    }

    #[test]
    fn diagonal_orbit_in_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let mut e11 = a.zero();
        e11[0] = 1;
        let b = generated_subalgebra(&a, &[e11]).basis;
        assert_eq!(orbit(&a, &b).unwrap().len(), 3);
    }
}
