use std::sync::Arc;

use super::{AlgElement, AlgebraSpec, Decomposition, FactorBlock};
use crate::error::{Error, Result};
use crate::gfield::{Field, FieldTower};
use crate::linalg::FqMatrix;

fn unit(dim: usize, i: usize) -> AlgElement {
    let mut e = vec![0; dim];
    e[i] = 1;
    e
}

/// `M_n(q^m)` as an `F_q`-algebra on the basis `E_ij ⊗ X^k`.
pub fn simple_algebra(n: usize, m: usize, q: u64) -> Result<AlgebraSpec> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("M(n,m,q) needs n, m >= 1"));
    }
    let tower = FieldTower::for_q(q, m as u32)?;
    let dim = m * n * n;
    let w = word_products(&tower);
    let mut consts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for a in 0..m {
                    for b in 0..m {
                        for (k, &c) in w[a * m + b].iter().enumerate() {
                            if c != 0 {
                                consts.push((
                                    (i * n + j) * m + a,
                                    (j * n + l) * m + b,
                                    (i * n + l) * m + k,
                                    c,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut one = vec![0; dim];
    for i in 0..n {
        one[(i * n + i) * m] = 1;
    }
    let meta = Decomposition {
        factors: vec![FactorBlock {
            n,
            m,
            basis: (0..dim).map(|i| unit(dim, i)).collect(),
        }],
        radical_basis: Vec::new(),
        radical_powers: Vec::new(),
    };
    Ok(
        AlgebraSpec::new(tower.base_field().clone(), dim, &consts, one, Some(meta))?
            .with_label(format!("M({n},{m},{q})")),
    )
}

/// Coordinates over `F_q` of `X^a X^b` in `F_{q^m}`, indexed by `a*m+b`.
fn word_products(tower: &FieldTower) -> Vec<Vec<u32>> {
    let m = tower.m() as usize;
    let q = tower.q();
    let k = tower.top_field();
    let mut out = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let prod = k.mul(q.pow(a as u32), q.pow(b as u32));
            out.push(tower.decode(prod).coords);
        }
    }
    out
}

fn shift(v: &[u32], offset: usize, dim: usize) -> AlgElement {
    let mut out = vec![0; dim];
    out[offset..offset + v.len()].copy_from_slice(v);
    out
}

/// Direct product; decomposition data is concatenated when every factor has it.
pub fn product(specs: &[AlgebraSpec]) -> Result<AlgebraSpec> {
    let first = specs
        .first()
        .ok_or_else(|| Error::invalid("empty product"))?;
    if specs.iter().any(|s| *s.field() != *first.field()) {
        return Err(Error::invalid("product factors over different base fields"));
    }
    let dim: usize = specs.iter().map(|s| s.dim()).sum();
    let mut consts = Vec::new();
    let mut one = Vec::with_capacity(dim);
    let mut offset = 0;
    let mut factors = Vec::new();
    let mut radical = Vec::new();
    let mut powers: Vec<Vec<AlgElement>> = Vec::new();
    let all_meta = specs.iter().all(|s| s.decomposition().is_some());
    for s in specs {
        for (i, j, l, c) in s.constants() {
            consts.push((i + offset, j + offset, l + offset, c));
        }
        one.extend_from_slice(s.one());
        if let Some(m) = s.decomposition() {
            for f in &m.factors {
                factors.push(FactorBlock {
                    n: f.n,
                    m: f.m,
                    basis: f.basis.iter().map(|v| shift(v, offset, dim)).collect(),
                });
            }
            radical.extend(m.radical_basis.iter().map(|v| shift(v, offset, dim)));
            for (t, layer) in m.radical_powers.iter().enumerate() {
                if powers.len() <= t {
                    powers.push(Vec::new());
                }
                powers[t].extend(layer.iter().map(|v| shift(v, offset, dim)));
            }
        }
        offset += s.dim();
    }
    let meta = all_meta.then_some(Decomposition {
        factors,
        radical_basis: radical,
        radical_powers: powers,
    });
    let label = format!(
        "prod({})",
        specs
            .iter()
            .map(|s| s.label())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(AlgebraSpec::new(first.field().clone(), dim, &consts, one, meta)?.with_label(label))
}

/// Block upper-triangular matrices `P_α(q^m)` for a composition `α` of `n`.
pub fn parabolic(blocks: &[usize], m: usize, q: u64) -> Result<AlgebraSpec> {
    if blocks.len() < 2 {
        return Err(Error::invalid("a parabolic needs at least two blocks"));
    }
    if blocks.contains(&0) || m == 0 {
        return Err(Error::invalid("block sizes and m must be positive"));
    }
    let tower = FieldTower::for_q(q, m as u32)?;
    let n: usize = blocks.iter().sum();
    let mut block_of = Vec::with_capacity(n);
    let mut starts = Vec::with_capacity(blocks.len());
    for (s, &a) in blocks.iter().enumerate() {
        starts.push(block_of.len());
        block_of.extend(std::iter::repeat_n(s, a));
    }
    let mut index = vec![usize::MAX; n * n];
    let mut dim = 0;
    for i in 0..n {
        for j in 0..n {
            if block_of[i] <= block_of[j] {
                index[i * n + j] = dim;
                dim += m;
            }
        }
    }
    let w = word_products(&tower);
    let mut consts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if index[i * n + j] == usize::MAX {
                continue;
            }
            for l in 0..n {
                if index[j * n + l] == usize::MAX {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        for (k, &c) in w[a * m + b].iter().enumerate() {
                            if c != 0 {
                                consts.push((
                                    index[i * n + j] + a,
                                    index[j * n + l] + b,
                                    index[i * n + l] + k,
                                    c,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut one = vec![0; dim];
    for i in 0..n {
        one[index[i * n + i]] = 1;
    }
    let factors = blocks
        .iter()
        .zip(&starts)
        .map(|(&a, &o)| {
            let mut basis = Vec::with_capacity(a * a * m);
            for u in 0..a {
                for v in 0..a {
                    for k in 0..m {
                        basis.push(unit(dim, index[(o + u) * n + o + v] + k));
                    }
                }
            }
            FactorBlock { n: a, m, basis }
        })
        .collect();
    let layer = |t: usize| -> Vec<AlgElement> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if block_of[j] >= block_of[i] + t {
                    out.extend((0..m).map(|k| unit(dim, index[i * n + j] + k)));
                }
            }
        }
        out
    };
    let radical_basis = layer(1);
    let radical_powers = (2..blocks.len()).map(layer).collect();
    let meta = Decomposition {
        factors,
        radical_basis,
        radical_powers,
    };
    let parts: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
    Ok(
        AlgebraSpec::new(tower.base_field().clone(), dim, &consts, one, Some(meta))?
            .with_label(format!("P({};{m},{q})", parts.join(","))),
    )
}

/// `F_q[x]/(x^j)`.
pub fn truncated_poly(q: u64, j: usize) -> Result<AlgebraSpec> {
    if j == 0 {
        return Err(Error::invalid("T(q,j) needs j >= 1"));
    }
    let field = FieldTower::for_q(q, 1)?.base_field().clone();
    let mut consts = Vec::new();
    for a in 0..j {
        for b in 0..j - a {
            consts.push((a, b, a + b, 1));
        }
    }
    let meta = Decomposition {
        factors: vec![FactorBlock {
            n: 1,
            m: 1,
            basis: vec![unit(j, 0)],
        }],
        radical_basis: (1..j).map(|i| unit(j, i)).collect(),
        radical_powers: (2..j)
            .map(|t| (t..j).map(|i| unit(j, i)).collect())
            .collect(),
    };
    Ok(AlgebraSpec::new(field, j, &consts, unit(j, 0), Some(meta))?
        .with_label(format!("T({q},{j})")))
}

/// A bimodule over an algebra `S`: `left[i]` and `right[i]` are the matrices
/// of `v -> s_i v` and `v -> v s_i` for the basis elements `s_i` of `S`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Vec<FqMatrix>,
    pub right: Vec<FqMatrix>,
}

impl Bimodule {
    pub fn zero(s: &AlgebraSpec) -> Bimodule {
        let z = FqMatrix::zero(s.field().clone(), 0, 0);
        Bimodule {
            dim: 0,
            left: vec![z.clone(); s.dim()],
            right: vec![z; s.dim()],
        }
    }

    /// `e_a V e_b = M_{n_a × n_b}(q^m)` with the natural matrix actions of the
    /// factors `a` and `b` of a product of simple algebras (all with the same
    /// `m`); other factors act by zero.
    pub fn matrix_block(s: &AlgebraSpec, a: usize, b: usize) -> Result<Bimodule> {
        let meta = s.require_decomposition()?;
        if !meta.is_semisimple() {
            return Err(Error::invalid("matrix_block needs a semisimple algebra"));
        }
        let (fa, fb) = match (meta.factors.get(a), meta.factors.get(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::invalid("factor index out of range")),
        };
        if fa.m != fb.m {
            return Err(Error::invalid("matrix_block needs equal centre degrees"));
        }
        let m = fa.m;
        let tower = FieldTower::for_q(s.q(), m as u32)?;
        let w = word_products(&tower);
        let (na, nb) = (fa.n, fb.n);
        let dim = na * nb * m;
        let field = s.field().clone();
        let mut left = vec![FqMatrix::zero(field.clone(), dim, dim); s.dim()];
        let mut right = vec![FqMatrix::zero(field.clone(), dim, dim); s.dim()];
        let coord_of = |block: &FactorBlock, idx: usize| -> Result<usize> {
            let v = &block.basis[idx];
            v.iter()
                .position(|&c| c != 0)
                .filter(|&p| v[p] == 1 && v.iter().filter(|&&c| c != 0).count() == 1)
                .ok_or_else(|| Error::invalid("matrix_block needs unit-vector factor bases"))
        };
        for i in 0..na {
            for j in 0..na {
                for k in 0..m {
                    let si = coord_of(fa, (i * na + j) * m + k)?;
                    for v in 0..nb {
                        for c in 0..m {
                            let src = (j * nb + v) * m + c;
                            for (t, &x) in w[k * m + c].iter().enumerate() {
                                if x != 0 {
                                    left[si].set((i * nb + v) * m + t, src, x);
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                for k in 0..m {
                    let si = coord_of(fb, (i * nb + j) * m + k)?;
                    for u in 0..na {
                        for c in 0..m {
                            let src = (u * nb + i) * m + c;
                            for (t, &x) in w[c * m + k].iter().enumerate() {
                                if x != 0 {
                                    right[si].set((u * nb + j) * m + t, src, x);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Bimodule { dim, left, right })
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Bimodule {
        let dim = self.dim + other.dim;
        let stack = |a: &FqMatrix, b: &FqMatrix| {
            let field = if a.rows() > 0 {
                a.field().clone()
            } else {
                b.field().clone()
            };
            let mut out = FqMatrix::zero(field, dim, dim);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    out.set(r, c, a.get(r, c));
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(self.dim + r, self.dim + c, b.get(r, c));
                }
            }
            out
        };
        Bimodule {
            dim,
            left: self
                .left
                .iter()
                .zip(&other.left)
                .map(|(a, b)| stack(a, b))
                .collect(),
            right: self
                .right
                .iter()
                .zip(&other.right)
                .map(|(a, b)| stack(a, b))
                .collect(),
        }
    }

    fn combo(field: &Arc<Field>, dim: usize, mats: &[FqMatrix], coeffs: &[u32]) -> FqMatrix {
        let mut out = FqMatrix::zero(field.clone(), dim, dim);
        for (m, &c) in mats.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for r in 0..dim {
                for col in 0..dim {
                    let v = field.add(out.get(r, col), field.mul(c, m.get(r, col)));
                    out.set(r, col, v);
                }
            }
        }
        out
    }

    /// Checks unitality, associativity of both actions and their commutation.
    pub fn validate(&self, s: &AlgebraSpec) -> Result<()> {
        let field = s.field();
        let d = self.dim;
        if self.left.len() != s.dim() || self.right.len() != s.dim() {
            return Err(Error::invalid(
                "bimodule needs one action matrix per basis element",
            ));
        }
        if self
            .left
            .iter()
            .chain(&self.right)
            .any(|m| m.rows() != d || m.cols() != d)
        {
            return Err(Error::invalid(
                "bimodule action matrices have the wrong size",
            ));
        }
        let id = FqMatrix::identity(field.clone(), d);
        if Self::combo(field, d, &self.left, s.one()) != id
            || Self::combo(field, d, &self.right, s.one()) != id
        {
            return Err(Error::invalid("unity does not act as the identity"));
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let prod = s.mul(&s.basis_vector(i), &s.basis_vector(j));
                let l = Self::combo(field, d, &self.left, &prod);
                if self.left[i].mul(&self.left[j])? != l {
                    return Err(Error::invalid(format!("left action fails on ({i},{j})")));
                }
                let r = Self::combo(field, d, &self.right, &prod);
                if self.right[j].mul(&self.right[i])? != r {
                    return Err(Error::invalid(format!("right action fails on ({i},{j})")));
                }
                if self.left[i].mul(&self.right[j])? != self.right[j].mul(&self.left[i])? {
                    return Err(Error::invalid(format!(
                        "actions do not commute on ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `V ⋊ S = S ⊕ V` with `V^2 = 0`, for a semisimple `S` with decomposition data.
pub fn trivial_extension(s: &AlgebraSpec, v: &Bimodule) -> Result<AlgebraSpec> {
    let meta = s.require_decomposition()?;
    if !meta.is_semisimple() {
        return Err(Error::invalid("trivial extension needs a semisimple base"));
    }
    v.validate(s)?;
    if v.dim == 0 {
        return Ok(s.clone());
    }
    let ds = s.dim();
    let dim = ds + v.dim;
    let mut consts = s.constants();
    for i in 0..ds {
        for k in 0..v.dim {
            for r in 0..v.dim {
                let c = v.left[i].get(r, k);
                if c != 0 {
                    consts.push((i, ds + k, ds + r, c));
                }
                let c = v.right[i].get(r, k);
                if c != 0 {
                    consts.push((ds + k, i, ds + r, c));
                }
            }
        }
    }
    let one = shift(s.one(), 0, dim);
    let factors = meta
        .factors
        .iter()
        .map(|f| FactorBlock {
            n: f.n,
            m: f.m,
            basis: f.basis.iter().map(|b| shift(b, 0, dim)).collect(),
        })
        .collect();
    let radical_basis = (0..v.dim).map(|k| unit(dim, ds + k)).collect();
    let meta = Decomposition {
        factors,
        radical_basis,
        radical_powers: Vec::new(),
    };
    Ok(
        AlgebraSpec::new(s.field().clone(), dim, &consts, one, Some(meta))?.with_label(format!(
            "triv({},{})",
            s.label(),
            v.dim
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_dimensions() {
        assert_eq!(simple_algebra(1, 1, 5).unwrap().dim(), 1);
        assert_eq!(simple_algebra(2, 1, 2).unwrap().dim(), 4);
        let a = simple_algebra(2, 2, 2).unwrap();
        assert_eq!(a.dim(), 8);
        assert!(a.check_associativity().is_ok());
        let b = simple_algebra(2, 1, 4).unwrap();
        assert_eq!(b.q(), 4);
        assert!(b.check_associativity().is_ok());
    }

    #[test]
    fn products() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let kk = product(&[k.clone(), k.clone()]).unwrap();
        assert_eq!(kk.dim(), 2);
        assert_eq!(kk.decomposition().unwrap().r(), 2);
        let a = product(&[
            simple_algebra(2, 1, 2).unwrap(),
            simple_algebra(1, 2, 2).unwrap(),
        ])
        .unwrap();
        assert_eq!(a.dim(), 6);
        assert!(a.check_associativity().is_ok());
        let k3 = simple_algebra(1, 1, 3).unwrap();
        assert!(product(&[k, k3]).is_err());
    }

    #[test]
    fn parabolics() {
        let p = parabolic(&[1, 1], 1, 2).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.order(), Some(8));
        assert_eq!(parabolic(&[2, 1], 2, 3).unwrap().dim(), 14);
        assert!(parabolic(&[3], 1, 2).is_err());
        let p = parabolic(&[1, 1, 1], 1, 3).unwrap();
        assert!(p.check_associativity().is_ok());
        assert_eq!(p.decomposition().unwrap().radical_powers[0].len(), 1);
    }

    #[test]
    fn truncated() {
        assert_eq!(truncated_poly(2, 1).unwrap().dim(), 1);
        let t = truncated_poly(2, 3).unwrap();
        let m = t.decomposition().unwrap();
        assert_eq!((m.radical_basis.len(), m.radical_powers[0].len()), (2, 1));
        let t2 = truncated_poly(3, 2).unwrap();
        assert!(t2.decomposition().unwrap().radical_powers.is_empty());
    }

    #[test]
    fn trivial_extensions() {
        let k = simple_algebra(1, 1, 2).unwrap();
        assert_eq!(trivial_extension(&k, &Bimodule::zero(&k)).unwrap().dim(), 1);
        let v = Bimodule::matrix_block(&k, 0, 0).unwrap();
        let a = trivial_extension(&k, &v).unwrap();
        assert_eq!(a.constants(), truncated_poly(2, 2).unwrap().constants());

        let kk = product(&[k.clone(), k]).unwrap();
        let v = Bimodule::matrix_block(&kk, 0, 1).unwrap();
        let a = trivial_extension(&kk, &v).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.check_associativity().is_ok());
    }

    #[test]
    fn bad_bimodule_rejected() {
        let k = simple_algebra(1, 1, 2).unwrap();
        let mut v = Bimodule::matrix_block(&k, 0, 0).unwrap();
        v.left[0] = FqMatrix::zero(k.field().clone(), 1, 1);
        assert!(trivial_extension(&k, &v).is_err());
    }
}
