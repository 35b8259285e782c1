use super::AlgElement;
use crate::error::{Error, Result};
use crate::gfield::{poly, FieldTower};
use crate::linalg::{companion, FqMatrix};

/// Images in `M_n(q^m)`-coordinates of a basis of an embedded algebra.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub images: Vec<AlgElement>,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.images.len()
    }
}

/// Writes an `n × n` matrix over `F_{q^m}` in the `E_ij ⊗ X^k` coordinates.
pub fn matrix_coords(tower: &FieldTower, mat: &FqMatrix) -> AlgElement {
    let n = mat.rows();
    let m = tower.m() as usize;
    let mut out = vec![0u32; n * n * m];
    for i in 0..n {
        for j in 0..n {
            let c = tower.decode(mat.get(i, j)).coords;
            out[(i * n + j) * m..(i * n + j + 1) * m].copy_from_slice(&c);
        }
    }
    out
}

/// `M_{n/r}(q^{mr}) ↪ M_n(q^m)`: `F_{q^{mr}} = F_{q^m}[Y]/(f)` for the least
/// irreducible `f` of degree `r` acts on itself as the companion matrix `C`,
/// and the basis `E_IJ ⊗ w_k Y^c` maps to the block matrix with `w_k C^c` in
/// block `(I, J)`.
pub fn embed_inner(n: usize, m: usize, q: u64, r: usize) -> Result<Embedding> {
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::invalid(format!("{r} does not divide n = {n}")));
    }
    let tower = FieldTower::for_q(q, m as u32)?;
    let big = tower.top_field().clone();
    let f = poly::least_irreducible(&big, r);
    let c = companion(&big, &f);
    let cpow: Vec<FqMatrix> = (0..r).map(|e| c.pow(e as u64)).collect();
    let s = n / r;
    let mut images = Vec::with_capacity(s * s * m * r);
    for bi in 0..s {
        for bj in 0..s {
            for k in 0..m {
                let wk = (tower.q() as u64).pow(k as u32) as u32;
                for cp in &cpow {
                    let mut mat = FqMatrix::zero(big.clone(), n, n);
                    for u in 0..r {
                        for v in 0..r {
                            mat.set(bi * r + u, bj * r + v, big.mul(wk, cp.get(u, v)));
                        }
                    }
                    images.push(matrix_coords(&tower, &mat));
                }
            }
        }
    }
    Ok(Embedding { images })
}

/// `M_n(q^{m/b}) ↪ M_n(q^m)` through the subfield `F_{q^{m/b}} ⊂ F_{q^m}`.
pub fn embed_subfield(n: usize, m: usize, q: u64, b: usize) -> Result<Embedding> {
    let tower = FieldTower::for_q(q, m as u32)?;
    let sub = tower.subfield_basis(b as u32)?;
    let mut images = Vec::with_capacity(n * n * sub.len());
    for i in 0..n {
        for j in 0..n {
            for u in &sub {
                let mut v = vec![0u32; n * n * m];
                v[(i * n + j) * m..(i * n + j + 1) * m].copy_from_slice(&u.coords);
                images.push(v);
            }
        }
    }
    Ok(Embedding { images })
}

/// Images of the standard basis of `M_n(q^m)` under entrywise `x -> x^(q^j)`.
pub fn frobenius_twist(n: usize, m: usize, q: u64, j: i64) -> Result<Embedding> {
    let tower = FieldTower::for_q(q, m as u32)?;
    let mut images = Vec::with_capacity(n * n * m);
    for i in 0..n {
        for l in 0..n {
            for k in 0..m {
                let wk = (tower.q() as u64).pow(k as u32) as u32;
                let img = tower.decode(tower.frobenius_code(wk, j));
                let mut v = vec![0u32; n * n * m];
                v[(i * n + l) * m..(i * n + l + 1) * m].copy_from_slice(&img.coords);
                images.push(v);
            }
        }
    }
    Ok(Embedding { images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::simple_algebra;
    use crate::linalg::Subspace;

    #[test]
    fn f4_in_m22() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let e = embed_inner(2, 1, 2, 2).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(a.is_subalgebra(&e.images));
        let s = Subspace::span(a.field().clone(), 4, &e.images);
        assert!(s.contains(a.one()));
        let w = &e.images[1];
        let mat = FqMatrix::from_vec(a.field().clone(), 2, 2, w.clone());
        assert_eq!(mat.charpoly(), vec![1, 1, 1]);
    }

    #[test]
    fn inner_dimensions() {
        for (n, m, q, r) in [(4, 1, 2, 2), (2, 2, 2, 2), (3, 1, 3, 3), (4, 2, 2, 4)] {
            let a = simple_algebra(n, m, q).unwrap();
            let e = embed_inner(n, m, q, r).unwrap();
            assert_eq!(e.dim(), m * r * (n / r) * (n / r));
            assert!(a.is_subalgebra(&e.images));
            let s = Subspace::span(a.field().clone(), a.dim(), &e.images);
            assert_eq!(s.dim(), e.dim());
        }
        assert!(embed_inner(3, 1, 2, 2).is_err());
    }

    #[test]
    fn subfield_dimensions() {
        for (n, m, q, b) in [(2, 2, 2, 2), (1, 6, 2, 3), (2, 4, 2, 2), (3, 2, 3, 2)] {
            let a = simple_algebra(n, m, q).unwrap();
            let e = embed_subfield(n, m, q, b).unwrap();
            assert_eq!(e.dim(), n * n * m / b);
            assert!(a.is_subalgebra(&e.images));
        }
        assert!(embed_subfield(2, 3, 2, 2).is_err());
    }

    #[test]
    fn twist_is_automorphism() {
        let a = simple_algebra(2, 2, 2).unwrap();
        let t = frobenius_twist(2, 2, 2, 1).unwrap();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let prod = a.mul(&a.basis_vector(i), &a.basis_vector(j));
                let lhs = a.decomposition().unwrap().factors[0].image(a.field(), &prod);
                let twisted_lhs = crate::algebra::FactorBlock {
                    n: 2,
                    m: 2,
                    basis: t.images.clone(),
                }
                .image(a.field(), &lhs);
                let rhs = a.mul(&t.images[i], &t.images[j]);
                assert_eq!(twisted_lhs, rhs);
            }
        }
    }
}
