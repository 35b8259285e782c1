//! Dense linear algebra over a finite [`Field`]: echelon forms, rank,
//! characteristic polynomials, kernels and subspace bookkeeping.

pub mod bits;
pub mod factor;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfield::{poly, Field, Poly};

pub use factor::{factorize, Factor, PolyFactorization};

/// Row-major matrix over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        if rows.iter().flatten().any(|&v| v >= field.order()) {
            return Err(Error::invalid("matrix entry outside the field"));
        }
        Ok(FqMatrix {
            field,
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_vec(field: Arc<Field>, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FqMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &FqMatrix) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::invalid("matrices over different fields"));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::invalid("dimension mismatch in matrix product"));
        }
        let k = &self.field;
        let mut out = FqMatrix::zero(k.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = k.add(out.data[idx], k.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::invalid("dimension mismatch in matrix sum"));
        }
        let k = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| k.add(a, b))
            .collect();
        Ok(FqMatrix {
            field: k.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row-echelon form with its pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    m.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c));
            for j in c..self.cols {
                let v = k.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                let f = m.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.field.order() == 2 && self.cols <= 64 {
            let mut packed: Vec<u64> = (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (j, &v)| acc | ((v as u64) << j))
                })
                .collect();
            return bits::rank(&mut packed);
        }
        self.rref().1.len()
    }

    pub fn is_unit(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        let n = self.rows;
        self.is_square() && self.charpoly() == poly::x_pow(n)
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let k = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(r.get(i, f));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = FqMatrix::zero(self.field.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = FqMatrix::zero(self.field.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    /// `det(X I - M)` via reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let k = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if piv != j + 1 {
                for c in 0..n {
                    h.data.swap(piv * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + piv, r * n + j + 1);
                }
            }
            let inv = k.inv(h.get(j + 1, j));
            for i in j + 2..n {
                let u = k.mul(h.get(i, j), inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = k.sub(h.get(i, c), k.mul(u, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = k.add(h.get(r, j + 1), k.mul(u, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_k = (X - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{l=i+1..k} h_{l,l-1}) p_{i-1}
        let mut ps: Vec<Poly> = vec![vec![1]];
        for kk in 0..n {
            let mut next = poly::mul(k, &[k.neg(h.get(kk, kk)), 1], &ps[kk]);
            let mut prod = 1u32;
            for i in (0..kk).rev() {
                prod = k.mul(prod, h.get(i + 1, i));
                if prod == 0 {
                    break;
                }
                let c = k.mul(h.get(i, kk), prod);
                if c != 0 {
                    next = poly::sub(k, &next, &poly::scale(k, &ps[i], c));
                }
            }
            ps.push(next);
        }
        ps.pop().unwrap_or_else(|| vec![1])
    }

    pub fn pow(&self, mut e: u64) -> FqMatrix {
        let mut acc = FqMatrix::identity(self.field.clone(), self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).expect("square");
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).expect("square");
            }
        }
        acc
    }

    /// Evaluates a polynomial at this matrix.
    pub fn eval_poly(&self, f: &[u32]) -> FqMatrix {
        let k = &self.field;
        let n = self.rows;
        let mut acc = FqMatrix::zero(k.clone(), n, n);
        for &c in f.iter().rev() {
            acc = acc.mul(self).expect("square");
            for i in 0..n {
                let v = k.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

/// Companion matrix of a monic polynomial (ones on the subdiagonal, last
/// column `-a_i`), whose characteristic polynomial is `f`.
pub fn companion(field: &Arc<Field>, f: &[u32]) -> FqMatrix {
    let d = f.len() - 1;
    let mut c = FqMatrix::zero(field.clone(), d, d);
    for i in 1..d {
        c.set(i, i - 1, 1);
    }
    for i in 0..d {
        c.set(i, d - 1, field.neg(f[i]));
    }
    c
}

/// A subspace of `k^n` kept as a reduced row-echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Arc<Field>,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rows.hash(state);
    }
}

impl Subspace {
    pub fn zero(field: Arc<Field>, n: usize) -> Self {
        Subspace {
            field,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Arc<Field>, n: usize) -> Self {
        let mut s = Self::zero(field, n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            s.insert(&e);
        }
        s
    }

    pub fn span(field: Arc<Field>, n: usize, vecs: &[Vec<u32>]) -> Self {
        let mut s = Self::zero(field, n);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let k = &self.field;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = w[pc];
            if f == 0 {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                if r != 0 {
                    *x = k.sub(*x, k.mul(f, r));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let k = self.field.clone();
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = k.inv(w[pc]);
        for x in w.iter_mut() {
            *x = k.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f == 0 {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&w) {
                if r != 0 {
                    *x = k.sub(*x, k.mul(f, r));
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, w);
        true
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v);
        }
        s
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let k = &self.field;
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            if c == 0 {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                if r != 0 {
                    *x = k.sub(*x, k.mul(c, r));
                }
            }
        }
        w.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Solve sum a_i u_i = sum b_j w_j via the kernel of [U; -W]^T.
        let k = &self.field;
        let (du, dw) = (self.dim(), other.dim());
        if du == 0 || dw == 0 {
            return Subspace::zero(k.clone(), self.n);
        }
        let mut m = FqMatrix::zero(k.clone(), self.n, du + dw);
        for (j, u) in self.rows.iter().enumerate() {
            for i in 0..self.n {
                m.set(i, j, u[i]);
            }
        }
        for (j, w) in other.rows.iter().enumerate() {
            for i in 0..self.n {
                m.set(i, du + j, k.neg(w[i]));
            }
        }
        let mut out = Subspace::zero(k.clone(), self.n);
        for sol in m.kernel() {
            let mut v = vec![0u32; self.n];
            for (j, u) in self.rows.iter().enumerate() {
                let c = sol[j];
                if c == 0 {
                    continue;
                }
                for i in 0..self.n {
                    v[i] = k.add(v[i], k.mul(c, u[i]));
                }
            }
            out.insert(&v);
        }
        out
    }

    /// Unit vectors on the non-pivot columns: a complement of this subspace.
    pub fn complement(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| {
                let mut e = vec![0; self.n];
                e[c] = 1;
                e
            })
            .collect()
    }

    /// Number of elements, `|k|^dim`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.dim() as u32)
    }

    /// Iterates every vector of the subspace (`|k|^dim` of them).
    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let q = self.field.order() as u64;
        let total = q.pow(self.dim() as u32);
        (0..total).map(move |mut code| {
            let k = &self.field;
            let mut v = vec![0u32; self.n];
            for row in &self.rows {
                let c = (code % q) as u32;
                code /= q;
                if c == 0 {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = k.add(*x, k.mul(c, r));
                    }
                }
            }
            v
        })
    }
}

/// Linear combination `sum c_i v_i`.
pub fn combine(
    field: &Field,
    n: usize,
    terms: impl IntoIterator<Item = (u32, Vec<u32>)>,
) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for (c, v) in terms {
        if c == 0 {
            continue;
        }
        for (x, y) in out.iter_mut().zip(v) {
            if y != 0 {
                *x = field.add(*x, field.mul(c, y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::gf;

    fn f2() -> Arc<Field> {
        gf(2).unwrap()
    }

    #[test]
    fn ranks() {
        let k = f2();
        assert_eq!(FqMatrix::identity(k.clone(), 3).rank(), 3);
        assert_eq!(FqMatrix::zero(k.clone(), 3, 3).rank(), 0);
        let m = FqMatrix::from_rows(k, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.is_nilpotent());
        assert!(!m.is_unit());
    }

    #[test]
    fn charpolys() {
        let k = f2();
        assert_eq!(FqMatrix::zero(k.clone(), 2, 2).charpoly(), vec![0, 0, 1]);
        assert_eq!(FqMatrix::identity(k.clone(), 2).charpoly(), vec![1, 0, 1]);
        let m = FqMatrix::from_rows(k.clone(), &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.charpoly(), vec![1, 1, 1]);
        let e12 = FqMatrix::from_rows(k, &[vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(e12.rank(), 1);
        assert!(e12.is_nilpotent());
    }

    #[test]
    fn charpoly_of_companion() {
        let k = gf(5).unwrap();
        let f = vec![3, 0, 4, 1, 1];
        assert_eq!(companion(&k, &f).charpoly(), f);
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FqMatrix::identity(f2(), 2);
        let b = FqMatrix::identity(gf(3).unwrap(), 2);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let k = gf(3).unwrap();
        let m =
            FqMatrix::from_rows(k.clone(), &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FqMatrix::identity(k, 3));
    }

    #[test]
    fn subspace_intersection() {
        let k = f2();
        let a = Subspace::span(k.clone(), 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(k.clone(), 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[0, 1, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert_eq!(a.coordinates(&[1, 1, 0]), Some(vec![1, 1]));
        assert_eq!(a.coordinates(&[0, 0, 1]), None);
    }
}
