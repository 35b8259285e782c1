//! Finite-dimensional unital algebras over `F_q` given by structure constants,
//! together with their Wedderburn–Malcev decomposition data.

mod construct;
mod embed;
mod ideal;
mod json;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfield::Field;
use crate::linalg::{FqMatrix, Subspace};

pub use construct::{
    parabolic, product, simple_algebra, trivial_extension, truncated_poly, Bimodule,
};
pub use embed::{embed_inner, embed_subfield, frobenius_twist, matrix_coords, Embedding};
pub use json::AlgebraDoc;

/// Coordinate vector of an algebra element over `F_q`.
pub type AlgElement = Vec<u32>;

/// Default bound on `|A|` for operations that iterate over all elements.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: u64 = 1 << 24;

/// One simple factor `M_n(q^m)` of the semisimple part, with the images in
/// `A`-coordinates of the standard basis `E_ij ⊗ w_k` (index `(i*n+j)*m+k`,
/// `w_k = X^k` in `F_{q^m}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBlock {
    pub n: usize,
    pub m: usize,
    pub basis: Vec<AlgElement>,
}

impl FactorBlock {
    /// Maps a coordinate vector of `M_n(q^m)` into `A`.
    pub fn image(&self, field: &Field, coords: &[u32]) -> AlgElement {
        let d = self.basis[0].len();
        let mut out = vec![0u32; d];
        for (&c, b) in coords.iter().zip(&self.basis) {
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(b) {
                if y != 0 {
                    *x = field.add(*x, field.mul(c, y));
                }
            }
        }
        out
    }

    /// The central idempotent of this factor (its identity matrix).
    pub fn idempotent(&self, field: &Field) -> AlgElement {
        let mut coords = vec![0u32; self.n * self.n * self.m];
        for i in 0..self.n {
            coords[(i * self.n + i) * self.m] = 1;
        }
        self.image(field, &coords)
    }

    pub fn dim(&self) -> usize {
        self.n * self.n * self.m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<FactorBlock>,
    pub radical_basis: Vec<AlgElement>,
    /// Bases of `J^2, J^3, ...`, stopping before the first zero power.
    pub radical_powers: Vec<Vec<AlgElement>>,
}

impl Decomposition {
    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn radical_dim(&self) -> usize {
        self.radical_basis.len()
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical_basis.is_empty()
    }

    /// `(n_i, m_i)` for each factor.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|f| (f.n, f.m)).collect()
    }
}

/// A unital `F_q`-algebra with sparse structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    field: Arc<Field>,
    dim: usize,
    /// `table[i*dim+j]` lists `(l, c)` with `e_i e_j = sum c e_l`.
    table: Vec<Vec<(u32, u32)>>,
    one: AlgElement,
    meta: Option<Decomposition>,
    label: String,
}

impl AlgebraSpec {
    /// Builds an algebra from `(i, j, l, c)` triples; `one` must be a
    /// two-sided identity on the basis.
    pub fn new(
        field: Arc<Field>,
        dim: usize,
        constants: &[(usize, usize, usize, u32)],
        one: AlgElement,
        meta: Option<Decomposition>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("algebra dimension must be positive"));
        }
        if one.len() != dim {
            return Err(Error::invalid("unity has the wrong length"));
        }
        let mut table = vec![Vec::new(); dim * dim];
        for &(i, j, l, c) in constants {
            if i >= dim || j >= dim || l >= dim || c >= field.order() {
                return Err(Error::invalid(format!(
                    "structure constant ({i},{j},{l},{c}) out of range"
                )));
            }
            if c == 0 {
                continue;
            }
            let slot: &mut Vec<(u32, u32)> = &mut table[i * dim + j];
            match slot.iter_mut().find(|(ll, _)| *ll as usize == l) {
                Some(e) => e.1 = field.add(e.1, c),
                None => slot.push((l as u32, c)),
            }
            slot.retain(|&(_, c)| c != 0);
        }
        for slot in table.iter_mut() {
            slot.sort_unstable();
        }
        let spec = AlgebraSpec {
            field,
            dim,
            table,
            one,
            meta,
            label: String::new(),
        };
        for i in 0..dim {
            let e = spec.basis_vector(i);
            if spec.mul(&spec.one, &e) != e || spec.mul(&e, &spec.one) != e {
                return Err(Error::invalid(format!("unity fails on basis element {i}")));
            }
        }
        if let Some(m) = &spec.meta {
            spec.validate_decomposition(m)?;
        }
        Ok(spec)
    }

    fn validate_decomposition(&self, m: &Decomposition) -> Result<()> {
        let sdim: usize = m.factors.iter().map(|f| f.dim()).sum();
        if sdim + m.radical_basis.len() != self.dim {
            return Err(Error::invalid("decomposition dimensions do not add up"));
        }
        let all: Vec<AlgElement> = m
            .factors
            .iter()
            .flat_map(|f| f.basis.iter().cloned())
            .chain(m.radical_basis.iter().cloned())
            .collect();
        if all.iter().any(|v| v.len() != self.dim) {
            return Err(Error::invalid("decomposition vector has the wrong length"));
        }
        if Subspace::span(self.field.clone(), self.dim, &all).dim() != self.dim {
            return Err(Error::invalid(
                "factor images and radical are not complementary",
            ));
        }
        let j = Subspace::span(self.field.clone(), self.dim, &m.radical_basis);
        for b in 0..self.dim {
            let e = self.basis_vector(b);
            for v in &m.radical_basis {
                if !j.contains(&self.mul(&e, v)) || !j.contains(&self.mul(v, &e)) {
                    return Err(Error::invalid("radical is not a two-sided ideal"));
                }
            }
        }
        // J^(len+2) must vanish.
        let mut power = m.radical_basis.clone();
        for _ in 0..=m.radical_powers.len() {
            let mut next = Subspace::zero(self.field.clone(), self.dim);
            for u in &power {
                for v in &m.radical_basis {
                    next.insert(&self.mul(u, v));
                }
            }
            power = next.basis().to_vec();
        }
        if !power.is_empty() {
            return Err(Error::invalid("radical is not nilpotent"));
        }
        Ok(())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> &AlgElement {
        &self.one
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.meta.as_ref()
    }

    pub fn require_decomposition(&self) -> Result<&Decomposition> {
        self.meta
            .as_ref()
            .ok_or_else(|| Error::invalid("algebra has no decomposition data"))
    }

    /// `|A| = q^D` if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.q().checked_pow(self.dim as u32)
    }

    /// `Err(TooLarge)` unless `|A| <= threshold`.
    pub fn require_enumerable(&self, threshold: u64) -> Result<u64> {
        match self.order() {
            Some(n) if n <= threshold => Ok(n),
            _ => Err(Error::too_large(format!(
                "|A| = {}^{} exceeds the exhaustive threshold {threshold}",
                self.q(),
                self.dim
            ))),
        }
    }

    pub fn basis_vector(&self, i: usize) -> AlgElement {
        let mut e = vec![0; self.dim];
        e[i] = 1;
        e
    }

    pub fn zero(&self) -> AlgElement {
        vec![0; self.dim]
    }

    /// Nonzero `(l, c)` with `e_i e_j = sum c e_l`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(u32, u32)] {
        &self.table[i * self.dim + j]
    }

    /// All nonzero structure constants as `(i, j, l, c)`.
    pub fn constants(&self) -> Vec<(usize, usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for &(l, c) in self.basis_product(i, j) {
                    out.push((i, j, l as usize, c));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> AlgElement {
        let k = &self.field;
        let mut out = vec![0u32; self.dim];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &self.table[i * self.dim..(i + 1) * self.dim];
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = k.mul(a, b);
                for &(l, c) in &row[j] {
                    let l = l as usize;
                    out[l] = k.add(out[l], k.mul(ab, c));
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> AlgElement {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> AlgElement {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect()
    }

    pub fn scale(&self, c: u32, x: &[u32]) -> AlgElement {
        x.iter().map(|&a| self.field.mul(c, a)).collect()
    }

    /// Matrix of `v -> x v` on coordinate columns.
    pub fn left_matrix(&self, x: &[u32]) -> FqMatrix {
        let mut m = FqMatrix::zero(self.field.clone(), self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(x, &self.basis_vector(j));
            for (r, &v) in col.iter().enumerate() {
                m.set(r, j, v);
            }
        }
        m
    }

    /// Matrix of `v -> v x` on coordinate columns.
    pub fn right_matrix(&self, x: &[u32]) -> FqMatrix {
        let mut m = FqMatrix::zero(self.field.clone(), self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(&self.basis_vector(j), x);
            for (r, &v) in col.iter().enumerate() {
                m.set(r, j, v);
            }
        }
        m
    }

    /// `x` is a unit iff left multiplication by `x` is bijective.
    pub fn is_unit(&self, x: &[u32]) -> bool {
        self.left_matrix(x).rank() == self.dim
    }

    pub fn inverse(&self, x: &[u32]) -> Option<AlgElement> {
        let inv = self.left_matrix(x).inverse()?;
        Some(
            (0..self.dim)
                .map(|r| {
                    // x^{-1} = L_x^{-1}(1)
                    (0..self.dim).fold(0, |acc, c| {
                        self.field
                            .add(acc, self.field.mul(inv.get(r, c), self.one[c]))
                    })
                })
                .collect(),
        )
    }

    pub fn is_nilpotent(&self, x: &[u32]) -> bool {
        let mut p = x.to_vec();
        let mut k = 1;
        while k < self.dim {
            p = self.mul(&p, &p);
            k *= 2;
        }
        p.iter().all(|&c| c == 0)
    }

    /// Checks `(e_i e_j) e_l = e_i (e_j e_l)` on all basis triples.
    pub fn check_associativity(&self) -> std::result::Result<(), (usize, usize, usize)> {
        for i in 0..self.dim {
            let ei = self.basis_vector(i);
            for j in 0..self.dim {
                let ej = self.basis_vector(j);
                let eij = self.mul(&ei, &ej);
                for l in 0..self.dim {
                    let el = self.basis_vector(l);
                    let lhs = self.mul(&eij, &el);
                    let rhs = self.mul(&ei, &self.mul(&ej, &el));
                    if lhs != rhs {
                        return Err((i, j, l));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `basis` spans a unital subalgebra.
    pub fn is_subalgebra(&self, basis: &[AlgElement]) -> bool {
        let s = Subspace::span(self.field.clone(), self.dim, basis);
        if !s.contains(&self.one) {
            return false;
        }
        let b = s.basis();
        b.iter()
            .all(|u| b.iter().all(|v| s.contains(&self.mul(u, v))))
    }

    /// Iterates all `q^D` elements in integer-encoding order.
    pub fn elements(&self) -> impl Iterator<Item = AlgElement> + '_ {
        let q = self.q();
        let total = self.order().unwrap_or(u64::MAX);
        (0..total).map(move |code| self.element_from_code(code, q))
    }

    pub fn element_from_code(&self, mut code: u64, q: u64) -> AlgElement {
        let mut v = vec![0u32; self.dim];
        for x in v.iter_mut() {
            *x = (code % q) as u32;
            code /= q;
        }
        v
    }

    pub fn element_code(&self, x: &[u32]) -> u64 {
        let q = self.q();
        x.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    /// Units of `A`, by testing every element.
    pub fn units(&self, threshold: u64) -> Result<Vec<AlgElement>> {
        self.require_enumerable(threshold)?;
        Ok(self.elements().filter(|x| self.is_unit(x)).collect())
    }

    /// Structure-constant copy with one constant perturbed; test fixture for
    /// associativity checking.
    pub fn corrupted(&self, i: usize, j: usize, l: usize) -> AlgebraSpec {
        let mut out = self.clone();
        let slot = &mut out.table[i * self.dim + j];
        match slot.iter_mut().find(|(ll, _)| *ll as usize == l) {
            Some(e) => e.1 = self.field.add(e.1, 1),
            None => slot.push((l as u32, 1)),
        }
        slot.retain(|&(_, c)| c != 0);
        out.meta = None;
        out
    }

    /// Span of the semisimple factor images.
    pub fn semisimple_part(&self) -> Result<Subspace> {
        let m = self.require_decomposition()?;
        let vecs: Vec<AlgElement> = m
            .factors
            .iter()
            .flat_map(|f| f.basis.iter().cloned())
            .collect();
        Ok(Subspace::span(self.field.clone(), self.dim, &vecs))
    }

    pub fn radical(&self) -> Result<Subspace> {
        let m = self.require_decomposition()?;
        Ok(Subspace::span(
            self.field.clone(),
            self.dim,
            &m.radical_basis,
        ))
    }

    /// Subspace spanned by `basis` after checking it is a subalgebra.
    pub fn subalgebra(&self, basis: &[AlgElement]) -> Result<Subspace> {
        if !self.is_subalgebra(basis) {
            return Err(Error::invalid("vectors do not span a unital subalgebra"));
        }
        Ok(Subspace::span(self.field.clone(), self.dim, basis))
    }

    pub fn core(&self, b: &[AlgElement]) -> Result<Subspace> {
        ideal::core(self, b)
    }

    /// Whether the subspace is a two-sided ideal.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        (0..self.dim).all(|i| {
            let e = self.basis_vector(i);
            s.basis()
                .iter()
                .all(|v| s.contains(&self.mul(&e, v)) && s.contains(&self.mul(v, &e)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m22_basics() {
        let a = simple_algebra(2, 1, 2).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.order(), Some(16));
        assert!(a.check_associativity().is_ok());
        let units = a.units(1 << 10).unwrap();
        assert_eq!(units.len(), 6);
        let nil = a.elements().filter(|x| a.is_nilpotent(x)).count();
        assert_eq!(nil, 4);
    }

    #[test]
    fn inverse_works() {
        let a = simple_algebra(2, 1, 3).unwrap();
        for x in a.units(1 << 10).unwrap() {
            let y = a.inverse(&x).unwrap();
            assert_eq!(a.mul(&x, &y), *a.one());
            assert_eq!(a.mul(&y, &x), *a.one());
        }
    }

    #[test]
    fn corrupted_tensor_fails() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let bad = a.corrupted(1, 2, 0);
        assert!(bad.check_associativity().is_err());
    }
}
