//! Multiplication and echelon back ends for the closure engine.

use crate::algebra::AlgebraSpec;
use crate::linalg::bits;

pub trait Kernel: Sync + Send {
    type Vector: Clone + Send + Sync;
    type Echelon: Clone + Send;

    fn dim(&self) -> usize;
    fn one(&self) -> Self::Vector;
    fn from_coords(&self, x: &[u32]) -> Self::Vector;
    fn to_coords(&self, v: &Self::Vector) -> Vec<u32>;
    fn mul(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;
    fn echelon(&self) -> Self::Echelon;
    /// Inserts `v`; returns the reduced vector when the span grew.
    fn insert(&self, e: &mut Self::Echelon, v: &Self::Vector) -> Option<Self::Vector>;
    fn contains(&self, e: &Self::Echelon, v: &Self::Vector) -> bool;
    fn echelon_dim(&self, e: &Self::Echelon) -> usize;
}

/// GF(2) algebras of dimension at most 64: vectors are bit masks and
/// `x * y` XORs precomputed byte-chunk products.
pub struct Gf2Kernel {
    dim: usize,
    chunks: usize,
    one: u64,
    /// `table[(i * chunks + c) * 256 + byte]` = `e_i * (byte << 8c)`.
    table: Vec<u64>,
}

impl Gf2Kernel {
    pub fn new(spec: &AlgebraSpec) -> Option<Gf2Kernel> {
        let dim = spec.dim();
        if spec.q() != 2 || dim > 64 {
            return None;
        }
        let chunks = dim.div_ceil(8);
        let mut prod = vec![0u64; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for &(l, c) in spec.basis_product(i, j) {
                    if c & 1 == 1 {
                        prod[i * dim + j] ^= 1 << l;
                    }
                }
            }
        }
        let mut table = vec![0u64; dim * chunks * 256];
        for i in 0..dim {
            for c in 0..chunks {
                for byte in 0..256usize {
                    let mut acc = 0u64;
                    for b in 0..8 {
                        let j = c * 8 + b;
                        if byte >> b & 1 == 1 && j < dim {
                            acc ^= prod[i * dim + j];
                        }
                    }
                    table[(i * chunks + c) * 256 + byte] = acc;
                }
            }
        }
        let one = spec
            .one()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c as u64 & 1) << i));
        Some(Gf2Kernel {
            dim,
            chunks,
            one,
            table,
        })
    }
}

impl Kernel for Gf2Kernel {
    type Vector = u64;
    type Echelon = bits::Echelon;

    fn dim(&self) -> usize {
        self.dim
    }

    fn one(&self) -> u64 {
        self.one
    }

    fn from_coords(&self, x: &[u32]) -> u64 {
        x.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c as u64 & 1) << i))
    }

    fn to_coords(&self, v: &u64) -> Vec<u32> {
        (0..self.dim).map(|i| (v >> i & 1) as u32).collect()
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        let mut out = 0u64;
        let mut x = *a;
        let bytes: [usize; 8] = std::array::from_fn(|c| (*b >> (8 * c) & 0xff) as usize);
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            let base = i * self.chunks * 256;
            for (c, &byte) in bytes.iter().enumerate().take(self.chunks) {
                out ^= self.table[base + c * 256 + byte];
            }
        }
        out
    }

    fn echelon(&self) -> bits::Echelon {
        bits::Echelon::new()
    }

    fn insert(&self, e: &mut bits::Echelon, v: &u64) -> Option<u64> {
        e.insert(*v)
    }

    fn contains(&self, e: &bits::Echelon, v: &u64) -> bool {
        e.contains(*v)
    }

    fn echelon_dim(&self, e: &bits::Echelon) -> usize {
        e.dim()
    }
}

/// Any `F_q` and dimension: vectors of element codes with `q × q` lookup
/// tables for field arithmetic.
pub struct GeneralKernel {
    dim: usize,
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    table: Vec<Vec<(u32, u32)>>,
    one: Vec<u32>,
}

/// Echelon rows indexed by pivot column, each normalised to a leading 1.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    rows: Vec<Option<Vec<u32>>>,
    dim: usize,
}

impl GeneralKernel {
    pub fn new(spec: &AlgebraSpec) -> GeneralKernel {
        let k = spec.field();
        let q = k.order() as usize;
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = k.add(a as u32, b as u32);
                mul[a * q + b] = k.mul(a as u32, b as u32);
            }
        }
        let neg = (0..q as u32).map(|a| k.neg(a)).collect();
        let inv = (0..q as u32)
            .map(|a| if a == 0 { 0 } else { k.inv(a) })
            .collect();
        let dim = spec.dim();
        let table = (0..dim * dim)
            .map(|ij| spec.basis_product(ij / dim, ij % dim).to_vec())
            .collect();
        GeneralKernel {
            dim,
            q,
            add,
            mul,
            neg,
            inv,
            table,
            one: spec.one().clone(),
        }
    }

    #[inline]
    fn fadd(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn fmul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    fn reduce(&self, e: &RowEchelon, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for col in 0..self.dim {
            let f = w[col];
            if f == 0 {
                continue;
            }
            if let Some(row) = &e.rows[col] {
                let nf = self.neg[f as usize];
                for (x, &r) in w.iter_mut().zip(row).skip(col) {
                    if r != 0 {
                        *x = self.fadd(*x, self.fmul(nf, r));
                    }
                }
            }
        }
        w
    }
}

impl Kernel for GeneralKernel {
    type Vector = Vec<u32>;
    type Echelon = RowEchelon;

    fn dim(&self) -> usize {
        self.dim
    }

    fn one(&self) -> Vec<u32> {
        self.one.clone()
    }

    fn from_coords(&self, x: &[u32]) -> Vec<u32> {
        x.to_vec()
    }

    fn to_coords(&self, v: &Vec<u32>) -> Vec<u32> {
        v.clone()
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let d = self.dim;
        let mut out = vec![0u32; d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &self.table[i * d..(i + 1) * d];
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = self.fmul(x, y);
                for &(l, c) in &row[j] {
                    let l = l as usize;
                    out[l] = self.fadd(out[l], self.fmul(xy, c));
                }
            }
        }
        out
    }

    fn echelon(&self) -> RowEchelon {
        RowEchelon {
            rows: vec![None; self.dim],
            dim: 0,
        }
    }

    fn insert(&self, e: &mut RowEchelon, v: &Vec<u32>) -> Option<Vec<u32>> {
        let mut w = self.reduce(e, v);
        let pc = w.iter().position(|&x| x != 0)?;
        let inv = self.inv[w[pc] as usize];
        for x in w.iter_mut() {
            *x = self.fmul(*x, inv);
        }
        e.rows[pc] = Some(w.clone());
        e.dim += 1;
        Some(w)
    }

    fn contains(&self, e: &RowEchelon, v: &Vec<u32>) -> bool {
        self.reduce(e, v).iter().all(|&x| x == 0)
    }

    fn echelon_dim(&self, e: &RowEchelon) -> usize {
        e.dim
    }
}
