//! Bit-packed elimination over GF(2): one `u64` word per row, bit `j` = column `j`.

/// Rank of the packed rows; the slice is used as scratch space.
pub fn rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for col in 0..64 {
        let bit = 1u64 << col;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Echelon basis keyed by leading (highest) bit, for incremental span tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: [u64; 64],
    filled: u64,
    dim: usize,
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon {
            rows: [0; 64],
            filled: 0,
            dim: 0,
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros();
            if self.filled >> top & 1 == 0 {
                return v;
            }
            v ^= self.rows[top as usize];
        }
        0
    }

    /// Inserts `v`, returning the reduced nonzero vector that was added.
    pub fn insert(&mut self, v: u64) -> Option<u64> {
        let r = self.reduce(v);
        if r == 0 {
            return None;
        }
        let top = 63 - r.leading_zeros();
        self.rows[top as usize] = r;
        self.filled |= 1 << top;
        self.dim += 1;
        Some(r)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Fully reduced basis, sorted by leading bit; a canonical form of the span.
    pub fn canonical(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0..64)
            .filter(|&top| self.filled >> top & 1 == 1)
            .map(|top| self.rows[top])
            .collect();
        for j in 0..out.len() {
            let p = 63 - out[j].leading_zeros();
            for i in 0..out.len() {
                if i != j && out[i] >> p & 1 == 1 {
                    out[i] ^= out[j];
                }
            }
        }
        out
    }
}
