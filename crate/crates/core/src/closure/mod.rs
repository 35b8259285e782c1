//! Unital subalgebra generated by a set of elements, generation tests, and
//! the exact minimal number of generators by bounded search.

mod kernel;
mod search;

use crate::algebra::{AlgElement, AlgebraSpec};

pub use kernel::{GeneralKernel, Gf2Kernel, Kernel};
pub use search::{d_exact, d_exact_with, DSearchConfig, DEFAULT_D_BUDGET, DEFAULT_D_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub dim: usize,
    /// Echelonised basis of the generated subalgebra.
    pub basis: Vec<AlgElement>,
    pub generates: bool,
    pub rounds: usize,
}

/// Closure state: the echelon and the basis vectors it holds.
pub struct Closure<K: Kernel> {
    pub echelon: K::Echelon,
    pub basis: Vec<K::Vector>,
    pub rounds: usize,
}

/// Seeds the span with `1` and `seeds`, then multiplies each round's new
/// vectors against the whole basis (both orders) until nothing new appears.
/// With `stop_full`, returns as soon as the span is everything.
pub fn close<K: Kernel>(k: &K, seeds: &[K::Vector], stop_full: bool) -> Closure<K> {
    let d = k.dim();
    let mut echelon = k.echelon();
    let mut basis: Vec<K::Vector> = Vec::with_capacity(d);
    let mut frontier: Vec<K::Vector> = Vec::new();
    for v in std::iter::once(k.one()).chain(seeds.iter().cloned()) {
        if let Some(r) = k.insert(&mut echelon, &v) {
            basis.push(r.clone());
            frontier.push(r);
        }
    }
    let mut rounds = 0;
    while !frontier.is_empty() && !(stop_full && basis.len() == d) {
        rounds += 1;
        let mut fresh = Vec::new();
        'outer: for f in &frontier {
            let n = basis.len();
            for idx in 0..n {
                let b = basis[idx].clone();
                for prod in [k.mul(f, &b), k.mul(&b, f)] {
                    if let Some(r) = k.insert(&mut echelon, &prod) {
                        basis.push(r.clone());
                        fresh.push(r);
                        if stop_full && basis.len() == d {
                            break 'outer;
                        }
                    }
                }
            }
        }
        frontier = fresh;
    }
    Closure {
        echelon,
        basis,
        rounds,
    }
}

/// Kernel chosen for an algebra: bit-packed for GF(2) up to dimension 64.
pub enum Engine {
    Gf2(Gf2Kernel),
    General(GeneralKernel),
}

/// Runs `$body` with `$k` bound to the concrete kernel inside an [`Engine`].
#[macro_export]
macro_rules! with_kernel {
    ($engine:expr, $k:ident => $body:expr) => {
        match $engine {
            $crate::closure::Engine::Gf2($k) => $body,
            $crate::closure::Engine::General($k) => $body,
        }
    };
}

impl Engine {
    pub fn new(spec: &AlgebraSpec) -> Engine {
        match Gf2Kernel::new(spec) {
            Some(k) => Engine::Gf2(k),
            None => Engine::General(GeneralKernel::new(spec)),
        }
    }

    pub fn dim(&self) -> usize {
        with_kernel!(self, k => k.dim())
    }

    pub fn generated_subalgebra(&self, xs: &[AlgElement]) -> ClosureResult {
        with_kernel!(self, k => {
            let seeds: Vec<_> = xs.iter().map(|x| k.from_coords(x)).collect();
            let c = close(k, &seeds, false);
            let basis = c.basis.iter().map(|v| k.to_coords(v)).collect::<Vec<_>>();
            ClosureResult { dim: basis.len(), generates: basis.len() == k.dim(), basis, rounds: c.rounds }
        })
    }

    /// Dimension of the generated subalgebra.
    pub fn closure_dim(&self, xs: &[AlgElement]) -> usize {
        with_kernel!(self, k => {
            let seeds: Vec<_> = xs.iter().map(|x| k.from_coords(x)).collect();
            close(k, &seeds, false).basis.len()
        })
    }

    pub fn generates(&self, xs: &[AlgElement]) -> bool {
        with_kernel!(self, k => {
            let seeds: Vec<_> = xs.iter().map(|x| k.from_coords(x)).collect();
            close(k, &seeds, true).basis.len() == k.dim()
        })
    }

    /// Generation test for elements given by integer codes (base-`q`
    /// digits, coordinate 0 least significant).
    pub fn generates_codes(&self, codes: &[u64], q: u64) -> bool {
        match self {
            Engine::Gf2(k) => close(k, codes, true).basis.len() == k.dim(),
            Engine::General(k) => {
                let seeds: Vec<Vec<u32>> = codes
                    .iter()
                    .map(|&c| {
                        let mut x = c;
                        (0..k.dim())
                            .map(|_| {
                                let d = (x % q) as u32;
                                x /= q;
                                d
                            })
                            .collect()
                    })
                    .collect();
                close(k, &seeds, true).basis.len() == k.dim()
            }
        }
    }
}

pub fn generated_subalgebra(spec: &AlgebraSpec, xs: &[AlgElement]) -> ClosureResult {
    Engine::new(spec).generated_subalgebra(xs)
}

pub fn generates(spec: &AlgebraSpec, xs: &[AlgElement]) -> bool {
    Engine::new(spec).generates(xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_algebra, AlgebraSpec};

    fn unit(spec: &AlgebraSpec, idx: &[usize]) -> AlgElement {
        let mut v = spec.zero();
        for &i in idx {
            v[i] = 1;
        }
        v
    }

    #[test]
    fn empty_set_gives_scalars() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let r = generated_subalgebra(&a, &[]);
        assert_eq!(r.dim, 1);
        assert!(!r.generates);
    }

    #[test]
    fn matrix_units_generate() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let r = generated_subalgebra(&a, &[unit(&a, &[1]), unit(&a, &[2])]);
        assert_eq!(r.dim, 4);
        assert!(r.generates);
        assert!(generates(&a, &[unit(&a, &[1, 2]), unit(&a, &[0])]));
    }

    #[test]
    fn field_generator() {
        let a = simple_algebra(1, 2, 2).unwrap();
        assert!(generates(&a, &[unit(&a, &[1])]));
    }

    #[test]
    fn single_elements_never_generate_m2() {
        for q in [2, 3] {
            let a = simple_algebra(2, 1, q).unwrap();
            let e = Engine::new(&a);
            assert!(a.elements().all(|x| !e.generates(&[x])));
        }
    }

    #[test]
    fn kernels_agree() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let gk = GeneralKernel::new(&a);
        let bk = Gf2Kernel::new(&a).unwrap();
        for x in 0..16u64 {
            for y in 0..16u64 {
                let xc = bk.to_coords(&x);
                let yc = bk.to_coords(&y);
                assert_eq!(bk.to_coords(&bk.mul(&x, &y)), gk.mul(&xc, &yc));
                assert_eq!(gk.mul(&xc, &yc), a.mul(&xc, &yc));
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let a = simple_algebra(3, 1, 2).unwrap();
        let e = Engine::new(&a);
        let r = e.generated_subalgebra(&[unit(&a, &[1, 5])]);
        let again = e.generated_subalgebra(&r.basis);
        assert_eq!(again.dim, r.dim);
        assert_eq!(again.rounds, 1);
    }

    #[test]
    fn codes_match_coords() {
        let a = simple_algebra(2, 1, 3).unwrap();
        let e = Engine::new(&a);
        for (x, y) in [(5u64, 17u64), (1, 3), (40, 77)] {
            let xs = [a.element_from_code(x, 3), a.element_from_code(y, 3)];
            assert_eq!(e.generates_codes(&[x, y], 3), e.generates(&xs));
        }
    }
}
