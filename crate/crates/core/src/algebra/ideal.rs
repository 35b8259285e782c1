use super::{AlgElement, AlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{FqMatrix, Subspace};

/// Largest two-sided ideal of `A` inside the subalgebra spanned by `b`:
/// iterate `I <- {v in I : e_i v in I and v e_i in I for all basis e_i}`.
pub(super) fn core(a: &AlgebraSpec, b: &[AlgElement]) -> Result<Subspace> {
    let field = a.field().clone();
    let mut cur = a.subalgebra(b)?;
    loop {
        let basis = cur.basis().to_vec();
        if basis.is_empty() {
            return Ok(cur);
        }
        // Columns: residuals (mod I) of e_i u_k and u_k e_i, stacked over i.
        let d = a.dim();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for i in 0..d {
            let e = a.basis_vector(i);
            let left: Vec<AlgElement> = basis.iter().map(|u| cur.reduce(&a.mul(&e, u))).collect();
            let right: Vec<AlgElement> = basis.iter().map(|u| cur.reduce(&a.mul(u, &e))).collect();
            for side in [left, right] {
                for r in 0..d {
                    let row: Vec<u32> = side.iter().map(|v| v[r]).collect();
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return Ok(cur);
        }
        let m = FqMatrix::from_rows(field.clone(), &rows)?;
        let kernel = m.kernel();
        let next: Vec<AlgElement> = kernel
            .iter()
            .map(|c| {
                crate::linalg::combine(&field, d, c.iter().copied().zip(basis.iter().cloned()))
            })
            .collect();
        let next = Subspace::span(field.clone(), d, &next);
        if next.dim() == cur.dim() {
            return Ok(cur);
        }
        if next.dim() > cur.dim() {
            return Err(Error::invalid("core iteration grew"));
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::{parabolic, product, simple_algebra, AlgElement};

    #[test]
    fn core_of_whole_algebra() {
        let a = simple_algebra(2, 1, 2).unwrap();
        let all: Vec<AlgElement> = (0..4).map(|i| a.basis_vector(i)).collect();
        assert_eq!(a.core(&all).unwrap().dim(), 4);
    }

    #[test]
    fn parabolic_has_trivial_core() {
        let a = simple_algebra(2, 1, 3).unwrap();
        // upper triangular: E11, E12, E22
        let b = vec![a.basis_vector(0), a.basis_vector(1), a.basis_vector(3)];
        assert_eq!(a.core(&b).unwrap().dim(), 0);
    }

    #[test]
    fn core_of_factor_local_subalgebra() {
        // A = (M_2(2) x k) ⊕ J with J from P(1,1;1,2) glued on the second factor.
        let s1 = simple_algebra(2, 1, 2).unwrap();
        let p = parabolic(&[1, 1], 1, 2).unwrap();
        let a = product(&[s1, p]).unwrap();
        // B = (upper triangular in M_2(2)) x P(1,1)
        let mut b: Vec<AlgElement> = vec![a.basis_vector(0), a.basis_vector(1), a.basis_vector(3)];
        b.extend((4..7).map(|i| a.basis_vector(i)));
        let c = a.core(&b).unwrap();
        assert_eq!(c.dim(), 3);
        for i in 4..7 {
            assert!(c.contains(&a.basis_vector(i)));
        }
    }

    #[test]
    fn non_subalgebra_rejected() {
        let a = simple_algebra(2, 1, 2).unwrap();
        assert!(a.core(&[a.basis_vector(1)]).is_err());
    }
}
