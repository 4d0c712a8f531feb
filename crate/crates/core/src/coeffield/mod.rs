//! The residue field k = ℚ(th1, …, thM) and the dual numbers k[ε].

mod dual;
mod kelem;
pub mod poly;

pub use dual::DualNumber;
pub use kelem::KElem;

/// A 2×2 matrix over k, row-major.
pub type Mat2 = [[KElem; 2]; 2];

/// Whether `m` has a repeated eigenvalue: `(tr m)² = 4·det m`, decided exactly.
pub fn repeated_eigenvalue_check(m: &Mat2) -> bool {
    let tr = &m[0][0] + &m[1][1];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    (&tr * &tr) == (&KElem::from_int(4) * &det)
}

/// Matrix of multiplication by `x` on k[ε] in the k-basis {1, ε}.
///
/// Columns are the images of 1 and ε: `x·1 = a + bε`, `x·ε = aε`.
pub fn multiplication_matrix(x: &DualNumber) -> Mat2 {
    [[x.a.clone(), KElem::zero()], [x.b.clone(), x.a.clone()]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> KElem {
        KElem::from_int(n)
    }

    #[test]
    fn eigenvalue_examples() {
        let x = KElem::symbol(1);
        let y = KElem::symbol(2);
        assert!(repeated_eigenvalue_check(&[[x.clone(), y], [k(0), x]]));
        assert!(repeated_eigenvalue_check(&[[k(1), k(0)], [k(0), k(1)]]));
        assert!(!repeated_eigenvalue_check(&[[k(1), k(0)], [k(0), k(2)]]));
    }

    #[test]
    fn dual_multiplication_matrix_is_unipotent_shape() {
        let x = DualNumber::new(KElem::symbol(1), KElem::symbol(2));
        assert!(repeated_eigenvalue_check(&multiplication_matrix(&x)));
    }
}
