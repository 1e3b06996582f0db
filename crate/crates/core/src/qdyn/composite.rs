use num_complex::Complex64;

use super::DensityOperator;
use crate::{CMatrix, Error, Result};

/// Factor of a bipartite space A ⊗ B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product a ⊗ b; the index of a varies slowest.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Reduced state on the kept factor of a state on A ⊗ B.
pub fn partial_trace(
    rho: &DensityOperator,
    keep: Subsystem,
    dims: (usize, usize),
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: "factor dimensions product",
            left_dim: da * db,
            right: "density operator",
            right_dim: rho.dim(),
        });
    }
    let m = rho.matrix();
    let reduced = match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db)
                .map(|k| m[(i * db + k, j * db + k)])
                .sum::<Complex64>()
        }),
        Subsystem::B => CMatrix::from_fn(db, db, |i, j| {
            (0..da)
                .map(|k| m[(k * db + i, k * db + j)])
                .sum::<Complex64>()
        }),
    };
    Ok(DensityOperator::from_propagated(reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::{hermitian_eigenvalues, trace};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identities_compose() {
        let k = kron(&identity(2), &identity(4));
        assert_eq!(k, identity(8));
    }

    #[test]
    fn sigma_z_times_identity_spectrum() {
        let sz = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let ev = hermitian_eigenvalues(&kron(&sz, &identity(2)));
        assert_eq!(ev.len(), 4);
        for (got, want) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_state_reduces_to_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let bell = DensityOperator::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&bell, keep, (2, 2)).unwrap();
            assert!((r.element(0, 0).re - 0.5).abs() < 1e-15);
            assert!((r.element(1, 1).re - 0.5).abs() < 1e-15);
            assert!(r.element(0, 1).norm() < 1e-15);
            assert!((trace(r.matrix()).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn inconsistent_dims_rejected() {
        let rho = DensityOperator::maximally_mixed(6).unwrap();
        assert!(partial_trace(&rho, Subsystem::A, (2, 2)).is_err());
        assert!(partial_trace(&rho, Subsystem::B, (2, 3)).is_ok());
    }
}
