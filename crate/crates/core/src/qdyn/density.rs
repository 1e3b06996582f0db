use num_complex::Complex64;

use super::{hermitian_eigenvalues, hermiticity_residual, trace};
use crate::{CMatrix, Error, Result};

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (smallest eigenvalue ≥ −1e-10).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_residual(&matrix);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "hermiticity residual {herm:e}"
            )));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let min_ev = hermitian_eigenvalues(&matrix)[0];
        if min_ev < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_ev:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that the propagator has already hermitized and
    /// renormalized. Positivity is tracked by the propagation diagnostics.
    pub(crate) fn from_propagated(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// Projector onto basis state `index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Ok(Self { matrix: m })
    }

    /// |ψ⟩⟨ψ| for a state vector, normalized here.
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if state.is_empty() || norm2 == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let n = state.len();
        let m = CMatrix::from_fn(n, n, |i, j| state[i] * state[j].conj() / norm2);
        Ok(Self { matrix: m })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity("dimension must be positive".into()));
        }
        Ok(Self {
            matrix: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        })
    }

    /// Diagonal state with the given populations (must be ≥ 0 and sum to 1).
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        let m = CMatrix::from_fn(p.len(), p.len(), |i, j| {
            if i == j {
                Complex64::new(p[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn population(&self, i: usize) -> f64 {
        self.matrix[(i, i)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Matrix element ⟨i|ρ|j⟩.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// tr{ρ O}.
    pub fn expectation(&self, op: &CMatrix) -> Result<Complex64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: "observable",
                left_dim: op.nrows(),
                right: "density operator",
                right_dim: self.dim(),
            });
        }
        Ok(trace(&(&self.matrix * op)))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.matrix * &self.matrix)).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn rejects_wrong_trace() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityOperator::new(m).is_err());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.1, 0.0)]);
        assert!(DensityOperator::new(m).is_err());
    }

    #[test]
    fn pure_state_is_normalized_projector() {
        let rho = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!((rho.element(0, 1) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn maximally_mixed_has_minimal_purity() {
        let rho = DensityOperator::maximally_mixed(4).unwrap();
        assert!((rho.purity() - 0.25).abs() < 1e-15);
        assert!((rho.min_eigenvalue() - 0.25).abs() < 1e-14);
    }
}
