//! Finite-dimensional open-system machinery: density operators, the
//! Lindblad generator, fixed-step RK4 propagation and the tensor-product
//! helpers used to build and reduce composite systems.
//!
//! All matrices are dense. The systems in scope are at most a two-level
//! system times a spin 7/2 (dimension 16).

mod composite;
mod density;
mod lindblad;
mod propagate;

pub use composite::{identity, kron, partial_trace, Subsystem};
pub use density::DensityOperator;
pub use lindblad::{lindblad_rhs, CollapseChannel, LindbladGenerator};
pub use propagate::{
    propagate, ConstantHamiltonian, FnHamiltonian, PropagateOptions, StepDiagnostics,
    TimeDependentHamiltonian, Trajectory,
};

use crate::CMatrix;
use num_complex::Complex64;

/// Largest elementwise deviation from hermiticity, max |A - A†|.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest absolute matrix element.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Commutator AB - BA.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Eigenvalues of a hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
