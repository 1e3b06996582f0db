use num_complex::Complex64;

use super::{max_abs, DensityOperator};
use crate::{CMatrix, Error, Result};

/// Collapse operator `c` with rate `k` (rad/s), contributing
/// k (c ρ c† − ½{c†c, ρ}) to the master equation.
#[derive(Debug, Clone)]
pub struct CollapseChannel {
    operator: CMatrix,
    rate: f64,
}

impl CollapseChannel {
    pub fn new(operator: CMatrix, rate: f64) -> Result<Self> {
        if !operator.is_square() {
            return Err(Error::InvalidInput(
                "collapse operator must be square".into(),
            ));
        }
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidInput(format!(
                "collapse rate must be finite and non-negative, got {rate}"
            )));
        }
        Ok(Self { operator, rate })
    }

    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn dim(&self) -> usize {
        self.operator.nrows()
    }

    /// Same channel acting on the first factor of a product space, c ⊗ 1.
    pub fn extend_left(&self, other_dim: usize) -> Self {
        Self {
            operator: super::kron(&self.operator, &super::identity(other_dim)),
            rate: self.rate,
        }
    }
}

/// Precomputed Lindblad generator for a fixed channel set.
///
/// Uses the split form −i(H_eff ρ − ρ H_eff†) + Σ k c ρ c† with
/// H_eff = H − (i/2) Σ k c†c.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    dim: usize,
    jumps: Vec<(CMatrix, CMatrix)>,
    anti_hermitian: CMatrix,
    total_rate: f64,
}

impl LindbladGenerator {
    pub fn new(dim: usize, channels: &[CollapseChannel]) -> Result<Self> {
        let mut anti_hermitian = CMatrix::zeros(dim, dim);
        let mut jumps = Vec::with_capacity(channels.len());
        let mut total_rate = 0.0;
        for ch in channels {
            if ch.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: "collapse operator",
                    left_dim: ch.dim(),
                    right: "density operator",
                    right_dim: dim,
                });
            }
            if ch.rate == 0.0 {
                continue;
            }
            let scaled = &ch.operator * Complex64::new(ch.rate.sqrt(), 0.0);
            let cdc = scaled.adjoint() * &scaled;
            total_rate += max_abs(&cdc);
            anti_hermitian += cdc * Complex64::new(0.0, -0.5);
            jumps.push((scaled.adjoint(), scaled));
        }
        Ok(Self {
            dim,
            jumps,
            anti_hermitian,
            total_rate,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Σ_α k_α ‖c_α† c_α‖_max, the dissipative rate scale used by the step rule.
    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    /// Writes dρ/dt into `out`. `h_eff` comes from [`Self::effective`],
    /// `h_eff_dag` is its adjoint and `scratch` is a dim×dim work matrix.
    pub(crate) fn apply_into(
        &self,
        h_eff: &CMatrix,
        h_eff_dag: &CMatrix,
        rho: &CMatrix,
        out: &mut CMatrix,
        scratch: &mut CMatrix,
    ) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        out.gemm(Complex64::new(0.0, -1.0), h_eff, rho, zero);
        out.gemm(Complex64::new(0.0, 1.0), rho, h_eff_dag, one);
        for (c_dag, c) in &self.jumps {
            scratch.gemm(one, c, rho, zero);
            out.gemm(one, scratch, c_dag, one);
        }
    }

    /// H_eff = H − (i/2) Σ k c†c.
    pub(crate) fn effective(&self, h: &CMatrix) -> CMatrix {
        h + &self.anti_hermitian
    }

    /// dρ/dt for a given Hamiltonian.
    pub fn rhs(&self, h: &CMatrix, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        let mut scratch = CMatrix::zeros(self.dim, self.dim);
        let h_eff = self.effective(h);
        self.apply_into(&h_eff, &h_eff.adjoint(), rho, &mut out, &mut scratch);
        out
    }
}

/// −i[H, ρ] + Σ_α k_α (c ρ c† − ½{c†c, ρ}).
pub fn lindblad_rhs(
    h: &CMatrix,
    channels: &[CollapseChannel],
    rho: &DensityOperator,
) -> Result<CMatrix> {
    let dim = rho.dim();
    if !h.is_square() || h.nrows() != dim {
        return Err(Error::DimensionMismatch {
            left: "hamiltonian",
            left_dim: h.nrows(),
            right: "density operator",
            right_dim: dim,
        });
    }
    let generator = LindbladGenerator::new(dim, channels)?;
    Ok(generator.rhs(h, rho.matrix()))
}
