use crate::qdyn::{
    propagate, DensityOperator, PropagateOptions, TimeDependentHamiltonian, Trajectory,
};
use crate::spin::{quadrupole_hamiltonian, HalfInt, NqiTensor};
use crate::{CMatrix, Result};

use super::plan::SpinSetup;

/// Spin Hamiltonian H_B + H_Q(Q0) + H_Q(Q1) sin(ωt) with ω = `drive_angular`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDrive {
    pub setup: SpinSetup,
    /// Magnetic-frame constant tensor.
    pub q0: NqiTensor,
    /// Magnetic-frame modulated tensor.
    pub q1: NqiTensor,
    pub drive_angular: f64,
}

struct HarmonicHamiltonian {
    constant: CMatrix,
    modulated: CMatrix,
    omega: f64,
}

impl TimeDependentHamiltonian for HarmonicHamiltonian {
    fn dim(&self) -> usize {
        self.constant.nrows()
    }

    fn at(&self, t: f64) -> CMatrix {
        &self.constant + &self.modulated * num_complex::Complex64::new((self.omega * t).sin(), 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct SpinRun {
    pub trajectory: Trajectory,
    /// Projection of each basis state, descending.
    pub projections: Vec<HalfInt>,
}

impl SpinRun {
    pub fn times(&self) -> &[f64] {
        &self.trajectory.times
    }

    pub fn population(&self, m: HalfInt) -> Option<Vec<f64>> {
        let i = self.projections.iter().position(|&p| p == m)?;
        Some(self.trajectory.population_series(i))
    }
}

/// Unitary spin evolution from |initial⟩ under the effective drive.
pub fn simulate_spin_effective(
    drive: &SpinDrive,
    initial: HalfInt,
    times: &[f64],
    options: &PropagateOptions,
) -> Result<SpinRun> {
    let spin = drive.setup.spin();
    let h = HarmonicHamiltonian {
        constant: drive.setup.zeeman() + quadrupole_hamiltonian(&drive.q0, spin),
        modulated: quadrupole_hamiltonian(&drive.q1, spin),
        omega: drive.drive_angular,
    };
    let rho0 = DensityOperator::basis(spin.dim(), spin.index_of(initial)?)?;
    let trajectory = propagate(&h, &[], &rho0, times, options)?;
    Ok(SpinRun {
        trajectory,
        projections: spin.projections(),
    })
}
