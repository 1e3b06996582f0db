use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::qdyn::{identity, kron, propagate, DensityOperator, PropagateOptions, Trajectory};
use crate::spin::{ordered_transition, quadrupole_hamiltonian, HalfInt};
use crate::{CMatrix, Error, Result};

use super::nqi::StatePairNqi;
use super::plan::{OnerPlan, SpinSetup};
use super::two_level::{
    period_grid, two_level_channels, two_level_hamiltonian, PulsedHamiltonian, TwoLevelParams,
};
use super::two_level::{EXCITED, GROUND};

/// Smallest allowed ratio between adjacent rate tiers in scaled units.
pub const MIN_TIER_RATIO: f64 = 30.0;
pub const DEFAULT_TIER_RATIO: f64 = 30.0;

/// A problem mapped onto a compressed rate hierarchy.
///
/// The two-level rates are kept. The Zeeman splitting is replaced by one
/// with |Δm|·ω_Z = min(Ω, Γ)/r and the quadrupole tensors are rescaled so
/// that their largest element equals ω_Z/r. Spin Rabi frequencies scale
/// with the tensors, so a physical estimate is the scaled one divided by
/// `q_scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledProblem {
    pub pair: StatePairNqi,
    pub setup: SpinSetup,
    pub ratio: f64,
    pub q_scale: f64,
    pub zeeman_scale: f64,
}

impl ScaledProblem {
    pub fn new(
        pair: &StatePairNqi,
        setup: &SpinSetup,
        params: &TwoLevelParams,
        transition: (HalfInt, HalfInt),
        ratio: f64,
    ) -> Result<Self> {
        if !(ratio >= MIN_TIER_RATIO) || !ratio.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tier ratio must be at least {MIN_TIER_RATIO}, got {ratio}"
            )));
        }
        let (_, _, dm) = ordered_transition(transition.0, transition.1, setup.spin())?;
        let fast = params.omega_rabi().abs().min(params.decay());
        if !(fast > 0.0) {
            return Err(Error::InvalidInput(
                "scaled units need a non-zero Rabi frequency and decay rate".into(),
            ));
        }
        let larmor = fast / (ratio * dm as f64);
        let sign = if setup.larmor() < 0.0 { -1.0 } else { 1.0 };
        let scaled_setup = SpinSetup::new(setup.spin().two_i(), sign * larmor / (2.0 * PI), 1.0)?;
        let q_max = pair.max_abs();
        let q_scale = if q_max > 0.0 {
            larmor / ratio / q_max
        } else {
            1.0
        };
        let zeeman_scale = if setup.larmor() != 0.0 {
            larmor / setup.larmor().abs()
        } else {
            1.0
        };
        Ok(Self {
            pair: pair.scaled(q_scale),
            setup: scaled_setup,
            ratio,
            q_scale,
            zeeman_scale,
        })
    }

    pub fn to_physical_rabi(&self, scaled_hz: f64) -> f64 {
        scaled_hz / self.q_scale
    }
}

/// Output of a coupled electron–spin run.
#[derive(Debug, Clone)]
pub struct CoupledRun {
    pub trajectory: Trajectory,
    pub projections: Vec<HalfInt>,
    /// spin_populations[i][k]: population of projections[i] at sample k.
    pub spin_populations: Vec<Vec<f64>>,
    pub rho_ee: Vec<f64>,
    pub samples_per_period: usize,
}

impl CoupledRun {
    pub fn times(&self) -> &[f64] {
        &self.trajectory.times
    }

    pub fn population(&self, m: HalfInt) -> Option<&[f64]> {
        let i = self.projections.iter().position(|&p| p == m)?;
        Some(&self.spin_populations[i])
    }
}

fn projector(i: usize) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    p[(i, i)] = Complex64::new(1.0, 0.0);
    p
}

/// Propagates the two-level system and the nuclear spin together on the
/// 2(2I+1)-dimensional product space, two-level factor first.
///
/// The two-level part is in the frame rotating with the optical carrier.
/// An off-diagonal ⟨e|Q|g⟩ block oscillates at the carrier in that frame
/// and is dropped.
pub fn simulate_coupled(
    plan: &OnerPlan,
    duration: f64,
    samples_per_period: usize,
    options: &PropagateOptions,
) -> Result<CoupledRun> {
    if !(duration > 0.0) {
        return Err(Error::InvalidInput("duration must be positive".into()));
    }
    let spin = plan.setup.spin();
    let ds = spin.dim();
    let params = &plan.params;
    if plan.pair.qeg().is_some() {
        warn!("off-diagonal quadrupole block averages out at the optical carrier and is not propagated");
    }

    let coupling = kron(
        &projector(GROUND),
        &quadrupole_hamiltonian(plan.pair.qg(), spin),
    ) + kron(
        &projector(EXCITED),
        &quadrupole_hamiltonian(plan.pair.qe(), spin),
    ) + kron(&identity(2), &plan.setup.zeeman());
    let id_s = identity(ds);
    let h = PulsedHamiltonian::new(
        kron(&two_level_hamiltonian(params, true), &id_s) + &coupling,
        kron(&two_level_hamiltonian(params, false), &id_s) + &coupling,
        params.period(),
        params.duty(),
    )?;
    let channels: Vec<_> = two_level_channels(params)?
        .iter()
        .map(|c| c.extend_left(ds))
        .collect();
    let rho0 = DensityOperator::basis(2 * ds, GROUND * ds + spin.index_of(plan.transition.0)?)?;

    let n_periods = (duration / params.period() - 1e-9).ceil().max(1.0) as usize;
    let times = period_grid(params.period(), n_periods, samples_per_period)?;
    let trajectory = propagate(&h, &channels, &rho0, &times, options)?;

    let mut spin_populations = vec![Vec::with_capacity(times.len()); ds];
    let mut rho_ee = Vec::with_capacity(times.len());
    for state in &trajectory.states {
        let mut excited = 0.0;
        for (i, series) in spin_populations.iter_mut().enumerate() {
            let g = state.population(GROUND * ds + i);
            let e = state.population(EXCITED * ds + i);
            series.push(g + e);
            excited += e;
        }
        rho_ee.push(excited);
    }
    Ok(CoupledRun {
        trajectory,
        projections: spin.projections(),
        spin_populations,
        rho_ee,
        samples_per_period,
    })
}
