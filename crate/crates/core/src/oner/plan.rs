use std::f64::consts::PI;

use log::warn;
use nalgebra::{Matrix3, Rotation3, Vector3};
use num_complex::Complex64;

use crate::efg::NucleusRecord;
use crate::spin::{
    prefactor, transition_amplitude, transition_energy, zeeman_hamiltonian, HalfInt, NqiTensor,
    SpinSystem,
};
use crate::tensor::{x_rotation, Frame};
use crate::units::hz_to_angular;
use crate::{CMatrix, Error, Result};

use super::nqi::{q0_q1, StatePairNqi};
use super::spin_sim::SpinDrive;
use super::two_level::{steady_state, TwoLevelParams};

/// Nuclear spin in a static field along the magnetic-frame z axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSetup {
    spin: SpinSystem,
    gamma_hz_per_t: f64,
    b0: f64,
}

impl SpinSetup {
    pub fn new(two_i: u32, gamma_hz_per_t: f64, b0_tesla: f64) -> Result<Self> {
        if !gamma_hz_per_t.is_finite() || !b0_tesla.is_finite() {
            return Err(Error::InvalidInput(
                "gyromagnetic ratio and field must be finite".into(),
            ));
        }
        Ok(Self {
            spin: SpinSystem::new(two_i as i64)?,
            gamma_hz_per_t,
            b0: b0_tesla,
        })
    }

    pub fn from_nucleus(nucleus: &NucleusRecord, b0_tesla: f64) -> Result<Self> {
        Self::new(nucleus.two_i, nucleus.gamma_hz_per_t(), b0_tesla)
    }

    pub fn spin(&self) -> &SpinSystem {
        &self.spin
    }

    pub fn gamma_hz_per_t(&self) -> f64 {
        self.gamma_hz_per_t
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// 2π γ_n B0 in rad/s.
    pub fn larmor(&self) -> f64 {
        hz_to_angular(self.gamma_hz_per_t) * self.b0
    }

    pub fn zeeman(&self) -> CMatrix {
        zeeman_hamiltonian(self.gamma_hz_per_t, self.b0, &self.spin)
    }

    /// Transition energy (rad/s) with first-order quadrupole shift from `q_zz`.
    pub fn transition_energy(&self, from: HalfInt, to: HalfInt, q_zz: f64) -> Result<f64> {
        transition_energy(from, to, self.gamma_hz_per_t, self.b0, q_zz, &self.spin)
    }
}

/// Resonance plan for one spin transition.
#[derive(Debug, Clone, PartialEq)]
pub struct OnerPlan {
    /// State-pair tensors in the magnetic frame.
    pub pair: StatePairNqi,
    pub setup: SpinSetup,
    /// Two-level parameters with the period set to the planned repetition time.
    pub params: TwoLevelParams,
    pub rho_ee_inf: f64,
    pub q0: NqiTensor,
    pub q1: NqiTensor,
    pub transition: (HalfInt, HalfInt),
    /// E(from → to) in rad/s including the shift from Q0.
    pub transition_energy: f64,
    /// Pulse repetition rate 1/τ in Hz.
    pub repetition_rate: f64,
    /// Matrix element of H_Q(Q1) between the two levels, rad/s.
    pub amplitude: Complex64,
    /// Spin Rabi frequency in Hz, |amplitude| / 2π.
    pub predicted_rabi: f64,
}

impl OnerPlan {
    pub fn period(&self) -> f64 {
        1.0 / self.repetition_rate
    }

    /// Effective spin-only drive at the planned repetition rate.
    pub fn spin_drive(&self) -> SpinDrive {
        SpinDrive {
            setup: self.setup.clone(),
            q0: self.q0,
            q1: self.q1,
            drive_angular: 2.0 * PI * self.repetition_rate,
        }
    }
}

fn require_electric(pair: &StatePairNqi) -> Result<()> {
    if pair.frame() != Frame::Electric {
        return Err(Error::InvalidInput(format!(
            "state-pair tensors must be given in the electric frame, got {:?}",
            pair.frame()
        )));
    }
    Ok(())
}

/// Plans the protocol with the field tilted by `theta` about the shared x axis.
pub fn plan(
    pair: &StatePairNqi,
    setup: &SpinSetup,
    theta: f64,
    params: &TwoLevelParams,
    transition: (HalfInt, HalfInt),
) -> Result<OnerPlan> {
    require_electric(pair)?;
    plan_in_field_frame(pair.rotated_about_x(theta), setup, params, transition, true)
}

/// Like [`plan`], but a transition the modulation cannot drive yields a plan
/// with zero amplitude instead of an error.
pub fn plan_unchecked(
    pair: &StatePairNqi,
    setup: &SpinSetup,
    theta: f64,
    params: &TwoLevelParams,
    transition: (HalfInt, HalfInt),
) -> Result<OnerPlan> {
    require_electric(pair)?;
    plan_in_field_frame(
        pair.rotated_about_x(theta),
        setup,
        params,
        transition,
        false,
    )
}

/// Plans the protocol for a field along an arbitrary electric-frame direction.
pub fn plan_along(
    pair: &StatePairNqi,
    setup: &SpinSetup,
    field_direction: &Vector3<f64>,
    params: &TwoLevelParams,
    transition: (HalfInt, HalfInt),
) -> Result<OnerPlan> {
    require_electric(pair)?;
    let norm = field_direction.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidInput(
            "field direction must be a finite non-zero vector".into(),
        ));
    }
    let b = field_direction / norm;
    let g: Matrix3<f64> = Rotation3::rotation_between(&b, &Vector3::z())
        .map(|r| r.into_inner())
        .unwrap_or_else(|| x_rotation(PI));
    plan_in_field_frame(
        pair.rotated(&g, Frame::Magnetic),
        setup,
        params,
        transition,
        true,
    )
}

fn plan_in_field_frame(
    pair: StatePairNqi,
    setup: &SpinSetup,
    params: &TwoLevelParams,
    transition: (HalfInt, HalfInt),
    strict: bool,
) -> Result<OnerPlan> {
    let (from, to) = transition;
    let spin = setup.spin();
    let rho_ee_inf = steady_state(params)?.rho_ee;
    let (q0, q1) = q0_q1(&pair, rho_ee_inf)?;

    if strict && prefactor(from, to, spin)? == 0.0 {
        return Err(Error::ZeroAmplitude {
            from: from.to_string(),
            to: to.to_string(),
            reason: "the selection-rule prefactor vanishes for this pair of projections".into(),
        });
    }
    let amplitude = transition_amplitude(from, to, &q1, spin)?;
    if strict && amplitude.norm() <= 1e-12 * q1.max_abs() {
        return Err(Error::ZeroAmplitude {
            from: from.to_string(),
            to: to.to_string(),
            reason: "the modulated quadrupole tensor has no component coupling these levels".into(),
        });
    }
    let energy = setup.transition_energy(from, to, q0.zz())?;
    if energy == 0.0 {
        return Err(Error::InvalidInput(format!(
            "transition {from} <-> {to} is degenerate"
        )));
    }
    let repetition_rate = energy.abs() / (2.0 * PI);
    let params = params.with_period(1.0 / repetition_rate)?;
    for w in params.hierarchy_warnings() {
        warn!("{w}");
    }
    Ok(OnerPlan {
        pair,
        setup: setup.clone(),
        params,
        rho_ee_inf,
        q0,
        q1,
        transition,
        transition_energy: energy,
        repetition_rate,
        amplitude,
        predicted_rabi: amplitude.norm() / (2.0 * PI),
    })
}
