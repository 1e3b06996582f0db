#![allow(dead_code)]

use std::f64::consts::PI;

use oner_core::efg::NucleusRecord;
use oner_core::oner::{plan, OnerPlan, ScaledProblem, SpinSetup, StatePairNqi, TwoLevelParams};
use oner_core::spin::{HalfInt, NqiTensor};
use oner_core::tensor::Frame;

pub fn m(s: &str) -> HalfInt {
    s.parse().unwrap()
}

/// Ω = 2π·1 GHz, Γ = 0.4 Ω, resonant, no extra dephasing.
pub fn reference_params() -> TwoLevelParams {
    let omega = 2.0 * PI * 1e9;
    TwoLevelParams::new(omega, 0.0, 0.4 * omega, 0.0, 1e-6).unwrap()
}

/// Ground state without quadrupole coupling, axial excited state with
/// Q_zz = 100 kHz (illustrative).
pub fn reference_pair() -> StatePairNqi {
    let qe = NqiTensor::axial(2.0 * PI * 1e5, Frame::Electric);
    StatePairNqi::new(NqiTensor::zero(Frame::Electric), qe, None).unwrap()
}

pub fn be9_setup() -> SpinSetup {
    SpinSetup::from_nucleus(&NucleusRecord::be9(), 1.0).unwrap()
}

/// Paper-shaped problem at θ = π/4 mapped to scaled units.
pub fn scaled_plan(transition: (HalfInt, HalfInt), ratio: f64) -> (ScaledProblem, OnerPlan) {
    let params = reference_params();
    let scaled =
        ScaledProblem::new(&reference_pair(), &be9_setup(), &params, transition, ratio).unwrap();
    let p = plan(&scaled.pair, &scaled.setup, PI / 4.0, &params, transition).unwrap();
    (scaled, p)
}
