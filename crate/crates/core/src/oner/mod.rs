//! Optical nuclear electric resonance: pulsed two-level dynamics, Fourier
//! analysis of the excited-state population, effective quadrupole tensors,
//! resonance planning and the spin-only and coupled simulations.

mod coupled;
mod fit;
mod fourier;
mod nqi;
mod plan;
mod spin_sim;
mod two_level;

pub use coupled::{
    simulate_coupled, CoupledRun, ScaledProblem, DEFAULT_TIER_RATIO, MIN_TIER_RATIO,
};
pub use fit::{fit_rabi, RabiFit};
pub use fourier::{fourier_coefficients, square_wave_coefficients, FourierCoefficients};
pub use nqi::{effective_nqi_series, q0_q1, StatePairNqi};
pub use plan::{plan, plan_along, plan_unchecked, OnerPlan, SpinSetup};
pub use spin_sim::{simulate_spin_effective, SpinDrive, SpinRun};
pub use two_level::{
    simulate_continuous_two_level, simulate_pulsed_two_level, steady_state, two_level_channels,
    two_level_hamiltonian, PulsedHamiltonian, SteadyState, TwoLevelParams, TwoLevelRun, EXCITED,
    GROUND,
};
