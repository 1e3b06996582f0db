//! Simulation toolkit for nuclear spin control through a time-modulated
//! nuclear quadrupole interaction.
//!
//! The crate is split along the physics:
//!
//! - [`qdyn`]: dense density operators, the Lindblad generator, fixed-step
//!   RK4 propagation, Kronecker products and partial traces.
//! - [`spin`]: spin-I operators, Zeeman and quadrupole Hamiltonians, first
//!   order level schemes and quadrupole transition amplitudes.
//! - [`efg`]: electric field gradient tensors, NQI conversion, frame
//!   rotations, asymmetry, surface meshes, the linear-response model and
//!   the tabulated EFG-vs-field ingestion format.
//! - [`oner`]: the pulsed optical protocol itself: the open two-level
//!   system, Fourier analysis, effective NQI tensors, planning of the
//!   repetition rate and the spin-only and fully coupled simulations.
//!
//! Internally every Hamiltonian carries angular frequency (rad/s, ħ = 1).
//! Ordinary frequencies (Hz) appear only at the API boundary, and each such
//! parameter says so in its name.

pub mod efg;
pub mod error;
pub mod oner;
pub mod qdyn;
pub mod spin;
pub mod tensor;
pub mod units;

pub use error::{Error, Result};

/// Dense complex matrix used for every operator in the crate.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
