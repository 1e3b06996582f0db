//! Spin-I operator algebra and the nuclear spin Hamiltonian
//! H = −γ_n B0 I_z + I_μ Q_μν I_ν.
//!
//! Basis ordering: index k holds m = I − k, i.e. descending m from +I to −I.
//!
//! Transition amplitudes follow the lowering convention: for m → m−1,
//! g = α (Q_xz + i Q_yz) with α ≥ 0, and for m → m−2,
//! g = β (Q_xx − Q_yy + 2i Q_xy). Raising amplitudes are the complex
//! conjugates. With these definitions |g| equals |⟨m'|H_Q|m⟩| exactly.

use std::fmt;
use std::str::FromStr;

use log::warn;
use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::tensor::{self, Frame};
use crate::units::hz_to_angular;
use crate::{CMatrix, Error, Result};

/// Half-integer stored as twice its value, so 3/2 is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts "3/2", "-1/2", "1", "-1.5".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("'{s}' is not an integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Self(num)),
                "1" => Ok(Self(2 * num)),
                _ => Err(bad()),
            }
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * v;
            if (twice - twice.round()).abs() > 1e-9 {
                return Err(bad());
            }
            Ok(Self(twice.round() as i32))
        }
    }
}

/// Angular momentum operators of a spin I in the descending-m basis (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    two_i: u32,
    ix: CMatrix,
    iy: CMatrix,
    iz: CMatrix,
}

impl SpinSystem {
    /// Builds I_x, I_y, I_z from the ladder operators.
    pub fn new(two_i: i64) -> Result<Self> {
        if two_i <= 0 || two_i > 64 {
            return Err(Error::InvalidSpin(two_i));
        }
        let two_i = two_i as u32;
        let dim = two_i as usize + 1;
        let i = two_i as f64 / 2.0;
        let m_of = |k: usize| i - k as f64;

        // I+ |m⟩ = sqrt(I(I+1) − m(m+1)) |m+1⟩; |m+1⟩ sits one row up.
        let mut raise = CMatrix::zeros(dim, dim);
        for k in 1..dim {
            let m = m_of(k);
            raise[(k - 1, k)] = Complex64::new((i * (i + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let ix = (&raise + &lower) * Complex64::new(0.5, 0.0);
        let iy = (&raise - &lower) * Complex64::new(0.0, -0.5);
        let iz = CMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(m_of(r), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { two_i, ix, iy, iz })
    }

    pub fn two_i(&self) -> u32 {
        self.two_i
    }

    /// I as a real number.
    pub fn spin(&self) -> f64 {
        self.two_i as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_i as usize + 1
    }

    pub fn ix(&self) -> &CMatrix {
        &self.ix
    }

    pub fn iy(&self) -> &CMatrix {
        &self.iy
    }

    pub fn iz(&self) -> &CMatrix {
        &self.iz
    }

    /// [I_x, I_y, I_z].
    pub fn components(&self) -> [&CMatrix; 3] {
        [&self.ix, &self.iy, &self.iz]
    }

    /// m values in basis order (descending).
    pub fn projections(&self) -> Vec<HalfInt> {
        let t = self.two_i as i32;
        (0..=self.two_i as i32)
            .map(|k| HalfInt(t - 2 * k))
            .collect()
    }

    /// Basis index of |m⟩.
    pub fn index_of(&self, m: HalfInt) -> Result<usize> {
        let t = self.two_i as i32;
        if m.0.abs() > t || (t - m.0) % 2 != 0 {
            return Err(Error::InvalidProjection {
                m: m.to_string(),
                two_i: self.two_i,
            });
        }
        Ok(((t - m.0) / 2) as usize)
    }

    /// I(I+1).
    pub fn casimir(&self) -> f64 {
        let i = self.spin();
        i * (i + 1.0)
    }

    /// Every pair (upper m, lower m) with |Δm| ∈ {1, 2}, ordered by Δm then
    /// descending upper m.
    pub fn quadrupole_transitions(&self) -> Vec<(HalfInt, HalfInt)> {
        let ms = self.projections();
        let mut out = Vec::new();
        for step in [1usize, 2] {
            for k in 0..ms.len().saturating_sub(step) {
                out.push((ms[k], ms[k + step]));
            }
        }
        out
    }
}

/// Nuclear quadrupole interaction tensor Q_μν in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NqiTensor {
    matrix: Matrix3<f64>,
    frame: Frame,
}

impl NqiTensor {
    /// Validates symmetry (1e-12) and tracelessness (1e-10), relative to the
    /// largest element.
    pub fn new(matrix: Matrix3<f64>, frame: Frame) -> Result<Self> {
        tensor::check_symmetric_traceless(&matrix)?;
        Ok(Self { matrix, frame })
    }

    pub fn zero(frame: Frame) -> Self {
        Self {
            matrix: Matrix3::zeros(),
            frame,
        }
    }

    /// Axial tensor Q_zz · diag(−1/2, −1/2, 1).
    pub fn axial(q_zz: f64, frame: Frame) -> Self {
        Self {
            matrix: Matrix3::from_diagonal(&nalgebra::Vector3::new(-0.5 * q_zz, -0.5 * q_zz, q_zz)),
            frame,
        }
    }

    /// From upper-triangle components given in kHz.
    pub fn from_khz(c: [f64; 6], frame: Frame) -> Result<Self> {
        let m = tensor::from_components(c.map(crate::units::khz_to_angular));
        Self::new(m, frame)
    }

    /// Trusted constructor for results of linear operations on valid tensors.
    pub(crate) fn from_matrix_unchecked(matrix: Matrix3<f64>, frame: Frame) -> Self {
        Self { matrix, frame }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.matrix[(mu, nu)]
    }

    pub fn zz(&self) -> f64 {
        self.matrix[(2, 2)]
    }

    pub fn max_abs(&self) -> f64 {
        tensor::max_abs(&self.matrix)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_matrix_unchecked(self.matrix * s, self.frame)
    }

    /// a·self + b·other, keeping this tensor's frame.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self::from_matrix_unchecked(self.matrix * a + other.matrix * b, self.frame)
    }

    /// R(θ) Q R(θ)ᵀ about the shared x axis, relabelled into the magnetic frame.
    pub fn rotated_about_x(&self, theta: f64) -> Self {
        Self::from_matrix_unchecked(tensor::rotate_about_x(&self.matrix, theta), Frame::Magnetic)
    }

    /// G Q Gᵀ for an orthogonal G, relabelled into `frame`.
    pub fn rotated(&self, g: &Matrix3<f64>, frame: Frame) -> Self {
        Self::from_matrix_unchecked(tensor::rotate(&self.matrix, g), frame)
    }
}

/// −γ_n B0 I_z in rad/s; `gamma_n_hz_per_t` is an ordinary frequency per tesla.
pub fn zeeman_hamiltonian(gamma_n_hz_per_t: f64, b0_tesla: f64, spin: &SpinSystem) -> CMatrix {
    spin.iz() * Complex64::new(-hz_to_angular(gamma_n_hz_per_t) * b0_tesla, 0.0)
}

/// Σ_μν Q_μν I_μ I_ν in rad/s.
pub fn quadrupole_hamiltonian(q: &NqiTensor, spin: &SpinSystem) -> CMatrix {
    let ops = spin.components();
    let mut h = CMatrix::zeros(spin.dim(), spin.dim());
    for mu in 0..3 {
        for nu in 0..3 {
            let coeff = q.get(mu, nu);
            if coeff != 0.0 {
                h += (ops[mu] * ops[nu]) * Complex64::new(coeff, 0.0);
            }
        }
    }
    h
}

/// First-order level scheme
/// E_m = −γ_n B0 m + (3m²/2 − I(I+1)/2) Q_zz, in rad/s, descending m.
///
/// Logs a warning when |γ_n B0| < 10 |Q_zz|, where the perturbative
/// treatment is questionable.
pub fn first_order_energies(
    gamma_n_hz_per_t: f64,
    b0_tesla: f64,
    q_zz: f64,
    spin: &SpinSystem,
) -> Vec<(HalfInt, f64)> {
    let larmor = hz_to_angular(gamma_n_hz_per_t) * b0_tesla;
    if larmor.abs() < 10.0 * q_zz.abs() {
        warn!(
            "Zeeman splitting {:e} rad/s is less than 10x the quadrupole scale {:e} rad/s; \
             first-order energies may be inaccurate",
            larmor.abs(),
            q_zz.abs()
        );
    }
    let c = spin.casimir();
    spin.projections()
        .into_iter()
        .map(|m| {
            let mv = m.value();
            (m, -larmor * mv + (1.5 * mv * mv - 0.5 * c) * q_zz)
        })
        .collect()
}

/// Orders a transition as (upper m, lower m) and checks |Δm| ∈ {1, 2}.
pub fn ordered_transition(
    m_from: HalfInt,
    m_to: HalfInt,
    spin: &SpinSystem,
) -> Result<(HalfInt, HalfInt, u32)> {
    spin.index_of(m_from)?;
    spin.index_of(m_to)?;
    let delta = (m_from.0 - m_to.0).unsigned_abs();
    if delta != 2 && delta != 4 {
        return Err(Error::UnsupportedTransition {
            from: m_from.to_string(),
            to: m_to.to_string(),
            delta: HalfInt(delta as i32).to_string(),
        });
    }
    let (upper, lower) = if m_from > m_to {
        (m_from, m_to)
    } else {
        (m_to, m_from)
    };
    Ok((upper, lower, delta / 2))
}

/// E(m_upper) − E(m_lower) to first order, in rad/s:
/// −γ_n B0 + (3/2)(2m − 1) Q_zz for |Δm| = 1 and
/// −2γ_n B0 + (3/2)(4m − 4) Q_zz for |Δm| = 2, with m the upper projection.
pub fn transition_energy(
    m_from: HalfInt,
    m_to: HalfInt,
    gamma_n_hz_per_t: f64,
    b0_tesla: f64,
    q_zz: f64,
    spin: &SpinSystem,
) -> Result<f64> {
    let (upper, _, dm) = ordered_transition(m_from, m_to, spin)?;
    let larmor = hz_to_angular(gamma_n_hz_per_t) * b0_tesla;
    Ok(-(dm as f64) * larmor + quadrupole_shift(upper, dm, q_zz))
}

/// Quadrupole part of [`transition_energy`], in the units of `q_zz`.
pub fn quadrupole_correction(
    m_from: HalfInt,
    m_to: HalfInt,
    q_zz: f64,
    spin: &SpinSystem,
) -> Result<f64> {
    let (upper, _, dm) = ordered_transition(m_from, m_to, spin)?;
    Ok(quadrupole_shift(upper, dm, q_zz))
}

fn quadrupole_shift(upper: HalfInt, dm: u32, q_zz: f64) -> f64 {
    let m = upper.value();
    match dm {
        1 => 1.5 * (2.0 * m - 1.0) * q_zz,
        _ => 1.5 * (4.0 * m - 4.0) * q_zz,
    }
}

/// α for the m−1 ↔ m pair: ½ |2m − 1| sqrt(I(I+1) − m(m−1)).
pub fn alpha(m_upper: HalfInt, spin: &SpinSystem) -> f64 {
    let m = m_upper.value();
    0.5 * (2.0 * m - 1.0).abs() * (spin.casimir() - m * (m - 1.0)).max(0.0).sqrt()
}

/// β for the m−2 ↔ m pair:
/// ¼ sqrt(I(I+1) − (m−1)(m−2)) sqrt(I(I+1) − m(m−1)).
pub fn beta(m_upper: HalfInt, spin: &SpinSystem) -> f64 {
    let m = m_upper.value();
    let c = spin.casimir();
    0.25 * (c - (m - 1.0) * (m - 2.0)).max(0.0).sqrt() * (c - m * (m - 1.0)).max(0.0).sqrt()
}

/// Prefactor α or β of a transition (non-negative).
pub fn prefactor(m_from: HalfInt, m_to: HalfInt, spin: &SpinSystem) -> Result<f64> {
    let (upper, _, dm) = ordered_transition(m_from, m_to, spin)?;
    Ok(if dm == 1 {
        alpha(upper, spin)
    } else {
        beta(upper, spin)
    })
}

/// Quadrupole transition amplitude g for m_from → m_to, in the units of `q`.
///
/// Lowering transitions use g = α(Q_xz + iQ_yz) or β(Q_xx − Q_yy + 2iQ_xy);
/// raising transitions return the conjugate.
pub fn transition_amplitude(
    m_from: HalfInt,
    m_to: HalfInt,
    q: &NqiTensor,
    spin: &SpinSystem,
) -> Result<Complex64> {
    let (upper, _, dm) = ordered_transition(m_from, m_to, spin)?;
    let lowering = if dm == 1 {
        Complex64::new(q.get(0, 2), q.get(1, 2)) * alpha(upper, spin)
    } else {
        Complex64::new(q.get(0, 0) - q.get(1, 1), 2.0 * q.get(1, 0)) * beta(upper, spin)
    };
    Ok(if m_from > m_to {
        lowering
    } else {
        lowering.conj()
    })
}
