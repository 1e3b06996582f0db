use log::info;
use nalgebra::{Matrix3, SymmetricEigen};

use crate::spin::NqiTensor;
use crate::tensor::{self, Frame};
use crate::units::{quadrupole_energy_angular, EFG_AU_IN_SI};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfgUnit {
    /// E_h / (e a0³)
    AtomicUnits,
    /// V/m²
    VoltsPerSquareMeter,
}

/// Symmetric traceless electric field gradient tensor Φ_μν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfgTensor {
    matrix: Matrix3<f64>,
    unit: EfgUnit,
    frame: Frame,
}

impl EfgTensor {
    pub fn new(matrix: Matrix3<f64>, unit: EfgUnit, frame: Frame) -> Result<Self> {
        tensor::check_symmetric_traceless(&matrix)?;
        Ok(Self {
            matrix,
            unit,
            frame,
        })
    }

    /// Axial tensor with Φ_zz = `v_zz`: diag(−v/2, −v/2, v).
    pub fn axial(v_zz: f64, unit: EfgUnit, frame: Frame) -> Self {
        Self {
            matrix: Matrix3::from_diagonal(&nalgebra::Vector3::new(-0.5 * v_zz, -0.5 * v_zz, v_zz)),
            unit,
            frame,
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix3<f64>, unit: EfgUnit, frame: Frame) -> Self {
        Self {
            matrix,
            unit,
            frame,
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn unit(&self) -> EfgUnit {
        self.unit
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_matrix_unchecked(self.matrix * s, self.unit, self.frame)
    }

    /// R(θ) Φ R(θ)ᵀ, relabelled into the magnetic frame.
    pub fn rotated_about_x(&self, theta: f64) -> Self {
        Self::from_matrix_unchecked(
            tensor::rotate_about_x(&self.matrix, theta),
            self.unit,
            Frame::Magnetic,
        )
    }

    pub fn asymmetry(&self) -> Result<f64> {
        asymmetry(&self.matrix)
    }
}

/// Nucleus data: spin, scalar quadrupole moment and gyromagnetic ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct NucleusRecord {
    pub name: String,
    pub two_i: u32,
    /// Scalar quadrupole moment in barn (either sign).
    pub q_barn: f64,
    /// Gyromagnetic ratio as an ordinary frequency, MHz/T.
    pub gamma_mhz_per_t: f64,
}

impl NucleusRecord {
    pub fn new(
        name: impl Into<String>,
        two_i: u32,
        q_barn: f64,
        gamma_mhz_per_t: f64,
    ) -> Result<Self> {
        if two_i == 0 {
            return Err(Error::InvalidSpin(0));
        }
        Ok(Self {
            name: name.into(),
            two_i,
            q_barn,
            gamma_mhz_per_t,
        })
    }

    /// ⁹Be: I = 3/2, q = 0.0529 barn, γ_n = 8.9755 MHz/T.
    pub fn be9() -> Self {
        Self {
            name: "Be9".into(),
            two_i: 3,
            q_barn: 0.0529,
            gamma_mhz_per_t: 8.9755,
        }
    }

    pub fn gamma_hz_per_t(&self) -> f64 {
        self.gamma_mhz_per_t * 1e6
    }

    pub fn spin(&self) -> f64 {
        self.two_i as f64 / 2.0
    }
}

/// Converts to V/m² (1 au = 9.717e21 V/m²). SI input is returned unchanged.
pub fn efg_to_si(phi: &EfgTensor) -> EfgTensor {
    match phi.unit {
        EfgUnit::AtomicUnits => EfgTensor::from_matrix_unchecked(
            phi.matrix * EFG_AU_IN_SI,
            EfgUnit::VoltsPerSquareMeter,
            phi.frame,
        ),
        EfgUnit::VoltsPerSquareMeter => {
            info!("EFG tensor already in V/m²; no conversion applied");
            *phi
        }
    }
}

/// Converts to atomic units. Atomic-unit input is returned unchanged.
pub fn efg_to_atomic(phi: &EfgTensor) -> EfgTensor {
    match phi.unit {
        EfgUnit::VoltsPerSquareMeter => EfgTensor::from_matrix_unchecked(
            phi.matrix / EFG_AU_IN_SI,
            EfgUnit::AtomicUnits,
            phi.frame,
        ),
        EfgUnit::AtomicUnits => *phi,
    }
}

/// Q_μν = e q Φ_μν / (2I(2I − 1)), expressed in rad/s.
pub fn nqi_from_efg(phi: &EfgTensor, nucleus: &NucleusRecord) -> Result<NqiTensor> {
    if nucleus.two_i < 2 {
        return Err(Error::NoQuadrupole(nucleus.name.clone()));
    }
    let two_i = nucleus.two_i as f64;
    let si = efg_to_si(phi);
    let scale = quadrupole_energy_angular(nucleus.q_barn, 1.0) / (two_i * (two_i - 1.0));
    Ok(NqiTensor::from_matrix_unchecked(
        si.matrix * scale,
        phi.frame,
    ))
}

/// η = |Φ_y'y' − Φ_x'x'| / |Φ_z'z'| in the principal axis system, with
/// |Φ_z'z'| ≥ |Φ_y'y'| ≥ |Φ_x'x'|. Equal magnitudes are ordered by
/// descending eigenvalue.
pub fn asymmetry(m: &Matrix3<f64>) -> Result<f64> {
    if tensor::max_abs(m) == 0.0 {
        return Err(Error::UndefinedAsymmetry);
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(*m)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    let (zz, yy, xx) = (ev[0], ev[1], ev[2]);
    Ok((yy - xx).abs() / zz.abs())
}
