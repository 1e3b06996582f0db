use nalgebra::{Matrix3, Vector3};

use super::EfgTensor;
use crate::tensor;
use crate::{Error, Result};

/// S[μ][ν][α][β]: EFG response to strain ε_αβ.
pub type StrainCoupling = [[[[f64; 3]; 3]; 3]; 3];
/// R[μ][ν][γ]: EFG response to electric field E_γ.
pub type FieldCoupling = [[[f64; 3]; 3]; 3];

/// Linearized EFG: Φ ≈ Φ⁽⁰⁾ + S ε + R E.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearResponseModel {
    phi0: EfgTensor,
    strain: StrainCoupling,
    field: FieldCoupling,
}

impl LinearResponseModel {
    /// Each (α, β) slice of S and each γ slice of R must be symmetric and
    /// traceless in (μ, ν); S must also be symmetric in (α, β).
    pub fn new(phi0: EfgTensor, strain: StrainCoupling, field: FieldCoupling) -> Result<Self> {
        for a in 0..3 {
            for b in 0..3 {
                let slice = Matrix3::from_fn(|m, n| strain[m][n][a][b]);
                tensor::check_symmetric_traceless(&slice)?;
                let swapped = Matrix3::from_fn(|m, n| strain[m][n][b][a]);
                let d = (slice - swapped).abs().max();
                if d > 1e-12 * tensor::max_abs(&slice).max(tensor::max_abs(&swapped)) {
                    return Err(Error::NotSymmetric(d));
                }
            }
        }
        for g in 0..3 {
            tensor::check_symmetric_traceless(&Matrix3::from_fn(|m, n| field[m][n][g]))?;
        }
        Ok(Self {
            phi0,
            strain,
            field,
        })
    }

    /// Field-only model (no strain coupling).
    pub fn field_only(phi0: EfgTensor, field: FieldCoupling) -> Result<Self> {
        Self::new(phi0, [[[[0.0; 3]; 3]; 3]; 3], field)
    }

    pub fn phi0(&self) -> &EfgTensor {
        &self.phi0
    }

    /// Φ⁽⁰⁾_μν + S_μναβ ε_αβ + R_μνγ E_γ, in the unit and frame of Φ⁽⁰⁾.
    pub fn evaluate(&self, strain: &Matrix3<f64>, field: &Vector3<f64>) -> Result<EfgTensor> {
        let asym = (strain - strain.transpose()).abs().max();
        if asym > 1e-12 * tensor::max_abs(strain) {
            return Err(Error::NotSymmetric(asym));
        }
        let out = Matrix3::from_fn(|m, n| {
            let mut v = self.phi0.matrix()[(m, n)];
            for a in 0..3 {
                for b in 0..3 {
                    v += self.strain[m][n][a][b] * strain[(a, b)];
                }
            }
            for g in 0..3 {
                v += self.field[m][n][g] * field[g];
            }
            v
        });
        EfgTensor::new(out, self.phi0.unit(), self.phi0.frame())
    }
}

/// EFG under a harmonic field E(t) = E₀ cos(ωt) with zero strain, sampled
/// at `times`.
pub fn ner_drive_series(
    model: &LinearResponseModel,
    amplitude: &Vector3<f64>,
    omega: f64,
    times: &[f64],
) -> Result<Vec<EfgTensor>> {
    let zero = Matrix3::zeros();
    times
        .iter()
        .map(|&t| model.evaluate(&zero, &(amplitude * (omega * t).cos())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::EfgUnit;
    use crate::tensor::Frame;

    fn field_coupling() -> FieldCoupling {
        let mut r = [[[0.0; 3]; 3]; 3];
        // γ = z: axial response; γ = x: off-diagonal xz response.
        r[0][0][2] = -0.5;
        r[1][1][2] = -0.5;
        r[2][2][2] = 1.0;
        r[0][2][0] = 0.3;
        r[2][0][0] = 0.3;
        r
    }

    fn model() -> LinearResponseModel {
        let phi0 = EfgTensor::axial(0.12, EfgUnit::AtomicUnits, Frame::Electric);
        let mut s = [[[[0.0; 3]; 3]; 3]; 3];
        s[0][1][1][2] = 0.2;
        s[1][0][1][2] = 0.2;
        s[0][1][2][1] = 0.2;
        s[1][0][2][1] = 0.2;
        LinearResponseModel::new(phi0, s, field_coupling()).unwrap()
    }

    #[test]
    fn zero_perturbation_returns_phi0() {
        let m = model();
        let out = m.evaluate(&Matrix3::zeros(), &Vector3::zeros()).unwrap();
        assert_eq!(out, *m.phi0());
    }

    #[test]
    fn additivity() {
        let m = model();
        let eps = Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.01, 0.0, 0.01, 0.0);
        let e = Vector3::new(0.02, 0.0, -0.03);
        let z = Matrix3::zeros();
        let both = m.evaluate(&eps, &e).unwrap();
        let only_e = m.evaluate(&z, &e).unwrap();
        let only_s = m.evaluate(&eps, &Vector3::zeros()).unwrap();
        let resid = both.matrix() - only_e.matrix() - only_s.matrix() + m.phi0().matrix();
        assert!(resid.abs().max() < 1e-15);
    }

    #[test]
    fn rejects_trace_carrying_slice() {
        let mut r = [[[0.0; 3]; 3]; 3];
        r[0][0][1] = 1.0;
        let phi0 = EfgTensor::axial(1.0, EfgUnit::AtomicUnits, Frame::Electric);
        assert!(LinearResponseModel::field_only(phi0, r).is_err());
    }

    #[test]
    fn asymmetric_strain_rejected() {
        let eps = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(model().evaluate(&eps, &Vector3::zeros()).is_err());
    }
}
