use num_complex::Complex64;

use crate::qdyn::Trajectory;
use crate::spin::NqiTensor;
use crate::tensor::Frame;
use crate::{Error, Result};

use super::two_level::{EXCITED, GROUND};

/// Quadrupole tensors of the electronic ground and excited states, with an
/// optional off-diagonal ⟨e|Q|g⟩ block (real).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePairNqi {
    qg: NqiTensor,
    qe: NqiTensor,
    qeg: Option<NqiTensor>,
}

impl StatePairNqi {
    pub fn new(qg: NqiTensor, qe: NqiTensor, qeg: Option<NqiTensor>) -> Result<Self> {
        let frame = qg.frame();
        if qe.frame() != frame || qeg.is_some_and(|q| q.frame() != frame) {
            return Err(Error::InvalidInput(
                "state-pair tensors must share one frame".into(),
            ));
        }
        Ok(Self { qg, qe, qeg })
    }

    pub fn qg(&self) -> &NqiTensor {
        &self.qg
    }

    pub fn qe(&self) -> &NqiTensor {
        &self.qe
    }

    pub fn qeg(&self) -> Option<&NqiTensor> {
        self.qeg.as_ref()
    }

    pub fn frame(&self) -> Frame {
        self.qg.frame()
    }

    /// Qe − Qg.
    pub fn difference(&self) -> NqiTensor {
        self.qe.combine(1.0, &self.qg, -1.0)
    }

    pub fn max_abs(&self) -> f64 {
        let diag = self.qg.max_abs().max(self.qe.max_abs());
        self.qeg.map_or(diag, |q| diag.max(q.max_abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            qg: self.qg.scaled(s),
            qe: self.qe.scaled(s),
            qeg: self.qeg.map(|q| q.scaled(s)),
        }
    }

    pub fn rotated_about_x(&self, theta: f64) -> Self {
        Self {
            qg: self.qg.rotated_about_x(theta),
            qe: self.qe.rotated_about_x(theta),
            qeg: self.qeg.map(|q| q.rotated_about_x(theta)),
        }
    }

    pub fn rotated(&self, g: &nalgebra::Matrix3<f64>, frame: Frame) -> Self {
        Self {
            qg: self.qg.rotated(g, frame),
            qe: self.qe.rotated(g, frame),
            qeg: self.qeg.map(|q| q.rotated(g, frame)),
        }
    }
}

/// ⟨Q⟩(t) = ρ_ee Qe + (1 − ρ_ee) Qg + 2 Re{ρ_eg} Qeg at each trajectory sample.
///
/// With `carrier = Some(ω)` the stored ρ_eg is taken as rotating-frame and
/// multiplied by e^{−iωt} before use.
pub fn effective_nqi_series(
    trajectory: &Trajectory,
    pair: &StatePairNqi,
    carrier: Option<f64>,
) -> Vec<NqiTensor> {
    trajectory
        .times
        .iter()
        .zip(&trajectory.states)
        .map(|(&t, state)| {
            let p = state.population(EXCITED);
            let q = pair.qe.combine(p, &pair.qg, 1.0 - p);
            match pair.qeg {
                Some(qeg) => {
                    let mut eg = state.element(EXCITED, GROUND);
                    if let Some(w) = carrier {
                        eg *= Complex64::from_polar(1.0, -w * t);
                    }
                    q.combine(1.0, &qeg, 2.0 * eg.re)
                }
                None => q,
            }
        })
        .collect()
}

/// Constant and first-harmonic parts of ⟨Q⟩ for a half-duty square
/// population of height ρ_ee∞:
/// Q0 = Qg + (ρ_ee∞/2)(Qe − Qg), Q1 = (2ρ_ee∞/π)(Qe − Qg).
pub fn q0_q1(pair: &StatePairNqi, rho_ee_inf: f64) -> Result<(NqiTensor, NqiTensor)> {
    if !(rho_ee_inf >= 0.0 && rho_ee_inf <= 0.5 + 1e-9) {
        return Err(Error::InvalidInput(format!(
            "steady excited population must lie in [0, 1/2], got {rho_ee_inf}"
        )));
    }
    let dq = pair.difference();
    let q0 = pair.qg.combine(1.0, &dq, 0.5 * rho_ee_inf);
    let q1 = dq.scaled(2.0 * rho_ee_inf / std::f64::consts::PI);
    Ok((q0, q1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::{DensityOperator, StepDiagnostics};
    use std::f64::consts::PI;

    fn tensor(c: [f64; 6]) -> NqiTensor {
        NqiTensor::new(crate::tensor::from_components(c), Frame::Electric).unwrap()
    }

    fn pair() -> StatePairNqi {
        StatePairNqi::new(
            tensor([1.0, 2.0, -3.0, 0.5, 0.0, -0.2]),
            tensor([-4.0, 1.0, 3.0, 0.0, 0.7, 0.1]),
            None,
        )
        .unwrap()
    }

    fn constant_trajectory(p: f64) -> Trajectory {
        let rho = DensityOperator::from_populations(&[1.0 - p, p]).unwrap();
        Trajectory {
            times: vec![0.0, 1.0],
            states: vec![rho.clone(), rho],
            diagnostics: StepDiagnostics::default(),
        }
    }

    #[test]
    fn extremes_select_state_tensors() {
        let p = pair();
        for q in effective_nqi_series(&constant_trajectory(0.0), &p, None) {
            assert_eq!(q, *p.qg());
        }
        for q in effective_nqi_series(&constant_trajectory(1.0), &p, None) {
            assert!((q.matrix() - p.qe().matrix()).abs().max() < 1e-15);
        }
    }

    #[test]
    fn reference_ratio_q0_q1() {
        let qe = tensor([1.0, 1.0, -2.0, 0.0, 0.0, 0.0]);
        let p = StatePairNqi::new(NqiTensor::zero(Frame::Electric), qe, None).unwrap();
        let (q0, q1) = q0_q1(&p, 25.0 / 54.0).unwrap();
        assert!((q0.matrix() - qe.matrix() * (25.0 / 108.0)).abs().max() < 1e-15);
        assert!(
            (q1.matrix() - qe.matrix() * (25.0 / (27.0 * PI)))
                .abs()
                .max()
                < 1e-15
        );
    }

    #[test]
    fn equal_tensors_have_no_modulation() {
        let q = tensor([1.0, 2.0, -3.0, 0.5, 0.0, -0.2]);
        let p = StatePairNqi::new(q, q, None).unwrap();
        let (q0, q1) = q0_q1(&p, 0.3).unwrap();
        assert_eq!(q1.max_abs(), 0.0);
        assert_eq!(q0, q);
    }

    #[test]
    fn modulation_ratio_is_four_over_pi() {
        let p = pair();
        let (q0, q1) = q0_q1(&p, 0.41).unwrap();
        let inc = q0.combine(1.0, p.qg(), -1.0);
        assert!((q1.matrix().norm() / inc.matrix().norm() - 4.0 / PI).abs() < 1e-13);
        assert!(q0_q1(&p, 0.7).is_err());
    }

    #[test]
    fn mixed_frames_rejected() {
        let q = tensor([1.0, 2.0, -3.0, 0.5, 0.0, -0.2]);
        assert!(StatePairNqi::new(q, q.rotated_about_x(0.1), None).is_err());
    }
}
