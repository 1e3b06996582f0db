use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::{Error, Result};

/// One node of a tensor surface: direction (θ, φ), radius s·|g| and the
/// sign of g = r̂·Φ·r̂ (+1, −1, or 0 on a nodal line).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshRow {
    pub theta: f64,
    pub phi: f64,
    pub radius: f64,
    pub sign: i8,
}

/// Samples g(θ, φ) = r̂ᵀ Φ r̂ on a θ ∈ [0, π] (inclusive, `n_theta` nodes) ×
/// φ ∈ [0, 2π) (`n_phi` nodes) grid, θ-major.
///
/// Any symmetric Φ is accepted so that non-traceless illustrations such as
/// the isotropic tensor can be drawn.
pub fn surface_mesh(
    phi_tensor: &Matrix3<f64>,
    scale: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<MeshRow>> {
    if n_theta < 8 || n_phi < 8 {
        return Err(Error::InvalidInput(format!(
            "mesh resolution must be at least 8x8, got {n_theta}x{n_phi}"
        )));
    }
    let norm = crate::tensor::max_abs(phi_tensor);
    let asym = (phi_tensor - phi_tensor.transpose()).abs().max();
    if asym > 1e-12 * norm {
        return Err(Error::NotSymmetric(asym));
    }
    let zero_tol = 1e-14 * norm;
    let mut rows = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        let (st, ct) = theta.sin_cos();
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let (sp, cp) = phi.sin_cos();
            let r = Vector3::new(st * cp, st * sp, ct);
            let g = r.dot(&(phi_tensor * r));
            let sign = if g.abs() <= zero_tol {
                0
            } else if g > 0.0 {
                1
            } else {
                -1
            };
            rows.push(MeshRow {
                theta,
                phi,
                radius: scale * g.abs(),
                sign,
            });
        }
    }
    Ok(rows)
}
