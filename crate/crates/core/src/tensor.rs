//! Shared helpers for real symmetric traceless 3×3 tensors.

use nalgebra::Matrix3;

use crate::{Error, Result};

/// Coordinate frame a tensor is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// z along the static electric field.
    Electric,
    /// z along the static magnetic field (the spin quantization axis).
    Magnetic,
    /// Principal axis system of the tensor.
    Principal,
}

/// Largest absolute element.
pub fn max_abs(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Checks symmetry to 1e-12 and tracelessness to 1e-10, both relative to
/// the largest element.
pub(crate) fn check_symmetric_traceless(m: &Matrix3<f64>) -> Result<()> {
    let norm = max_abs(m);
    let asym = (m - m.transpose())
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if asym > 1e-12 * norm {
        return Err(Error::NotSymmetric(asym));
    }
    let trace = m.trace();
    if trace.abs() > 1e-10 * norm {
        return Err(Error::NotTraceless { trace, norm });
    }
    Ok(())
}

/// Rotation about the shared x axis by `theta`:
///
/// ```text
/// R = [[1, 0, 0], [0, cos θ, −sin θ], [0, sin θ, cos θ]]
/// ```
pub fn x_rotation(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// R(θ) T R(θ)ᵀ.
pub fn rotate_about_x(t: &Matrix3<f64>, theta: f64) -> Matrix3<f64> {
    let r = x_rotation(theta);
    symmetrize(&(r * t * r.transpose()))
}

/// G T Gᵀ for an arbitrary orthogonal G.
pub fn rotate(t: &Matrix3<f64>, g: &Matrix3<f64>) -> Matrix3<f64> {
    symmetrize(&(g * t * g.transpose()))
}

fn symmetrize(m: &Matrix3<f64>) -> Matrix3<f64> {
    (m + m.transpose()) * 0.5
}

/// Builds a symmetric tensor from its upper triangle (xx, yy, zz, xy, xz, yz).
pub fn from_components(c: [f64; 6]) -> Matrix3<f64> {
    let [xx, yy, zz, xy, xz, yz] = c;
    Matrix3::new(xx, xy, xz, xy, yy, yz, xz, yz, zz)
}

/// Upper triangle (xx, yy, zz, xy, xz, yz).
pub fn components(m: &Matrix3<f64>) -> [f64; 6] {
    [
        m[(0, 0)],
        m[(1, 1)],
        m[(2, 2)],
        m[(0, 1)],
        m[(0, 2)],
        m[(1, 2)],
    ]
}
