//! Physical constants and unit conversions. Every conversion factor used by
//! the crate lives here.

use std::f64::consts::PI;

/// One atomic unit of electric field gradient, E_h / (e a0^3), in V/m².
pub const EFG_AU_IN_SI: f64 = 9.717e21;

/// 1 barn in m².
pub const BARN: f64 = 1e-28;

/// Elementary charge in C (exact, SI 2019).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant in J s (exact, SI 2019).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Nuclear magneton expressed as a frequency per tesla, in MHz/T.
pub const NUCLEAR_MAGNETON_MHZ_PER_T: f64 = 7.622_593_285;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn hz_to_angular(f: f64) -> f64 {
    2.0 * PI * f
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
#[inline]
pub fn angular_to_hz(w: f64) -> f64 {
    w / (2.0 * PI)
}

#[inline]
pub fn khz_to_angular(f: f64) -> f64 {
    hz_to_angular(f * 1e3)
}

#[inline]
pub fn angular_to_khz(w: f64) -> f64 {
    angular_to_hz(w) * 1e-3
}

/// Energy of a charge `e` times `q` (barn) times an EFG (V/m²) as an
/// angular frequency: e·q·Φ / ħ.
#[inline]
pub fn quadrupole_energy_angular(q_barn: f64, efg_si: f64) -> f64 {
    hz_to_angular(ELEMENTARY_CHARGE * q_barn * BARN * efg_si / PLANCK)
}
