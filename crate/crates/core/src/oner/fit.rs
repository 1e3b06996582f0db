use std::f64::consts::PI;

use crate::{Error, Result};

/// Least-squares fit p(t) ≈ amplitude · sin²(π ν t) + offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiFit {
    /// ν, in inverse units of the sample times.
    pub frequency: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms_residual: f64,
}

/// Amplitudes below this are reported as no oscillation.
const MIN_AMPLITUDE: f64 = 1e-3;

/// Linear solve for (A, c) at fixed ν, returning the sum of squared residuals.
fn project(times: &[f64], values: &[f64], nu: f64) -> (f64, f64, f64) {
    let n = times.len() as f64;
    let (mut s, mut ss, mut y, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for (&t, &v) in times.iter().zip(values) {
        let f = (PI * nu * t).sin().powi(2);
        s += f;
        ss += f * f;
        y += v;
        sy += f * v;
    }
    let det = n * ss - s * s;
    if det.abs() < 1e-300 {
        let c = y / n;
        let sse = values.iter().map(|v| (v - c).powi(2)).sum();
        return (0.0, c, sse);
    }
    let a = (n * sy - s * y) / det;
    let c = (y - a * s) / n;
    let sse = times
        .iter()
        .zip(values)
        .map(|(&t, &v)| (v - a * (PI * nu * t).sin().powi(2) - c).powi(2))
        .sum();
    (a, c, sse)
}

/// Counts passes through the mean, with hysteresis against small ripple.
fn mean_crossings(values: &[f64]) -> usize {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let band = 0.1 * (hi - lo);
    let mut state = 0i8;
    let mut count = 0;
    for &v in values {
        let s = if v > mean + band {
            1
        } else if v < mean - band {
            -1
        } else {
            continue;
        };
        if state != 0 && s != state {
            count += 1;
        }
        state = s;
    }
    count
}

/// Fits a Rabi oscillation to `values` sampled at `times` (t = 0 is the
/// start of the drive). Returns `None` when no oscillation is resolved.
pub fn fit_rabi(times: &[f64], values: &[f64]) -> Result<Option<RabiFit>> {
    if times.len() != values.len() || times.len() < 8 {
        return Err(Error::InvalidInput(
            "need at least 8 matching samples to fit".into(),
        ));
    }
    let span = times[times.len() - 1] - times[0];
    if !(span > 0.0) {
        return Err(Error::InvalidInput(
            "sample times must span a positive interval".into(),
        ));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    if hi - lo < MIN_AMPLITUDE {
        return Ok(None);
    }

    let nyquist = 0.5 * (times.len() - 1) as f64 / span;
    let guess = mean_crossings(values) as f64 / (2.0 * span);
    let (nu_lo, nu_hi) = if guess > 0.0 {
        ((0.5 * guess).max(0.25 / span), (2.0 * guess).min(nyquist))
    } else {
        (0.25 / span, (1.5 / span).min(nyquist))
    };
    let step = 0.125 / span;
    let count = ((nu_hi - nu_lo) / step).ceil().max(1.0) as usize;
    let mut best = (nu_lo, f64::INFINITY);
    for k in 0..=count {
        let nu = nu_lo + (nu_hi - nu_lo) * k as f64 / count as f64;
        let sse = project(times, values, nu).2;
        if sse < best.1 {
            best = (nu, sse);
        }
    }

    // Golden-section refinement within one scan step.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = ((best.0 - step).max(0.5 * nu_lo), best.0 + step);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (project(times, values, x1).2, project(times, values, x2).2);
    for _ in 0..100 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = project(times, values, x1).2;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = project(times, values, x2).2;
        }
        if b - a < 1e-12 * b {
            break;
        }
    }
    let nu = 0.5 * (a + b);
    let (amplitude, offset, sse) = project(times, values, nu);
    if amplitude.abs() < MIN_AMPLITUDE {
        return Ok(None);
    }
    Ok(Some(RabiFit {
        frequency: nu,
        amplitude,
        offset,
        rms_residual: (sse / times.len() as f64).sqrt(),
    }))
}
