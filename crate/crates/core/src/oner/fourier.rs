use std::f64::consts::PI;

use crate::{Error, Result};

/// Real Fourier series f(t) = a₀/2 + Σ aₙ cos(ωₙt) + bₙ sin(ωₙt), ωₙ = 2πn/τ.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub period: f64,
    /// a[0..=n_max]; a[0] is twice the mean.
    pub a: Vec<f64>,
    /// b[0..=n_max]; b[0] is always 0.
    pub b: Vec<f64>,
}

impl FourierCoefficients {
    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let mut v = 0.5 * self.a[0];
        for n in 1..self.a.len() {
            let (s, c) = (2.0 * PI * n as f64 * t / self.period).sin_cos();
            v += self.a[n] * c + self.b[n] * s;
        }
        v
    }
}

/// Coefficients of one period sampled uniformly over [t₀, t₀ + τ).
///
/// The periodic trapezoid rule reduces to a plain sum; the absolute sample
/// times set the phase of the basis functions.
pub fn fourier_coefficients(
    times: &[f64],
    values: &[f64],
    period: f64,
    n_max: usize,
) -> Result<FourierCoefficients> {
    let n = times.len();
    if n < 2 || values.len() != n {
        return Err(Error::NonUniformSampling(format!(
            "{n} sample times for {} values; need at least two",
            values.len()
        )));
    }
    if !(period > 0.0) {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let dt = period / n as f64;
    for (k, &t) in times.iter().enumerate() {
        let expected = times[0] + k as f64 * dt;
        if (t - expected).abs() > 1e-9 * dt {
            return Err(Error::NonUniformSampling(format!(
                "sample {k} at t = {t:e} s, expected {expected:e} s for {n} samples per period"
            )));
        }
    }
    let scale = 2.0 / n as f64;
    let mut a = vec![0.0; n_max + 1];
    let mut b = vec![0.0; n_max + 1];
    for order in 0..=n_max {
        let w = 2.0 * PI * order as f64 / period;
        let (mut sa, mut sb) = (0.0, 0.0);
        for (&t, &v) in times.iter().zip(values) {
            let (s, c) = (w * t).sin_cos();
            sa += v * c;
            sb += v * s;
        }
        a[order] = scale * sa;
        b[order] = if order == 0 { 0.0 } else { scale * sb };
    }
    Ok(FourierCoefficients { period, a, b })
}

/// Exact coefficients of a pulse of height `h` on [0, duty·τ).
pub fn square_wave_coefficients(
    height: f64,
    duty: f64,
    period: f64,
    n_max: usize,
) -> FourierCoefficients {
    let mut a = vec![2.0 * height * duty; n_max + 1];
    let mut b = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let x = 2.0 * PI * n as f64 * duty;
        a[n] = height * x.sin() / (PI * n as f64);
        b[n] = height * (1.0 - x.cos()) / (PI * n as f64);
    }
    FourierCoefficients { period, a, b }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, period: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * period / n as f64).collect()
    }

    #[test]
    fn ideal_square_wave() {
        let (n, tau, h) = (2000, 3.0, 0.4);
        let t = grid(n, tau);
        let v: Vec<f64> = (0..n)
            .map(|k| match k {
                0 => h / 2.0,
                k if k == n / 2 => h / 2.0,
                k if k < n / 2 => h,
                _ => 0.0,
            })
            .collect();
        let f = fourier_coefficients(&t, &v, tau, 6).unwrap();
        let exact = square_wave_coefficients(h, 0.5, tau, 6);
        assert!((f.a[0] - h).abs() < 1e-12);
        assert!((f.b[1] - 2.0 * h / PI).abs() < 1e-6);
        for k in 1..=6 {
            assert!(f.a[k].abs() < 1e-12, "a{k} = {}", f.a[k]);
            assert!((f.b[k] - exact.b[k]).abs() < 1e-5);
        }
        assert!(f.b[2].abs() < 1e-12 && f.b[4].abs() < 1e-12);
    }

    #[test]
    fn constant_series() {
        let t = grid(64, 1.0);
        let f = fourier_coefficients(&t, &[0.3; 64], 1.0, 4).unwrap();
        assert!((f.a[0] - 0.6).abs() < 1e-15);
        assert!(f.a[1..].iter().chain(&f.b).all(|c| c.abs() < 1e-15));
        assert!((f.evaluate(0.37) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn non_uniform_rejected() {
        let mut t = grid(16, 1.0);
        t[5] += 0.01;
        assert!(matches!(
            fourier_coefficients(&t, &[0.0; 16], 1.0, 2),
            Err(Error::NonUniformSampling(_))
        ));
        assert!(fourier_coefficients(&grid(16, 1.0), &[0.0; 16], 2.0, 2).is_err());
    }

    #[test]
    fn general_duty_has_cosine_terms() {
        let f = square_wave_coefficients(1.0, 0.25, 1.0, 2);
        assert!((f.a[0] - 0.5).abs() < 1e-15);
        assert!((f.a[1] - 1.0 / PI).abs() < 1e-15);
        assert!((f.b[2] - 1.0 / PI).abs() < 1e-15);
    }
}
