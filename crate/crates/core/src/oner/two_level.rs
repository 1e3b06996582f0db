use log::warn;
use num_complex::Complex64;

use crate::qdyn::{
    propagate, CollapseChannel, ConstantHamiltonian, DensityOperator, PropagateOptions,
    TimeDependentHamiltonian, Trajectory,
};
use crate::{CMatrix, Error, Result};

pub const GROUND: usize = 0;
pub const EXCITED: usize = 1;

/// Below this value of rate × τ the pulse does not reach its steady state.
const HIERARCHY_MARGIN: f64 = 10.0;

/// Open two-level system driven by a square-gated field. Rates in rad/s,
/// period in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    omega_rabi: f64,
    detuning: f64,
    decay: f64,
    dephasing: f64,
    period: f64,
    duty: f64,
}

impl TwoLevelParams {
    /// Half-duty pulse train. Hierarchy violations are logged, not rejected.
    pub fn new(
        omega_rabi: f64,
        detuning: f64,
        decay: f64,
        dephasing: f64,
        period: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_rabi,
            detuning,
            decay,
            dephasing,
            period,
            duty: 0.5,
        };
        p.validate()?;
        for w in p.hierarchy_warnings() {
            warn!("{w}");
        }
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_rabi,
            self.detuning,
            self.decay,
            self.dephasing,
            self.period,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "two-level parameters must be finite".into(),
            ));
        }
        if self.decay < 0.0 || self.dephasing < 0.0 {
            return Err(Error::InvalidInput(
                "decay and dephasing rates must be non-negative".into(),
            ));
        }
        if !(self.period > 0.0) {
            return Err(Error::InvalidInput("pulse period must be positive".into()));
        }
        if !(self.duty > 0.0 && self.duty < 1.0) {
            return Err(Error::InvalidInput(format!(
                "duty must lie in (0, 1), got {}",
                self.duty
            )));
        }
        Ok(())
    }

    pub fn with_duty(mut self, duty: f64) -> Result<Self> {
        self.duty = duty;
        self.validate()?;
        Ok(self)
    }

    pub fn with_period(mut self, period: f64) -> Result<Self> {
        self.period = period;
        self.validate()?;
        Ok(self)
    }

    /// Conditions under which the excited population tracks the square pulse.
    pub fn hierarchy_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, rate) in [
            ("Rabi frequency", self.omega_rabi.abs()),
            ("decay rate", self.decay),
        ] {
            if rate * self.period < HIERARCHY_MARGIN {
                out.push(format!(
                    "{name} x period = {:.3} is below {HIERARCHY_MARGIN}; the population will not follow the pulse envelope",
                    rate * self.period
                ));
            }
        }
        out
    }

    pub fn omega_rabi(&self) -> f64 {
        self.omega_rabi
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn dephasing(&self) -> f64 {
        self.dephasing
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn duty(&self) -> f64 {
        self.duty
    }

    /// Coherence decay rate Γ/2 + γ_c.
    pub fn gamma_perp(&self) -> f64 {
        0.5 * self.decay + self.dephasing
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub rho_ee: f64,
    /// ⟨e|ρ|g⟩ in the frame rotating with the drive.
    pub rho_eg: Complex64,
}

/// Long-time limit of the continuously driven system.
pub fn steady_state(params: &TwoLevelParams) -> Result<SteadyState> {
    if !(params.decay > 0.0) {
        return Err(Error::NoSteadyState);
    }
    let gp = params.gamma_perp();
    let (omega, delta, gamma) = (params.omega_rabi, params.detuning, params.decay);
    let denom = 1.0 + (delta / gp).powi(2) + omega * omega / (gp * gamma);
    let rho_ee = omega * omega / (2.0 * gp * gamma) / denom;
    let rho_eg = Complex64::new(0.0, -omega / (2.0 * gp)) * Complex64::new(1.0, delta / gp) / denom;
    Ok(SteadyState { rho_ee, rho_eg })
}

fn sigma() -> CMatrix {
    let mut s = CMatrix::zeros(2, 2);
    s[(GROUND, EXCITED)] = Complex64::new(1.0, 0.0);
    s
}

/// Rotating-frame Hamiltonian −Δσ†σ + (Ω/2)(σ + σ†), or −Δσ†σ with the drive off.
pub fn two_level_hamiltonian(params: &TwoLevelParams, drive_on: bool) -> CMatrix {
    let mut h = CMatrix::zeros(2, 2);
    h[(EXCITED, EXCITED)] = Complex64::new(-params.detuning, 0.0);
    if drive_on {
        let c = Complex64::new(0.5 * params.omega_rabi, 0.0);
        h[(GROUND, EXCITED)] = c;
        h[(EXCITED, GROUND)] = c;
    }
    h
}

/// Spontaneous decay σ at rate Γ and pure dephasing σ_z at rate γ_c/2.
pub fn two_level_channels(params: &TwoLevelParams) -> Result<Vec<CollapseChannel>> {
    let mut sz = CMatrix::zeros(2, 2);
    sz[(EXCITED, EXCITED)] = Complex64::new(1.0, 0.0);
    sz[(GROUND, GROUND)] = Complex64::new(-1.0, 0.0);
    Ok(vec![
        CollapseChannel::new(sigma(), params.decay)?,
        CollapseChannel::new(sz, 0.5 * params.dephasing)?,
    ])
}

/// Piecewise-constant Hamiltonian switching between `on` during the first
/// `duty` fraction of every period and `off` for the rest.
#[derive(Debug, Clone)]
pub struct PulsedHamiltonian {
    on: CMatrix,
    off: CMatrix,
    period: f64,
    duty: f64,
}

impl PulsedHamiltonian {
    pub fn new(on: CMatrix, off: CMatrix, period: f64, duty: f64) -> Result<Self> {
        if on.shape() != off.shape() || !on.is_square() {
            return Err(Error::DimensionMismatch {
                left: "drive-on hamiltonian",
                left_dim: on.nrows(),
                right: "drive-off hamiltonian",
                right_dim: off.nrows(),
            });
        }
        if !(period > 0.0) || !(duty > 0.0 && duty < 1.0) {
            return Err(Error::InvalidInput(
                "pulse period must be positive and duty in (0, 1)".into(),
            ));
        }
        Ok(Self {
            on,
            off,
            period,
            duty,
        })
    }

    pub fn is_on(&self, t: f64) -> bool {
        (t / self.period).rem_euclid(1.0) < self.duty
    }
}

impl TimeDependentHamiltonian for PulsedHamiltonian {
    fn dim(&self) -> usize {
        self.on.nrows()
    }

    fn at(&self, t: f64) -> CMatrix {
        if self.is_on(t) {
            self.on.clone()
        } else {
            self.off.clone()
        }
    }

    fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        let guard = 1e-12 * self.period;
        let first = (t0 / self.period).floor() as i64;
        let last = (t1 / self.period).ceil() as i64;
        let mut out = Vec::new();
        for k in first..=last {
            for edge in [k as f64 * self.period, (k as f64 + self.duty) * self.period] {
                if edge > t0 + guard && edge < t1 - guard {
                    out.push(edge);
                }
            }
        }
        out
    }

    fn on_piece(&self, _t: f64, piece: (f64, f64)) -> CMatrix {
        self.at(0.5 * (piece.0 + piece.1))
    }
}

/// Two-level trajectory sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct TwoLevelRun {
    pub trajectory: Trajectory,
    pub samples_per_period: usize,
}

impl TwoLevelRun {
    pub fn times(&self) -> &[f64] {
        &self.trajectory.times
    }

    pub fn rho_ee(&self) -> Vec<f64> {
        self.trajectory.population_series(EXCITED)
    }

    pub fn rho_eg(&self) -> Vec<Complex64> {
        self.trajectory
            .states
            .iter()
            .map(|s| s.element(EXCITED, GROUND))
            .collect()
    }

    /// Samples t ∈ [kτ, (k+1)τ) of period `k`.
    pub fn period_window(&self, k: usize) -> std::ops::Range<usize> {
        k * self.samples_per_period..(k + 1) * self.samples_per_period
    }
}

/// Uniform grid t_k = k τ / samples_per_period over `n_periods` periods.
pub(crate) fn period_grid(
    period: f64,
    n_periods: usize,
    samples_per_period: usize,
) -> Result<Vec<f64>> {
    if n_periods == 0 || samples_per_period < 2 {
        return Err(Error::InvalidInput(
            "need at least one period and two samples per period".into(),
        ));
    }
    let dt = period / samples_per_period as f64;
    Ok((0..=n_periods * samples_per_period)
        .map(|k| k as f64 * dt)
        .collect())
}

/// Square-pulsed drive starting from the ground state.
pub fn simulate_pulsed_two_level(
    params: &TwoLevelParams,
    n_periods: usize,
    samples_per_period: usize,
    options: &PropagateOptions,
) -> Result<TwoLevelRun> {
    let times = period_grid(params.period, n_periods, samples_per_period)?;
    let h = PulsedHamiltonian::new(
        two_level_hamiltonian(params, true),
        two_level_hamiltonian(params, false),
        params.period,
        params.duty,
    )?;
    let trajectory = propagate(
        &h,
        &two_level_channels(params)?,
        &DensityOperator::basis(2, GROUND)?,
        &times,
        options,
    )?;
    Ok(TwoLevelRun {
        trajectory,
        samples_per_period,
    })
}

/// Continuous drive from the ground state, sampled at `times`.
pub fn simulate_continuous_two_level(
    params: &TwoLevelParams,
    times: &[f64],
    options: &PropagateOptions,
) -> Result<Trajectory> {
    let h = ConstantHamiltonian(two_level_hamiltonian(params, true));
    propagate(
        &h,
        &two_level_channels(params)?,
        &DensityOperator::basis(2, GROUND)?,
        times,
        options,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64, delta: f64, gamma: f64, gc: f64) -> TwoLevelParams {
        TwoLevelParams::new(omega, delta, gamma, gc, 100.0).unwrap()
    }

    #[test]
    fn reference_ratio_steady_state() {
        let ss = steady_state(&params(1.0, 0.0, 0.4, 0.0)).unwrap();
        assert!((ss.rho_ee - 25.0 / 54.0).abs() < 1e-15);
        assert!(ss.rho_eg.re.abs() < 1e-15);
    }

    #[test]
    fn steady_state_limits() {
        assert_eq!(
            steady_state(&params(0.0, 0.3, 1.0, 0.1)).unwrap().rho_ee,
            0.0
        );
        let sat = steady_state(&params(1e6, 0.0, 1.0, 0.0)).unwrap();
        assert!((sat.rho_ee - 0.5).abs() < 1e-9);
        assert!(matches!(
            steady_state(&params(1.0, 0.0, 0.0, 0.0)),
            Err(Error::NoSteadyState)
        ));
    }

    #[test]
    fn steady_state_is_a_fixed_point() {
        let p = params(1.3, -0.4, 0.7, 0.2);
        let ss = steady_state(&p).unwrap();
        let mut rho = CMatrix::zeros(2, 2);
        rho[(EXCITED, EXCITED)] = Complex64::new(ss.rho_ee, 0.0);
        rho[(GROUND, GROUND)] = Complex64::new(1.0 - ss.rho_ee, 0.0);
        rho[(EXCITED, GROUND)] = ss.rho_eg;
        rho[(GROUND, EXCITED)] = ss.rho_eg.conj();
        let rho = DensityOperator::new(rho).unwrap();
        let rhs = crate::qdyn::lindblad_rhs(
            &two_level_hamiltonian(&p, true),
            &two_level_channels(&p).unwrap(),
            &rho,
        )
        .unwrap();
        assert!(crate::qdyn::max_abs(&rhs) < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TwoLevelParams::new(1.0, 0.0, -1.0, 0.0, 1.0).is_err());
        assert!(TwoLevelParams::new(1.0, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(params(1.0, 0.0, 1.0, 0.0).with_duty(1.0).is_err());
    }

    #[test]
    fn hierarchy_is_checked() {
        let p = TwoLevelParams::new(1.0, 0.0, 0.4, 0.0, 5.0).unwrap();
        assert_eq!(p.hierarchy_warnings().len(), 2);
        assert!(params(1.0, 0.0, 0.4, 0.0).hierarchy_warnings().is_empty());
    }

    #[test]
    fn pulse_edges() {
        let h = PulsedHamiltonian::new(CMatrix::identity(2, 2), CMatrix::zeros(2, 2), 2.0, 0.25)
            .unwrap();
        assert_eq!(h.breakpoints(0.0, 4.0), vec![0.5, 2.0, 2.5]);
        assert_eq!(h.breakpoints(0.5, 2.0), Vec::<f64>::new());
        assert!(h.is_on(4.1) && !h.is_on(4.6));
    }

    #[test]
    fn undriven_stays_in_ground_state() {
        let p = TwoLevelParams::new(0.0, 0.0, 1.0, 0.2, 10.0).unwrap();
        let run = simulate_pulsed_two_level(&p, 2, 16, &PropagateOptions::default()).unwrap();
        assert!(run.rho_ee().iter().all(|&v| v.abs() < 1e-15));
    }
}
