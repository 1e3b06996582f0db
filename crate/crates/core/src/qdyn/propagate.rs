use log::debug;
use num_complex::Complex64;

use super::{hermitian_eigenvalues, hermiticity_residual, max_abs, trace};
use super::{CollapseChannel, DensityOperator, LindbladGenerator};
use crate::{CMatrix, Error, Result};

/// Hamiltonian H(t) in rad/s, hermitian at every t.
///
/// Piecewise-smooth Hamiltonians (square pulse envelopes) report their jump
/// times through [`breakpoints`](Self::breakpoints). The integrator never
/// steps across a jump and evaluates each smooth piece through
/// [`on_piece`](Self::on_piece), so the value at a jump is taken from the
/// side being integrated.
pub trait TimeDependentHamiltonian {
    fn dim(&self) -> usize;

    fn at(&self, t: f64) -> CMatrix;

    /// Jump times strictly inside (t0, t1), ascending.
    fn breakpoints(&self, _t0: f64, _t1: f64) -> Vec<f64> {
        Vec::new()
    }

    /// H(t) for t on the closed smooth piece `piece = (start, end)`.
    fn on_piece(&self, t: f64, _piece: (f64, f64)) -> CMatrix {
        self.at(t)
    }
}

/// Time-independent Hamiltonian.
#[derive(Debug, Clone)]
pub struct ConstantHamiltonian(pub CMatrix);

impl TimeDependentHamiltonian for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn at(&self, _t: f64) -> CMatrix {
        self.0.clone()
    }
}

/// Smooth Hamiltonian given by a closure.
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> CMatrix> FnHamiltonian<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64) -> CMatrix> TimeDependentHamiltonian for FnHamiltonian<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, t: f64) -> CMatrix {
        (self.f)(t)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PropagateOptions {
    /// Substep h satisfies h · max(Γ_total, ‖H‖_max) ≤ step_factor.
    pub step_factor: f64,
    /// Pre-correction trace drift over one output interval that aborts the run.
    pub max_trace_drift: f64,
    /// Compute the smallest eigenvalue of every output state.
    pub track_positivity: bool,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            step_factor: 0.05,
            max_trace_drift: 1e-6,
            track_positivity: true,
        }
    }
}

/// Worst-case numerical hygiene over a propagation run, measured before the
/// per-output hermitization and trace renormalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub max_trace_drift: f64,
    /// Trace drift divided by Γ_total Δt for each output interval (0 without dissipation).
    pub max_trace_drift_per_rate_time: f64,
    pub max_hermiticity_residual: f64,
    /// Smallest eigenvalue over all output states (after correction).
    pub min_eigenvalue: f64,
    pub substeps: u64,
    pub largest_substep: f64,
}

impl Default for StepDiagnostics {
    fn default() -> Self {
        Self::new()
    }
}

impl StepDiagnostics {
    fn new() -> Self {
        Self {
            max_trace_drift: 0.0,
            max_trace_drift_per_rate_time: 0.0,
            max_hermiticity_residual: 0.0,
            min_eigenvalue: f64::INFINITY,
            substeps: 0,
            largest_substep: 0.0,
        }
    }

    /// Combines the worst cases of two runs.
    pub fn merge(&self, other: &Self) -> Self {
        Self {
            max_trace_drift: self.max_trace_drift.max(other.max_trace_drift),
            max_trace_drift_per_rate_time: self
                .max_trace_drift_per_rate_time
                .max(other.max_trace_drift_per_rate_time),
            max_hermiticity_residual: self
                .max_hermiticity_residual
                .max(other.max_hermiticity_residual),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
            substeps: self.substeps + other.substeps,
            largest_substep: self.largest_substep.max(other.largest_substep),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator>,
    pub diagnostics: StepDiagnostics,
}

impl Trajectory {
    pub fn last(&self) -> &DensityOperator {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }

    /// Population of basis state `i` at every output time.
    pub fn population_series(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.population(i)).collect()
    }
}

struct Workspace {
    k: [CMatrix; 4],
    stage: CMatrix,
    scratch: CMatrix,
}

struct StageHamiltonian {
    h_eff: CMatrix,
    h_eff_dag: CMatrix,
}

impl StageHamiltonian {
    fn new(generator: &LindbladGenerator, h: &CMatrix) -> Self {
        let h_eff = generator.effective(h);
        let h_eff_dag = h_eff.adjoint();
        Self { h_eff, h_eff_dag }
    }
}

/// Integrates the Lindblad master equation with classic fixed-step RK4.
///
/// Between consecutive grid points the interval is split at Hamiltonian
/// breakpoints, and each piece is divided into equal substeps with
/// h · max(Γ_total, ‖H‖_max) ≤ `step_factor`. Every output state is
/// re-hermitized as (ρ + ρ†)/2 and renormalized to unit trace; the drift
/// removed by that correction is recorded in the diagnostics.
pub fn propagate(
    hamiltonian: &dyn TimeDependentHamiltonian,
    channels: &[CollapseChannel],
    rho0: &DensityOperator,
    t_grid: &[f64],
    options: &PropagateOptions,
) -> Result<Trajectory> {
    let dim = rho0.dim();
    if hamiltonian.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: "hamiltonian",
            left_dim: hamiltonian.dim(),
            right: "initial state",
            right_dim: dim,
        });
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("time grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "time grid must be finite and strictly increasing".into(),
        ));
    }
    if !(options.step_factor > 0.0) {
        return Err(Error::InvalidInput("step factor must be positive".into()));
    }
    let generator = LindbladGenerator::new(dim, channels)?;

    let mut ws = Workspace {
        k: std::array::from_fn(|_| CMatrix::zeros(dim, dim)),
        stage: CMatrix::zeros(dim, dim),
        scratch: CMatrix::zeros(dim, dim),
    };
    let mut diag = StepDiagnostics::new();
    let mut rho = rho0.matrix().clone();
    let mut times = Vec::with_capacity(t_grid.len());
    let mut states = Vec::with_capacity(t_grid.len());
    times.push(t_grid[0]);
    states.push(rho0.clone());
    if options.track_positivity {
        diag.min_eigenvalue = rho0.min_eigenvalue();
    }

    for w in t_grid.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let mut edges = vec![ta];
        edges.extend(
            hamiltonian
                .breakpoints(ta, tb)
                .into_iter()
                .filter(|&b| b > ta && b < tb),
        );
        edges.push(tb);
        for piece in edges.windows(2) {
            integrate_piece(
                hamiltonian,
                &generator,
                (piece[0], piece[1]),
                &mut rho,
                &mut ws,
                options,
                &mut diag,
            );
        }

        let tr = trace(&rho);
        let drift = (tr - Complex64::new(1.0, 0.0)).norm();
        if drift > options.max_trace_drift {
            return Err(Error::IntegrationFailure {
                time: tb,
                drift,
                limit: options.max_trace_drift,
            });
        }
        diag.max_trace_drift = diag.max_trace_drift.max(drift);
        if generator.total_rate() > 0.0 {
            let per = drift / (generator.total_rate() * (tb - ta));
            diag.max_trace_drift_per_rate_time = diag.max_trace_drift_per_rate_time.max(per);
        }
        diag.max_hermiticity_residual = diag
            .max_hermiticity_residual
            .max(hermiticity_residual(&rho));

        let corrected = (&rho + rho.adjoint()) * Complex64::new(0.5 / tr.re, 0.0);
        rho = corrected;
        if options.track_positivity {
            diag.min_eigenvalue = diag.min_eigenvalue.min(hermitian_eigenvalues(&rho)[0]);
        }
        times.push(tb);
        states.push(DensityOperator::from_propagated(rho.clone()));
    }
    if !options.track_positivity {
        diag.min_eigenvalue = f64::NAN;
    }
    debug!(
        "propagated {} outputs with {} substeps, max drift {:e}",
        times.len(),
        diag.substeps,
        diag.max_trace_drift
    );
    Ok(Trajectory {
        times,
        states,
        diagnostics: diag,
    })
}

fn integrate_piece(
    hamiltonian: &dyn TimeDependentHamiltonian,
    generator: &LindbladGenerator,
    piece: (f64, f64),
    rho: &mut CMatrix,
    ws: &mut Workspace,
    options: &PropagateOptions,
    diag: &mut StepDiagnostics,
) {
    let (pa, pb) = piece;
    let span = pb - pa;
    let h_start = hamiltonian.on_piece(pa, piece);
    let h_mid = hamiltonian.on_piece(0.5 * (pa + pb), piece);
    let h_end = hamiltonian.on_piece(pb, piece);
    let scale = generator
        .total_rate()
        .max(max_abs(&h_start))
        .max(max_abs(&h_mid))
        .max(max_abs(&h_end));
    let n = if scale > 0.0 {
        ((span * scale / options.step_factor).ceil() as u64).max(1)
    } else {
        1
    };
    let h = span / n as f64;
    diag.substeps += n;
    diag.largest_substep = diag.largest_substep.max(h);

    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let third = Complex64::new(h / 3.0, 0.0);

    let mut left = StageHamiltonian::new(generator, &h_start);
    for step in 0..n {
        let s = pa + step as f64 * h;
        let s_end = if step + 1 == n { pb } else { s + h };
        let mid = StageHamiltonian::new(generator, &hamiltonian.on_piece(s + 0.5 * h, piece));
        let right = StageHamiltonian::new(generator, &hamiltonian.on_piece(s_end, piece));

        let [k1, k2, k3, k4] = &mut ws.k;
        generator.apply_into(&left.h_eff, &left.h_eff_dag, rho, k1, &mut ws.scratch);

        ws.stage.copy_from(rho);
        add_scaled(&mut ws.stage, half, k1);
        generator.apply_into(&mid.h_eff, &mid.h_eff_dag, &ws.stage, k2, &mut ws.scratch);

        ws.stage.copy_from(rho);
        add_scaled(&mut ws.stage, half, k2);
        generator.apply_into(&mid.h_eff, &mid.h_eff_dag, &ws.stage, k3, &mut ws.scratch);

        ws.stage.copy_from(rho);
        add_scaled(&mut ws.stage, full, k3);
        generator.apply_into(
            &right.h_eff,
            &right.h_eff_dag,
            &ws.stage,
            k4,
            &mut ws.scratch,
        );

        add_scaled(rho, sixth, k1);
        add_scaled(rho, third, k2);
        add_scaled(rho, third, k3);
        add_scaled(rho, sixth, k4);

        left = right;
    }
}

/// y += a·x
#[inline]
fn add_scaled(y: &mut CMatrix, a: Complex64, x: &CMatrix) {
    y.zip_apply(x, |yi, xi| *yi += a * xi);
}
