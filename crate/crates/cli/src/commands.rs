use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Matrix3;
use oner_core::efg::{asymmetry, surface_mesh, EfgTable};
use oner_core::oner::{
    fit_rabi, fourier_coefficients, plan_unchecked, q0_q1, simulate_coupled,
    simulate_pulsed_two_level, simulate_spin_effective, steady_state as two_level_steady_state,
    OnerPlan, ScaledProblem,
};
use oner_core::qdyn::PropagateOptions;
use oner_core::spin::{quadrupole_correction, transition_amplitude, HalfInt};
use oner_core::tensor::from_components;
use rayon::prelude::*;

use crate::error::CliError;
use crate::output::{num, Block};
use crate::scenario::{pair_from_table, NqiSource, Resolved, UnitMode};

const FOURIER_TERMS: usize = 10;

/// Tables to emit plus notes for stderr.
#[derive(Debug, Default)]
pub struct Report {
    pub blocks: Vec<Block>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Coupled,
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// diag(1, 1, 1)
    Isotropic,
    /// diag(1, -1, 0), η = 1
    EtaOne,
    /// diag(1, 1, -2), η = 0
    EtaZero,
    /// diag(-3, 2, 1), η = 1/3
    EtaThird,
}

impl Preset {
    fn tensor(self) -> Matrix3<f64> {
        let d = match self {
            Self::Isotropic => [1.0, 1.0, 1.0],
            Self::EtaOne => [1.0, -1.0, 0.0],
            Self::EtaZero => [1.0, 1.0, -2.0],
            Self::EtaThird => [-3.0, 2.0, 1.0],
        };
        Matrix3::from_diagonal(&d.into())
    }
}

fn label(t: (HalfInt, HalfInt)) -> String {
    format!("{}->{}", t.0, t.1)
}

fn hz(w: f64) -> f64 {
    w / (2.0 * PI)
}

pub fn steady_state(r: &Resolved) -> Result<Report, CliError> {
    let ss = two_level_steady_state(&r.params)?;
    let mut block = Block::new(["rho_ee", "rho_eg_re", "rho_eg_im"]);
    block.push(vec![num(ss.rho_ee), num(ss.rho_eg.re), num(ss.rho_eg.im)]);
    Ok(Report {
        blocks: vec![block],
        notes: Vec::new(),
    })
}

pub fn pulse(r: &Resolved) -> Result<Report, CliError> {
    let params = match r.scenario.pulse.repetition_rate_hz {
        Some(_) => r.params.clone(),
        None => {
            let pair = r.pair.as_ref().zip(r.transition).ok_or_else(|| {
                CliError::Config(
                    "set pulse.repetition_rate_hz or provide [nqi] and [transition]".into(),
                )
            });
            let (pair, tr) = pair?;
            plan_unchecked(pair, &r.setup, r.scenario.theta, &r.params, tr)?.params
        }
    };
    let cfg = &r.scenario.pulse;
    let run = simulate_pulsed_two_level(
        &params,
        cfg.periods,
        cfg.samples_per_period,
        &PropagateOptions::default(),
    )?;

    let mut series = Block::new(["t", "rho_ee", "rho_eg_re", "rho_eg_im"]);
    let (rho_ee, rho_eg) = (run.rho_ee(), run.rho_eg());
    for (k, &t) in run.times().iter().enumerate() {
        series.push(vec![
            num(t),
            num(rho_ee[k]),
            num(rho_eg[k].re),
            num(rho_eg[k].im),
        ]);
    }
    let window = run.period_window(cfg.periods - 1);
    let f = fourier_coefficients(
        &run.times()[window.clone()],
        &rho_ee[window],
        params.period(),
        FOURIER_TERMS,
    )?;
    let mut fourier = Block::new(["n", "a_n", "b_n"]);
    for n in 0..=FOURIER_TERMS {
        fourier.push(vec![n.to_string(), num(f.a[n]), num(f.b[n])]);
    }
    Ok(Report {
        blocks: vec![series, fourier],
        notes: vec![format!(
            "Fourier block taken over period {} of {}",
            cfg.periods, cfg.periods
        )],
    })
}

pub fn spectrum(r: &Resolved) -> Result<Report, CliError> {
    let pair = r.require_pair()?.rotated_about_x(r.scenario.theta);
    let rho = two_level_steady_state(&r.params)?.rho_ee;
    let (q0, _) = q0_q1(&pair, rho)?;
    let spin = r.setup.spin();
    let mut block = Block::new([
        "transition",
        "zeeman_hz",
        "quadrupole_correction_hz",
        "total_hz",
        "mirror",
    ]);
    for (from, to) in spin.quadrupole_transitions() {
        let zeeman = r.setup.transition_energy(from, to, 0.0)?;
        let correction = quadrupole_correction(from, to, q0.zz(), spin)?;
        let total = r.setup.transition_energy(from, to, q0.zz())?;
        let mirror = (
            HalfInt::from_twice(-to.twice()),
            HalfInt::from_twice(-from.twice()),
        );
        block.push(vec![
            label((from, to)),
            num(hz(zeeman)),
            num(hz(correction)),
            num(hz(total)),
            label(mirror),
        ]);
    }
    Ok(Report {
        blocks: vec![block],
        notes: vec!["each correction is the negative of its mirror transition's correction".into()],
    })
}

pub fn rabi_map(r: &Resolved) -> Result<Report, CliError> {
    let (Some(table), Some(NqiSource::Table(spec))) = (&r.table, &r.scenario.nqi) else {
        return Err(CliError::Config(
            "rabi-map needs an [nqi] section that references an EFG table".into(),
        ));
    };
    let grid = r
        .scenario
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("rabi-map needs a [sweep] section".into()))?;
    let rho = two_level_steady_state(&r.params)?.rho_ee;
    let spin = r.setup.spin();
    let transitions = spin.quadrupole_transitions();
    let thetas = grid.theta.values();
    let fields = grid.field_au.values();
    let nodes: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| fields.iter().map(move |&f| (t, f)))
        .collect();

    let rows: Vec<Vec<Vec<String>>> = nodes
        .par_iter()
        .map(|&(theta, field)| {
            let pair = pair_from_table(table, spec, field)?.rotated_about_x(theta);
            let (q0, q1) = q0_q1(&pair, rho)?;
            transitions
                .iter()
                .map(|&(from, to)| {
                    let rabi = transition_amplitude(from, to, &q1, spin)?.norm();
                    let correction = quadrupole_correction(from, to, q0.zz(), spin)?;
                    Ok(vec![
                        num(theta),
                        num(field),
                        label((from, to)),
                        num(hz(rabi)),
                        num(hz(correction)),
                    ])
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut block = Block::new([
        "theta",
        "field_au",
        "transition",
        "rabi_hz",
        "correction_hz",
    ]);
    for row in rows.into_iter().flatten() {
        block.push(row);
    }
    Ok(Report {
        blocks: vec![block],
        notes: Vec::new(),
    })
}

fn coupled_plans(r: &Resolved) -> Result<(OnerPlan, OnerPlan, Option<ScaledProblem>), CliError> {
    let pair = r.require_pair()?;
    let tr = r.require_transition()?;
    let theta = r.scenario.theta;
    let physical = plan_unchecked(pair, &r.setup, theta, &r.params, tr)?;
    Ok(match r.scenario.unit_mode {
        UnitMode::Physical => (physical.clone(), physical, None),
        UnitMode::Scaled => {
            let scaled = ScaledProblem::new(pair, &r.setup, &r.params, tr, r.scenario.tier_ratio)?;
            let p = plan_unchecked(&scaled.pair, &scaled.setup, theta, &r.params, tr)?;
            (p, physical, Some(scaled))
        }
    })
}

pub fn coupled(r: &Resolved, model: Model) -> Result<Report, CliError> {
    let (plan, physical, scaled) = coupled_plans(r)?;
    let cfg = &r.scenario.coupled;
    let period = plan.period();
    let driven = plan.predicted_rabi > 0.0;
    let duration = if driven {
        cfg.rabi_periods / plan.predicted_rabi
    } else {
        cfg.dark_periods as f64 * period
    };
    let options = PropagateOptions::default();
    let (from, to) = plan.transition;

    let (times, populations): (Vec<f64>, Vec<Vec<f64>>) = match model {
        Model::Coupled => {
            let run = simulate_coupled(&plan, duration, cfg.samples_per_period, &options)?;
            (run.times().to_vec(), run.spin_populations)
        }
        Model::Effective => {
            let n = (duration / period - 1e-9).ceil().max(1.0) as usize * cfg.samples_per_period;
            let times: Vec<f64> = (0..=n)
                .map(|k| k as f64 * period / cfg.samples_per_period as f64)
                .collect();
            let run = simulate_spin_effective(&plan.spin_drive(), from, &times, &options)?;
            let pops = run
                .projections
                .iter()
                .map(|&m| run.population(m).expect("level exists"))
                .collect();
            (times, pops)
        }
    };

    let projections = plan.setup.spin().projections();
    let time_column = if driven {
        "t_normalized"
    } else {
        "t_pulse_periods"
    };
    let mut header = vec![time_column.to_string()];
    header.extend(projections.iter().map(|m| format!("p_{m}")));
    let mut series = Block::new(header);
    for (k, &t) in times.iter().enumerate() {
        let scaled_t = if driven {
            t * plan.predicted_rabi
        } else {
            t / period
        };
        let mut row = vec![num(scaled_t)];
        row.extend(populations.iter().map(|p| num(p[k])));
        series.push(row);
    }

    let target_index = projections
        .iter()
        .position(|&m| m == to)
        .expect("transition level exists");
    let fit = fit_rabi(&times, &populations[target_index])?;
    let mut summary = Block::new(["quantity", "value"]);
    let mut put = |k: &str, v: String| summary.push(vec![k.to_string(), v]);
    put("model", format!("{model:?}").to_lowercase());
    put(
        "unit_mode",
        format!("{:?}", r.scenario.unit_mode).to_lowercase(),
    );
    put("transition", label((from, to)));
    put("predicted_rabi_hz", num(plan.predicted_rabi));
    match fit {
        Some(f) => {
            put("fit_rabi_hz", num(f.frequency));
            let dev = if driven {
                num((f.frequency - plan.predicted_rabi) / plan.predicted_rabi)
            } else {
                "none".into()
            };
            put("relative_deviation", dev);
            put("fit_amplitude", num(f.amplitude));
        }
        None => {
            put("fit_rabi_hz", "none".into());
            put("relative_deviation", "none".into());
            put("fit_amplitude", "none".into());
        }
    }
    put("physical_predicted_rabi_hz", num(physical.predicted_rabi));
    if let (Some(s), Some(f)) = (&scaled, fit) {
        put("physical_fit_rabi_hz", num(s.to_physical_rabi(f.frequency)));
    }
    put("repetition_rate_hz", num(plan.repetition_rate));

    let mut notes = Vec::new();
    if !driven {
        notes.push(format!(
            "transition {} is not driven; the run spans {} pulse periods",
            label((from, to)),
            cfg.dark_periods
        ));
    }
    Ok(Report {
        blocks: vec![series, summary],
        notes,
    })
}

pub fn parse_tensor(text: &str) -> Result<Matrix3<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("bad tensor '{text}': {e}")))?;
    let c: [f64; 6] = values
        .try_into()
        .map_err(|_| CliError::Config("a tensor needs six components xx,yy,zz,xy,xz,yz".into()))?;
    Ok(from_components(c))
}

pub fn efg_mesh(
    tensor: &Matrix3<f64>,
    scale: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<Report, CliError> {
    let rows = surface_mesh(tensor, scale, n_theta, n_phi)?;
    let mut block = Block::new(["theta", "phi", "radius", "sign"]);
    for row in rows {
        block.push(vec![
            num(row.theta),
            num(row.phi),
            num(row.radius),
            row.sign.to_string(),
        ]);
    }
    let eta = match asymmetry(tensor) {
        Ok(eta) => format!("asymmetry eta = {}", num(eta)),
        Err(e) => e.to_string(),
    };
    Ok(Report {
        blocks: vec![block],
        notes: vec![eta],
    })
}

pub fn preset_tensor(preset: Preset) -> Matrix3<f64> {
    preset.tensor()
}

pub fn ingest_check(path: &Path) -> Result<Report, CliError> {
    let table = EfgTable::from_path(path).map_err(CliError::Ingestion)?;
    let mut block = Block::new(["state", "rows", "field_min_au", "field_max_au"]);
    for state in table.states() {
        let rows = table.rows(state).map_err(CliError::Ingestion)?;
        let (lo, hi) = table.field_range(state).map_err(CliError::Ingestion)?;
        block.push(vec![
            state.to_string(),
            rows.len().to_string(),
            num(lo),
            num(hi),
        ]);
    }
    Ok(Report {
        blocks: vec![block],
        notes: Vec::new(),
    })
}
