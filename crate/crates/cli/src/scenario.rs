//! Scenario files: a flat TOML key set describing one simulation setup.
//!
//! Frequencies are ordinary frequencies in Hz (tensor components in kHz)
//! and are converted to angular frequency when the scenario is resolved.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use oner_core::efg::{EfgTable, NucleusRecord};
use oner_core::oner::{SpinSetup, StatePairNqi, TwoLevelParams};
use oner_core::spin::{HalfInt, NqiTensor};
use oner_core::tensor::Frame;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::nuclei;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Physical,
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub nucleus: NucleusSpec,
    pub b0_tesla: f64,
    /// Tilt of the magnetic field from the electric-frame z axis about x, radians.
    pub theta: f64,
    #[serde(default)]
    pub unit_mode: UnitMode,
    #[serde(default = "default_tier_ratio")]
    pub tier_ratio: f64,
    pub two_level: TwoLevelSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nqi: Option<NqiSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionSpec>,
    #[serde(default)]
    pub pulse: PulseSection,
    #[serde(default)]
    pub coupled: CoupledSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepGrid>,
}

fn default_tier_ratio() -> f64 {
    oner_core::oner::DEFAULT_TIER_RATIO
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NucleusSpec {
    Name(String),
    Record(NucleusEntry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NucleusEntry {
    pub name: String,
    pub two_i: u32,
    pub q_barn: f64,
    pub gamma_mhz_per_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLevelSection {
    pub rabi_hz: f64,
    pub decay_hz: f64,
    #[serde(default)]
    pub dephasing_hz: f64,
    #[serde(default)]
    pub detuning_hz: f64,
    #[serde(default = "default_duty")]
    pub duty: f64,
}

fn default_duty() -> f64 {
    0.5
}

/// Ground/excited NQI tensors, inline or interpolated from an EFG table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NqiSource {
    Inline(InlineNqi),
    Table(TableNqi),
}

/// Components [xx, yy, zz, xy, xz, yz] in kHz, electric frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineNqi {
    pub ground_khz: [f64; 6],
    pub excited_khz: [f64; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_diagonal_khz: Option<[f64; 6]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableNqi {
    /// Relative paths are taken from the scenario file's directory.
    pub table: PathBuf,
    pub field_au: f64,
    pub ground_state: String,
    pub excited_state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    /// Defaults to the planned repetition rate of the selected transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetition_rate_hz: Option<f64>,
    pub periods: usize,
    pub samples_per_period: usize,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            repetition_rate_hz: None,
            periods: 3,
            samples_per_period: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledSection {
    /// Run length in predicted Rabi periods.
    pub rabi_periods: f64,
    /// Run length in pulse periods when the transition is not driven.
    pub dark_periods: usize,
    pub samples_per_period: usize,
}

impl Default for CoupledSection {
    fn default() -> Self {
        Self {
            rabi_periods: 2.0,
            dark_periods: 10,
            samples_per_period: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub theta: Axis,
    pub field_au: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.max
                } else {
                    self.min + k as f64 * step
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.count < 2 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(CliError::Config(format!(
                "sweep axis {name} needs finite min <= max and count >= 2"
            )));
        }
        Ok(())
    }
}

/// Scenario with its inputs converted to core types.
pub struct Resolved {
    pub scenario: Scenario,
    pub setup: SpinSetup,
    pub params: TwoLevelParams,
    pub table: Option<EfgTable>,
    pub pair: Option<StatePairNqi>,
    pub transition: Option<(HalfInt, HalfInt)>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    fn nucleus_record(&self) -> Result<NucleusRecord, CliError> {
        match &self.nucleus {
            NucleusSpec::Name(name) => nuclei::lookup(name).ok_or_else(|| {
                let known: Vec<_> = nuclei::names().collect();
                CliError::Config(format!(
                    "unknown nucleus '{name}' (known: {})",
                    known.join(", ")
                ))
            }),
            NucleusSpec::Record(r) => Ok(NucleusRecord::new(
                &r.name,
                r.two_i,
                r.q_barn,
                r.gamma_mhz_per_t,
            )?),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let tl = &self.two_level;
        for (name, v) in [
            ("rabi_hz", tl.rabi_hz),
            ("decay_hz", tl.decay_hz),
            ("dephasing_hz", tl.dephasing_hz),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "two_level.{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !tl.detuning_hz.is_finite() || !self.b0_tesla.is_finite() || !self.theta.is_finite() {
            return Err(CliError::Config(
                "detuning, field and angle must be finite".into(),
            ));
        }
        if let Some(rate) = self.pulse.repetition_rate_hz {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(CliError::Config(format!(
                    "pulse.repetition_rate_hz must be positive, got {rate}"
                )));
            }
        }
        if self.pulse.periods == 0 || self.pulse.samples_per_period < 2 {
            return Err(CliError::Config(
                "pulse needs periods >= 1 and samples_per_period >= 2".into(),
            ));
        }
        let c = &self.coupled;
        if !(c.rabi_periods > 0.0) || c.dark_periods == 0 || c.samples_per_period < 2 {
            return Err(CliError::Config(
                "coupled needs rabi_periods > 0, dark_periods >= 1 and samples_per_period >= 2"
                    .into(),
            ));
        }
        if let Some(grid) = &self.sweep {
            grid.theta.validate("theta")?;
            grid.field_au.validate("field_au")?;
        }
        Ok(())
    }

    /// Validates the scenario and builds the core inputs. Relative table
    /// paths are resolved against `base_dir`.
    pub fn resolve(
        self,
        base_dir: &Path,
        unit_override: Option<UnitMode>,
    ) -> Result<Resolved, CliError> {
        let mut scenario = self;
        if let Some(mode) = unit_override {
            scenario.unit_mode = mode;
        }
        scenario.validate()?;
        let nucleus = scenario.nucleus_record()?;
        let setup = SpinSetup::from_nucleus(&nucleus, scenario.b0_tesla)?;
        let tl = &scenario.two_level;
        let period = scenario.pulse.repetition_rate_hz.map_or(1.0, |r| 1.0 / r);
        let angular = |f: f64| 2.0 * PI * f;
        let params = TwoLevelParams::new(
            angular(tl.rabi_hz),
            angular(tl.detuning_hz),
            angular(tl.decay_hz),
            angular(tl.dephasing_hz),
            period,
        )?
        .with_duty(tl.duty)?;

        let transition = match &scenario.transition {
            Some(t) => {
                let pair = (t.from.parse::<HalfInt>()?, t.to.parse::<HalfInt>()?);
                oner_core::spin::ordered_transition(pair.0, pair.1, setup.spin())?;
                Some(pair)
            }
            None => None,
        };

        let (table, pair) = match &scenario.nqi {
            None => (None, None),
            Some(NqiSource::Inline(n)) => {
                let t = |c: [f64; 6]| NqiTensor::from_khz(c, Frame::Electric);
                let qeg = n.off_diagonal_khz.map(t).transpose()?;
                (
                    None,
                    Some(StatePairNqi::new(t(n.ground_khz)?, t(n.excited_khz)?, qeg)?),
                )
            }
            Some(NqiSource::Table(spec)) => {
                let path = base_dir.join(&spec.table);
                if !path.is_file() {
                    return Err(CliError::Config(format!(
                        "EFG table {} does not exist",
                        path.display()
                    )));
                }
                let table = EfgTable::from_path(&path).map_err(CliError::Ingestion)?;
                let pair = pair_from_table(&table, spec, spec.field_au)?;
                (Some(table), Some(pair))
            }
        };

        Ok(Resolved {
            scenario,
            setup,
            params,
            table,
            pair,
            transition,
        })
    }
}

pub fn pair_from_table(
    table: &EfgTable,
    spec: &TableNqi,
    field_au: f64,
) -> Result<StatePairNqi, CliError> {
    let g = table
        .nqi_at(&spec.ground_state, field_au)
        .map_err(CliError::Ingestion)?;
    let e = table
        .nqi_at(&spec.excited_state, field_au)
        .map_err(CliError::Ingestion)?;
    Ok(StatePairNqi::new(g, e, None)?)
}

impl Resolved {
    pub fn require_pair(&self) -> Result<&StatePairNqi, CliError> {
        self.pair
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs an [nqi] section".into()))
    }

    pub fn require_transition(&self) -> Result<(HalfInt, HalfInt), CliError> {
        self.transition
            .ok_or_else(|| CliError::Config("this command needs a [transition] section".into()))
    }
}
