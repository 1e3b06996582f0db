use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use nalgebra::Matrix3;

use crate::spin::NqiTensor;
use crate::tensor::{self, Frame};
use crate::units::khz_to_angular;
use crate::{Error, Result};

pub const TABLE_COLUMNS: [&str; 8] = [
    "field_au",
    "state_label",
    "Qxx_kHz",
    "Qyy_kHz",
    "Qzz_kHz",
    "Qxy_kHz",
    "Qxz_kHz",
    "Qyz_kHz",
];

/// One validated row; components are traceless after ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub line: u64,
    pub field_au: f64,
    /// [xx, yy, zz, xy, xz, yz] in kHz.
    pub components: [f64; 6],
}

/// NQI-versus-field curves per electronic state, in the electric frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EfgTable {
    states: BTreeMap<String, Vec<TableRow>>,
}

fn table_err(line: u64, message: impl Into<String>) -> Error {
    Error::Table {
        line,
        message: message.into(),
    }
}

impl EfgTable {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file)
    }

    /// Parses and validates a table. Traces up to 1e-6·max(1, max|Q|) kHz
    /// are removed; larger traces are rejected.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| table_err(1, e.to_string()))?
            .clone();
        let mut index = [0usize; 8];
        for (slot, name) in index.iter_mut().zip(TABLE_COLUMNS) {
            *slot = headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| table_err(1, format!("missing column '{name}'")))?;
        }

        let mut states: BTreeMap<String, Vec<TableRow>> = BTreeMap::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                table_err(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let number = |col: usize| -> Result<f64> {
                let raw = &record[index[col]];
                let v: f64 = raw.parse().map_err(|_| {
                    table_err(
                        line,
                        format!("column '{}': cannot parse '{raw}'", TABLE_COLUMNS[col]),
                    )
                })?;
                if !v.is_finite() {
                    return Err(table_err(
                        line,
                        format!("column '{}' is not finite", TABLE_COLUMNS[col]),
                    ));
                }
                Ok(v)
            };
            let field_au = number(0)?;
            let label = record[index[1]].to_string();
            if label.is_empty() {
                return Err(table_err(line, "empty state_label"));
            }
            let mut c = [0.0; 6];
            for (k, v) in c.iter_mut().enumerate() {
                *v = number(k + 2)?;
            }
            let trace = c[0] + c[1] + c[2];
            let scale = c.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            if trace.abs() > 1e-6 * scale {
                return Err(table_err(
                    line,
                    format!("tensor trace {trace:e} kHz is not zero"),
                ));
            }
            for v in &mut c[..3] {
                *v -= trace / 3.0;
            }
            let rows = states.entry(label.clone()).or_default();
            if let Some(prev) = rows.last() {
                if field_au <= prev.field_au {
                    return Err(table_err(
                        line,
                        format!("field_au must increase strictly within state '{label}'"),
                    ));
                }
            }
            rows.push(TableRow {
                line,
                field_au,
                components: c,
            });
        }
        if states.is_empty() {
            return Err(table_err(1, "table has no data rows"));
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.states.keys().map(String::as_str)
    }

    pub fn rows(&self, state: &str) -> Result<&[TableRow]> {
        self.states
            .get(state)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidInput(format!("state '{state}' not present in table")))
    }

    pub fn field_range(&self, state: &str) -> Result<(f64, f64)> {
        let rows = self.rows(state)?;
        Ok((rows[0].field_au, rows[rows.len() - 1].field_au))
    }

    /// Linearly interpolated NQI components in kHz.
    pub fn components_at(&self, state: &str, field_au: f64) -> Result<[f64; 6]> {
        let rows = self.rows(state)?;
        let (min, max) = self.field_range(state)?;
        if !(min..=max).contains(&field_au) {
            return Err(Error::Extrapolation {
                field: field_au,
                min,
                max,
                state: state.to_string(),
            });
        }
        let hi = rows
            .partition_point(|r| r.field_au < field_au)
            .max(1)
            .min(rows.len() - 1);
        if rows.len() == 1 {
            return Ok(rows[0].components);
        }
        let (a, b) = (&rows[hi - 1], &rows[hi]);
        let w = (field_au - a.field_au) / (b.field_au - a.field_au);
        let mut out = [0.0; 6];
        for (k, v) in out.iter_mut().enumerate() {
            *v = a.components[k] + w * (b.components[k] - a.components[k]);
        }
        Ok(out)
    }

    /// Interpolated NQI tensor (rad/s, electric frame).
    pub fn nqi_at(&self, state: &str, field_au: f64) -> Result<NqiTensor> {
        let c = self.components_at(state, field_au)?;
        let m: Matrix3<f64> = tensor::from_components(c).map(khz_to_angular);
        Ok(NqiTensor::from_matrix_unchecked(m, Frame::Electric))
    }
}
