use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// One CSV table. Several blocks are separated by a blank line.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Block {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// 17 significant digits in scientific notation, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render(blocks: &[Block]) -> Result<String, CliError> {
    let mut text = String::new();
    for (k, block) in blocks.iter().enumerate() {
        if k > 0 {
            text.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&block.header)?;
        for row in &block.rows {
            w.write_record(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(std::io::Error::other(e.to_string())))?;
        text.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    }
    Ok(text)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
