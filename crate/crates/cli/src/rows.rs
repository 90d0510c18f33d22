use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Mu,
    Omega,
    RhoLfa,
    RhoHat,
    Iters,
}

/// One output record. `h` is written as a float; all grids have power-of-two
/// sizes, so the decimal form is exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub beta: f64,
    pub h: f64,
    pub nu1: usize,
    pub nu2: usize,
    pub metric: Metric,
    /// `None` when a solve hit its iteration cap
    pub value: Option<f64>,
    pub runtime_ms: Option<u64>,
    pub seed: Option<u64>,
}

impl ResultRow {
    pub fn n_cells(&self) -> usize {
        (1.0 / self.h).round() as usize
    }

    pub fn nu(&self) -> usize {
        self.nu1 + self.nu2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn emit<W: Write>(rows: &[ResultRow], format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut w);
            if rows.is_empty() {
                out.write_record([
                    "experiment",
                    "beta",
                    "h",
                    "nu1",
                    "nu2",
                    "metric",
                    "value",
                    "runtime_ms",
                    "seed",
                ])?;
            }
            for row in rows {
                out.serialize(row)?;
            }
            out.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn write_rows(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let io_err = |source| CliError::Io {
                path: p.to_path_buf(),
                source,
            };
            let file = File::create(p).map_err(io_err)?;
            emit(rows, format, BufWriter::new(file)).map_err(|e| match e {
                CliError::Stdout(source) => io_err(source),
                other => other,
            })
        }
        None => emit(rows, format, io::stdout().lock()),
    }
}
