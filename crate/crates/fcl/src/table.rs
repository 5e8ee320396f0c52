//! Result tables and their CSV encoding.
//!
//! Reals are written as `{:.16e}` (17 significant digits), `+inf` as the
//! literal `inf`. A `#` footer records the config hash and crate versions and
//! nothing time-dependent, so identical configs give identical bytes.

use std::fmt::Write as _;

use crate::error::{FclError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Int(i) => Some(*i as f64),
            Self::Real(x) => Some(*x),
            Self::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Self::Int(i)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Self::Int(i as i64)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

pub fn format_real(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// How the optional SVG layer should draw a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotHint {
    None,
    /// Every other numeric column against column `x`.
    Lines { x: usize },
    /// Long format: one cell per row at `(x, y)` colored by `value`.
    Heatmap { x: usize, y: usize, value: usize },
    /// Wide format: rows are times (column 0), remaining columns are sites.
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub observable: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: PlotHint,
}

impl ResultTable {
    pub fn new(observable: impl Into<String>, columns: Vec<String>, plot: PlotHint) -> Self {
        Self { observable: observable.into(), columns, rows: Vec::new(), plot }
    }

    pub fn with_columns(observable: &str, columns: &[&str], plot: PlotHint) -> Self {
        Self::new(observable, columns.iter().map(|c| c.to_string()).collect(), plot)
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(FclError::Config(format!(
                "{}: row has {} cells, table has {} columns",
                self.observable,
                row.len(),
                self.columns.len()
            )));
        }
        for cell in &row {
            if let Cell::Real(x) = cell {
                if x.is_nan() || *x == f64::NEG_INFINITY {
                    return Err(FclError::Config(format!("{}: non-finite value {x}", self.observable)));
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    pub fn file_name(&self, experiment: &str) -> String {
        format!("{experiment}_{}.csv", self.observable)
    }

    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Real(x) => out.push_str(&format_real(*x)),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out.push_str(&provenance.footer());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub experiment: String,
    /// Hex SHA-256 of the config file bytes.
    pub config_hash: String,
}

impl Provenance {
    pub fn new(experiment: &str, config_bytes: &[u8]) -> Self {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(config_bytes);
        let config_hash = digest.iter().fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        });
        Self { experiment: experiment.into(), config_hash }
    }

    pub fn footer(&self) -> String {
        format!(
            "# experiment: {}\n# config-sha256: {}\n# fcl {} / fcl-core {}\n",
            self.experiment,
            self.config_hash,
            env!("CARGO_PKG_VERSION"),
            fcl_core::VERSION
        )
    }
}
