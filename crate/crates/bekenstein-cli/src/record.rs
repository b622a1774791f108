//! Result rows and their CSV/JSON serialisation.

use crate::config::{ExperimentConfig, Suite};
use crate::error::Result;
use bekenstein_core::interchange::SubspaceRecord;
use bekenstein_core::Inequality;
use serde::Serialize;
use std::cmp::Ordering;
use std::io::Write;

/// Version tag written as the first CSV line and into JSON output.
pub const SCHEMA: &str = "bekenstein-records/1";

/// CSV column names, in field order.
pub const COLUMNS: [&str; 12] =
    ["suite", "N", "R", "alpha", "sample_id", "quantity", "lhs", "rhs", "margin", "tol", "pass", "wall_time_ms"];

/// Where a record sits in the sweep. `NaN` marks a coordinate that does not
/// apply (e.g. `R` for a matrix-level check); `n` is the matrix dimension for
/// the finite-dimensional suites and the grid size for the chiral ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    pub suite: Suite,
    pub n: usize,
    pub r: f64,
    pub alpha: f64,
    pub sample_id: u64,
}

impl Key {
    pub fn new(suite: Suite, n: usize, sample_id: u64) -> Self {
        Key { suite, n, r: f64::NAN, alpha: f64::NAN, sample_id }
    }

    pub fn with_r(self, r: f64) -> Self {
        Key { r, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Key { alpha, ..self }
    }
}

/// One evaluated check, `lhs ≤ rhs` up to `tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub suite: Suite,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub alpha: f64,
    pub sample_id: u64,
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
    /// Set when the evaluation itself failed; not part of the CSV schema.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub numerical: bool,
}

impl ExperimentRecord {
    /// Record with an explicit margin; `pass ⇔ margin ≥ -tol`.
    pub fn new(key: Key, quantity: &str, lhs: f64, rhs: f64, margin: f64, tol: f64) -> Self {
        ExperimentRecord {
            suite: key.suite,
            n: key.n,
            r: key.r,
            alpha: key.alpha,
            sample_id: key.sample_id,
            quantity: quantity.to_owned(),
            lhs,
            rhs,
            margin,
            tol,
            pass: margin >= -tol,
            wall_time_ms: 0.0,
            error: None,
            numerical: false,
        }
    }

    /// `lhs ≤ rhs` with margin `rhs - lhs`.
    pub fn inequality(key: Key, quantity: &str, q: Inequality, tol: f64) -> Self {
        Self::new(key, quantity, q.lhs, q.rhs, q.margin(), tol)
    }

    /// `residual ≤ 0` up to `tol`: lhs is the residual, rhs zero.
    pub fn residual(key: Key, quantity: &str, residual: f64, tol: f64) -> Self {
        Self::new(key, quantity, residual, 0.0, -residual, tol)
    }

    /// `lhs ≤ rhs` with the margin relative to `|rhs|`.
    pub fn relative(key: Key, quantity: &str, q: Inequality, tol: f64) -> Self {
        Self::new(key, quantity, q.lhs, q.rhs, 1.0 - q.lhs / q.rhs, tol)
    }

    /// A check that could not be evaluated.
    pub fn failed(key: Key, quantity: &str, err: &bekenstein_core::Error) -> Self {
        let mut rec = Self::new(key, quantity, f64::NAN, f64::NAN, f64::NAN, f64::NAN);
        rec.pass = false;
        rec.error = Some(err.to_string());
        rec.numerical = err.is_numerical();
        rec
    }

    pub fn timed(mut self, ms: f64) -> Self {
        self.wall_time_ms = ms;
        self
    }

    /// Canonical order: suite, N, R, alpha, sample_id, then quantity.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.suite
            .cmp(&other.suite)
            .then(self.n.cmp(&other.n))
            .then(self.r.total_cmp(&other.r))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.sample_id.cmp(&other.sample_id))
            .then_with(|| self.quantity.cmp(&other.quantity))
    }

    fn csv_row(&self) -> [String; 12] {
        [
            self.suite.name().to_owned(),
            self.n.to_string(),
            float(self.r),
            float(self.alpha),
            self.sample_id.to_string(),
            self.quantity.clone(),
            float(self.lhs),
            float(self.rhs),
            float(self.margin),
            float(self.tol),
            self.pass.to_string(),
            float(self.wall_time_ms),
        ]
    }
}

/// 17 significant digits; round-trips every finite `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn sort_canonical(records: &mut [ExperimentRecord]) {
    records.sort_by(ExperimentRecord::canonical_cmp);
}

/// Schema line, header row, then one row per record.
pub fn write_csv<W: Write>(mut w: W, records: &[ExperimentRecord]) -> Result<()> {
    writeln!(w, "#schema={SCHEMA}")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(COLUMNS)?;
    for r in records {
        out.write_record(r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

/// JSON document for `--out *.json`. Non-finite floats become `null`.
#[derive(Debug, Serialize)]
pub struct JsonReport<'a> {
    pub schema: &'static str,
    pub config: &'a ExperimentConfig,
    pub records: &'a [ExperimentRecord],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub subspaces: &'a [SubspaceRecord],
}

pub fn write_json<W: Write>(w: W, report: &JsonReport<'_>) -> Result<()> {
    serde_json::to_writer_pretty(w, report)?;
    Ok(())
}

/// Pass/fail counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
    pub numerical: usize,
}

impl Summary {
    pub fn of(records: &[ExperimentRecord]) -> Self {
        Summary {
            total: records.len(),
            failed: records.iter().filter(|r| !r.pass).count(),
            numerical: records.iter().filter(|r| r.numerical).count(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.numerical > 0 {
            crate::EXIT_NUMERICAL
        } else if self.failed > 0 {
            crate::EXIT_PROPERTY
        } else {
            crate::EXIT_OK
        }
    }
}
