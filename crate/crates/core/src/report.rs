//! JSON input and report documents, and CSV export of check batches.
//!
//! Numbers are written in shortest round-trip form, so reading back a written
//! document reproduces every matrix entry bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checks::CheckEntry;
use crate::curvature::{CurvatureInvariants, ShapeOperatorSet};
use crate::error::{Error, Result};
use crate::extremizer::SearchReport;
use crate::families::{Comparison, FamilyParams};
use crate::inequalities::CheckResult;
use crate::matrix::SymMatrix;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Shape operators at one point, as read from and written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub ambient_c: f64,
    pub shape_operators: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl InputDocument {
    pub fn from_shape_set(s: &ShapeOperatorSet, label: Option<String>) -> Self {
        Self {
            n: s.n(),
            m: s.m(),
            ambient_c: s.ambient_c(),
            shape_operators: s.ops().iter().map(SymMatrix::rows).collect(),
            label,
        }
    }

    /// Validates shapes and symmetry; near-symmetric matrices are symmetrized.
    pub fn to_shape_set(&self) -> Result<ShapeOperatorSet> {
        if self.shape_operators.len() != self.m {
            return Err(Error::InvalidDocument(format!(
                "m = {} but {} shape operators given",
                self.m,
                self.shape_operators.len()
            )));
        }
        let mut ops = Vec::with_capacity(self.m);
        for (alpha, rows) in self.shape_operators.iter().enumerate() {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(Error::InvalidDocument(format!("shape operator {} is not {}x{}", alpha + 1, self.n, self.n)));
            }
            ops.push(SymMatrix::from_rows(rows)?);
        }
        ShapeOperatorSet::new(ops, self.ambient_c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

impl Serialize for ShapeOperatorSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        InputDocument::from_shape_set(self, None).serialize(serializer)
    }
}

/// Output of `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: InputDocument,
    pub invariants: CurvatureInvariants,
    pub checks: Vec<CheckEntry>,
    pub tool_version: String,
    pub seeds: Vec<u64>,
    pub timestamp: String,
}

/// Output of `family`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReportDocument {
    pub family: String,
    pub params: FamilyParams,
    pub input: InputDocument,
    pub invariants: CurvatureInvariants,
    pub comparisons: Vec<Comparison>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub tool_version: String,
    pub timestamp: String,
}

/// Output of `search`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReportDocument {
    #[serde(flatten)]
    pub report: SearchReport,
    pub tool_version: String,
    pub timestamp: String,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    lhs: f64,
    rhs: f64,
    holds: bool,
    equality: bool,
}

/// One row per check: `label,lhs,rhs,holds,equality`.
pub fn write_checks_csv<'a>(path: &Path, checks: impl IntoIterator<Item = &'a CheckResult>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for c in checks {
        w.serialize(CsvRow { label: &c.label, lhs: c.lhs, rhs: c.rhs, holds: c.holds, equality: c.equality })?;
    }
    w.flush()?;
    Ok(())
}
