//! Verification and search toolkit for the DDVV inequality
//! `ρ ≤ ‖H‖² − ρ⊥ + c` relating scalar, normal scalar and mean curvature of
//! submanifolds of real space forms, and its matrix form
//! `Σ_{α,β}‖[B_α,B_β]‖² ≤ (Σ_α‖B_α‖²)²` for traceless symmetric matrices.

pub mod checks;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod extremizer;
pub mod families;
pub mod fuzz;
pub mod inequalities;
pub mod matrix;
pub mod report;

pub use curvature::{CurvatureInvariants, MatrixTuple, ShapeOperatorSet};
pub use error::{Error, Result};
pub use inequalities::CheckResult;
pub use matrix::{OrthMatrix, SkewMatrix, SymMatrix};

/// `|a − b| / max(1, |a|, |b|)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
