//! Decision procedures for the DDVV matrix inequality and the known inequalities
//! around it.
//!
//! Every check first rescales its input to unit total squared norm (both sides are
//! homogeneous of the same degree), so a single absolute tolerance fits all inputs.

use serde::{Deserialize, Serialize};

use crate::curvature::{self, commutator_sum, MatrixTuple, ShapeOperatorSet};
use crate::error::{Error, Result};
use crate::matrix::{commutator, frobenius_inner, OrthMatrix, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of one `lhs ≤ rhs` test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub equality: bool,
    pub tol: f64,
}

impl CheckResult {
    /// Compares with scale `max(1, |rhs|)`: `holds` iff `lhs ≤ rhs + tol·scale`,
    /// `equality` iff `|lhs − rhs| ≤ tol·scale`.
    pub fn evaluate(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = rhs.abs().max(1.0);
        let finite = lhs.is_finite() && rhs.is_finite();
        Self {
            label: label.into(),
            lhs,
            rhs,
            holds: finite && lhs <= rhs + tol * scale,
            equality: finite && (lhs - rhs).abs() <= tol * scale,
            tol,
        }
    }

    /// `rhs − lhs`.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Whether the DDVV conjecture was known to hold for these sizes (`m ≤ 3` or `n ≤ 3`).
pub fn ddvv_proved(n: usize, m: usize) -> bool {
    m <= 3 || n <= 3
}

fn unit_scale(mats: &[SymMatrix]) -> f64 {
    let s: f64 = mats.iter().map(SymMatrix::norm_sq).sum();
    if s > 0.0 {
        1.0 / s.sqrt()
    } else {
        1.0
    }
}

fn normalized(mats: &[SymMatrix]) -> Vec<SymMatrix> {
    let t = unit_scale(mats);
    mats.iter().map(|b| b.scale(t)).collect()
}

fn check_dims(mats: &[SymMatrix]) -> Result<()> {
    if let Some(first) = mats.first() {
        if let Some(bad) = mats.iter().find(|b| b.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
    }
    Ok(())
}

/// `Σ_{α,β}‖[B_α,B_β]‖² ≤ (Σ_α‖B_α‖²)²`.
pub fn ddvv_check(t: &MatrixTuple, tol: f64) -> CheckResult {
    let mats = normalized(t.mats());
    let lhs = commutator_sum(&mats).expect("tuple members share dimension");
    let rhs = mats.iter().map(SymMatrix::norm_sq).sum::<f64>().powi(2);
    CheckResult::evaluate("ddvv", lhs, rhs, tol)
}

/// Chern–do Carmo–Kobayashi: `‖[B₁,B₂]‖² ≤ 2‖B₁‖²‖B₂‖²` for symmetric `B₁, B₂`.
pub fn cdk_check(b1: &SymMatrix, b2: &SymMatrix, tol: f64) -> Result<CheckResult> {
    let pair = normalized(&[b1.clone(), b2.clone()]);
    let lhs = commutator(&pair[0], &pair[1])?.norm_sq();
    let rhs = 2.0 * pair[0].norm_sq() * pair[1].norm_sq();
    Ok(CheckResult::evaluate("cdk", lhs, rhs, tol))
}

/// Equality in the CDK lemma.
///
/// Beyond numerical equality, a nonzero pair must carry the invariant content of the
/// rank-two normal form: `rank ≤ 2` for both, `tr(B₁B₂) = 0` and `tr B₁ = tr B₂ = 0`.
pub fn cdk_equality_detect(b1: &SymMatrix, b2: &SymMatrix, tol: f64) -> Result<bool> {
    let res = cdk_check(b1, b2, tol)?;
    if !res.equality {
        return Ok(false);
    }
    if b1.is_zero() && b2.is_zero() {
        return Ok(true);
    }
    let pair = normalized(&[b1.clone(), b2.clone()]);
    let structural = pair.iter().all(|b| b.numerical_rank(tol * b.norm()) <= 2 && b.trace().abs() <= tol)
        && frobenius_inner(&pair[0], &pair[1])?.abs() <= tol;
    Ok(structural)
}

/// Li–Li: `Σ‖[B_α,B_β]‖² + Σ⟨B_α,B_β⟩² ≤ (3/2)(Σ‖B_α‖²)²`, both sums over ordered
/// pairs including `α = β`.
pub fn lili_check(mats: &[SymMatrix], tol: f64) -> Result<CheckResult> {
    check_dims(mats)?;
    let mats = normalized(mats);
    let mut gram_sq = 0.0;
    for a in &mats {
        for b in &mats {
            gram_sq += frobenius_inner(a, b)?.powi(2);
        }
    }
    let lhs = commutator_sum(&mats)? + gram_sq;
    let rhs = 1.5 * mats.iter().map(SymMatrix::norm_sq).sum::<f64>().powi(2);
    Ok(CheckResult::evaluate("li-li", lhs, rhs, tol))
}

/// `sqrt((2m−1)/(3m−3))`.
pub fn weak_constant_m(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidDimension(format!("weak constant needs m >= 2, got {m}")));
    }
    let m = m as f64;
    Ok(((2.0 * m - 1.0) / (3.0 * m - 3.0)).sqrt())
}

/// `sqrt((2/3)(n²+n−3)/(n²+n−4))`.
pub fn weak_constant_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("weak constant needs n >= 2, got {n}")));
    }
    let q = (n * n + n) as f64;
    Ok((2.0 / 3.0 * (q - 3.0) / (q - 4.0)).sqrt())
}

fn weak_bound(s: &ShapeOperatorSet, constant: f64, label: &str, tol: f64) -> CheckResult {
    let s = s.normalized();
    let inv = curvature::invariants(&s);
    CheckResult::evaluate(label, inv.rho, inv.h_sq - constant * inv.rho_perp + s.ambient_c(), tol)
}

/// The two weakened DDVV bounds `ρ ≤ ‖H‖² − C·ρ⊥ + c` with the codimension constant
/// and the dimension constant.
///
/// For `m = 1` the normal curvature vanishes and the codimension constant is taken as 1.
pub fn weak_checks(s: &ShapeOperatorSet, tol: f64) -> (CheckResult, CheckResult) {
    let cm = if s.m() >= 2 { weak_constant_m(s.m()).expect("m >= 2") } else { 1.0 };
    let cn = weak_constant_n(s.n()).expect("shape sets have n >= 2");
    (weak_bound(s, cm, "weak-m", tol), weak_bound(s, cn, "weak-n", tol))
}

/// Chen: `ρ ≤ ‖H‖² + c`.
pub fn chen_check(s: &ShapeOperatorSet, tol: f64) -> CheckResult {
    let s = s.normalized();
    let inv = curvature::invariants(&s);
    CheckResult::evaluate("chen", inv.rho, inv.h_sq + s.ambient_c(), tol)
}

/// DDVV stated pointwise on shape operators: `ρ ≤ ‖H‖² − ρ⊥ + c`.
pub fn ddvv_pointwise_check(s: &ShapeOperatorSet, tol: f64) -> CheckResult {
    weak_bound(s, 1.0, "ddvv-pointwise", tol)
}

/// Gram matrix `G_{αβ} = ⟨B_α,B_β⟩`.
pub fn gram(mats: &[SymMatrix]) -> Result<SymMatrix> {
    check_dims(mats)?;
    let m = mats.len();
    let mut entries = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let v = frobenius_inner(&mats[a], &mats[b])?;
            entries[a * m + b] = v;
            entries[b * m + a] = v;
        }
    }
    SymMatrix::new(m, entries)
}

/// Orthogonal α-mixing that makes the tuple pairwise Frobenius-orthogonal, members
/// ordered by decreasing norm.
pub fn gram_diagonalize(mats: &[SymMatrix]) -> Result<Vec<SymMatrix>> {
    let g = gram(mats)?;
    let (_, vectors) = g.eigh();
    let m = mats.len();
    // eigh is ascending; reverse so the largest-norm direction comes first.
    let mut entries = vec![0.0; m * m];
    for (col, v) in vectors.iter().rev().enumerate() {
        for (row, x) in v.iter().enumerate() {
            entries[row * m + col] = *x;
        }
    }
    let o = OrthMatrix::new(m, entries).or_else(|_| {
        // Repeated eigenvalues can leave a slightly non-orthogonal basis; re-orthonormalize.
        let q = nalgebra::DMatrix::from_fn(m, m, |i, j| vectors[m - 1 - j][i]).qr().q();
        OrthMatrix::new(m, (0..m * m).map(|k| q[(k / m, k % m)]).collect())
    })?;
    curvature::mix(mats, &o)
}

/// The two largest members after Gram diagonalization, ignoring members with norm
/// below `1e−6` of the tuple's total norm.
pub fn dominant_pair(mats: &[SymMatrix]) -> Result<Option<(SymMatrix, SymMatrix)>> {
    let total = mats.iter().map(SymMatrix::norm_sq).sum::<f64>().sqrt();
    let mixed = gram_diagonalize(mats)?;
    let mut kept = mixed.into_iter().filter(|b| b.norm() >= 1e-6 * total);
    Ok(match (kept.next(), kept.next()) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    })
}

/// Composed weakened chain `(2m−1)/(2m−2)·Σ‖[B_α,B_β]‖² ≤ (3/2)(Σ‖B_α‖²)²`,
/// evaluated on the Gram-diagonalized tuple.
pub fn weak_chain_check(t: &MatrixTuple, tol: f64) -> Result<CheckResult> {
    let m = t.m();
    if m < 2 {
        return Err(Error::InvalidDimension("weak chain needs m >= 2".into()));
    }
    let mats = normalized(&gram_diagonalize(t.mats())?);
    let factor = (2 * m - 1) as f64 / (2 * m - 2) as f64;
    let lhs = factor * commutator_sum(&mats)?;
    let rhs = 1.5 * mats.iter().map(SymMatrix::norm_sq).sum::<f64>().powi(2);
    Ok(CheckResult::evaluate("weak-chain", lhs, rhs, tol))
}
