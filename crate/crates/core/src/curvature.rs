//! Pointwise curvature invariants of a submanifold `Mⁿ ⊂ M̃ⁿ⁺ᵐ(c)` computed from its
//! shape operators in orthonormal tangent and normal frames.
//!
//! Both the scalar curvature and the normal scalar curvature are available through
//! two independent routes: the frame-component sums coming from the Gauss and Ricci
//! equations, and the closed forms in terms of the traceless parts `B_α`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, commutator, conjugate, traceless_project, OrthMatrix, SymMatrix};

/// Relative tracelessness tolerance for [`MatrixTuple`] members.
pub const TRACELESS_TOL: f64 = 1e-12;

/// Shape operators `A_α = A_{u_α}` at one point, plus the ambient curvature `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeOperatorSet {
    n: usize,
    ops: Vec<SymMatrix>,
    ambient_c: f64,
}

impl ShapeOperatorSet {
    pub fn new(ops: Vec<SymMatrix>, ambient_c: f64) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidDimension("codimension m must be at least 1".into()))?;
        let n = first.dim();
        if n < 2 {
            return Err(Error::InvalidDimension("tangent dimension n must be at least 2".into()));
        }
        if let Some(bad) = ops.iter().find(|a| a.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        if !ambient_c.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, ops, ambient_c })
    }

    /// Totally geodesic point: `m` zero operators.
    pub fn zeros(n: usize, m: usize, ambient_c: f64) -> Result<Self> {
        Self::new(vec![SymMatrix::zeros(n); m], ambient_c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[SymMatrix] {
        &self.ops
    }

    pub fn ambient_c(&self) -> f64 {
        self.ambient_c
    }

    pub fn with_ambient_c(&self, c: f64) -> Self {
        Self { ambient_c: c, ..self.clone() }
    }

    /// Rotates the tangent frame: every `A_α ↦ Oᵀ A_α O`.
    pub fn conjugate_all(&self, o: &OrthMatrix) -> Result<Self> {
        let ops = self.ops.iter().map(|a| conjugate(a, o)).collect::<Result<_>>()?;
        Ok(Self { ops, ..self.clone() })
    }

    /// Rotates the normal frame: `A'_β = Σ_α O_{αβ} A_α`.
    pub fn mix_normal(&self, o: &OrthMatrix) -> Result<Self> {
        let ops = mix(&self.ops, o)?;
        Ok(Self { ops, ..self.clone() })
    }

    /// Scales `A_α ↦ t·A_α` and `c ↦ t²·c`; every curvature quantity scales by `t²`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            n: self.n,
            ops: self.ops.iter().map(|a| a.scale(t)).collect(),
            ambient_c: self.ambient_c * t * t,
        }
    }

    /// Rescales so that `Σ‖A_α‖² = 1`; a zero set is returned unchanged.
    pub fn normalized(&self) -> Self {
        let s: f64 = self.ops.iter().map(SymMatrix::norm_sq).sum();
        if s > 0.0 {
            self.scaled(1.0 / s.sqrt())
        } else {
            self.clone()
        }
    }
}

/// `m` traceless symmetric `n×n` matrices `B_1, …, B_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SymMatrix>", into = "Vec<SymMatrix>")]
pub struct MatrixTuple {
    mats: Vec<SymMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<SymMatrix>) -> Result<Self> {
        let n = mats
            .first()
            .ok_or_else(|| Error::InvalidDimension("tuple must contain at least one matrix".into()))?
            .dim();
        for (index, b) in mats.iter().enumerate() {
            if b.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
            }
            let trace = b.trace();
            if trace.abs() > TRACELESS_TOL * b.norm() {
                return Err(Error::NotTraceless { index, trace });
            }
        }
        Ok(Self { mats })
    }

    /// Traceless projection of each member.
    pub fn project(mats: &[SymMatrix]) -> Result<Self> {
        Self::new(mats.iter().map(traceless_project).collect())
    }

    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        Self::new(vec![SymMatrix::zeros(n); m])
    }

    pub fn n(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[SymMatrix] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<SymMatrix> {
        self.mats
    }

    /// `Σ_α ‖B_α‖²`.
    pub fn norm_sq(&self) -> f64 {
        self.mats.iter().map(SymMatrix::norm_sq).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self { mats: self.mats.iter().map(|b| b.scale(t)).collect() }
    }

    pub fn conjugate_all(&self, o: &OrthMatrix) -> Result<Self> {
        Self::project(&self.mats.iter().map(|b| conjugate(b, o)).collect::<Result<Vec<_>>>()?)
    }

    /// `B'_β = Σ_α O_{αβ} B_α`.
    pub fn mix(&self, o: &OrthMatrix) -> Result<Self> {
        Self::project(&mix(&self.mats, o)?)
    }
}

impl TryFrom<Vec<SymMatrix>> for MatrixTuple {
    type Error = Error;
    fn try_from(mats: Vec<SymMatrix>) -> Result<Self> {
        Self::new(mats)
    }
}

impl From<MatrixTuple> for Vec<SymMatrix> {
    fn from(t: MatrixTuple) -> Self {
        t.mats
    }
}

pub(crate) fn mix(mats: &[SymMatrix], o: &OrthMatrix) -> Result<Vec<SymMatrix>> {
    let m = mats.len();
    if o.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: o.dim() });
    }
    let n = mats[0].dim();
    (0..m)
        .map(|beta| {
            (0..m).try_fold(SymMatrix::zeros(n), |acc, alpha| acc.add_scaled(o.get(alpha, beta), &mats[alpha]))
        })
        .collect()
}

/// Normalized scalar curvature, normal scalar curvature and mean curvature at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureInvariants {
    pub rho: f64,
    pub rho_perp: f64,
    pub h_sq: f64,
    pub b_sq: f64,
    /// `‖H‖² − ρ⊥ + c − ρ`; nonnegative iff the DDVV inequality holds here.
    pub slack: f64,
}

/// `B_α = A_α − ⟨H,u_α⟩·I` with `⟨H,u_α⟩ = tr(A_α)/n`.
pub fn traceless_parts(s: &ShapeOperatorSet) -> MatrixTuple {
    MatrixTuple { mats: s.ops.iter().map(traceless_project).collect() }
}

/// `‖H‖² = Σ_α (tr A_α / n)²`.
pub fn mean_curvature_sq(s: &ShapeOperatorSet) -> f64 {
    let n = s.n as f64;
    s.ops.iter().map(|a| (a.trace() / n).powi(2)).sum()
}

/// `‖b‖² = Σ_α ‖B_α‖²`.
pub fn b_norm_sq(s: &ShapeOperatorSet) -> f64 {
    traceless_parts(s).norm_sq()
}

fn pair_normalization(n: usize) -> f64 {
    2.0 / (n * (n - 1)) as f64
}

/// ρ from the Gauss equation summed over coordinate planes `eᵢ ∧ eⱼ`.
pub fn rho_direct(s: &ShapeOperatorSet) -> f64 {
    let n = s.n;
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for a in &s.ops {
                sum += a.get(i, i) * a.get(j, j) - a.get(i, j) * a.get(i, j);
            }
        }
    }
    s.ambient_c + pair_normalization(n) * sum
}

/// ρ as `c + ‖H‖² − ‖b‖²/(n(n−1))`.
pub fn rho_identity(s: &ShapeOperatorSet) -> f64 {
    let n = s.n as f64;
    s.ambient_c + mean_curvature_sq(s) - b_norm_sq(s) / (n * (n - 1.0))
}

/// Sum of squares of the normal curvature components `R⊥_{ijαβ}` over `i<j`, `α<β`,
/// where the component is `⟨[A_α,A_β]eᵢ,eⱼ⟩ + ambient(i,j,α,β)`.
pub(crate) fn normal_curvature_sum_sq(s: &ShapeOperatorSet, ambient: impl Fn(usize, usize, usize, usize) -> f64) -> Result<f64> {
    let (n, m) = (s.n, s.m());
    let mut sum = 0.0;
    for alpha in 0..m {
        for beta in (alpha + 1)..m {
            let c = commutator(&s.ops[alpha], &s.ops[beta])?;
            for i in 0..n {
                for j in (i + 1)..n {
                    // ⟨C eᵢ, eⱼ⟩ = C_{ji}
                    let r = c.get(j, i) + ambient(i, j, alpha, beta);
                    sum += r * r;
                }
            }
        }
    }
    Ok(sum)
}

/// ρ⊥ from the Ricci equation with flat normal ambient part.
pub fn rho_perp_direct(s: &ShapeOperatorSet) -> f64 {
    let sum = normal_curvature_sum_sq(s, |_, _, _, _| 0.0).expect("operators share dimension");
    pair_normalization(s.n) * sum.sqrt()
}

/// `Σ_{α,β} ‖[B_α,B_β]‖²` over all ordered pairs.
pub fn commutator_sum(mats: &[SymMatrix]) -> Result<f64> {
    let mut sum = 0.0;
    for (alpha, a) in mats.iter().enumerate() {
        for b in &mats[alpha + 1..] {
            sum += 2.0 * commutator(a, b)?.norm_sq();
        }
    }
    Ok(sum)
}

/// ρ⊥ as `sqrt(Σ_{α,β}‖[B_α,B_β]‖²) / (n(n−1))`.
pub fn rho_perp_commutator(s: &ShapeOperatorSet) -> f64 {
    let n = s.n as f64;
    let sum = commutator_sum(traceless_parts(s).mats()).expect("operators share dimension");
    sum.sqrt() / (n * (n - 1.0))
}

pub fn invariants(s: &ShapeOperatorSet) -> CurvatureInvariants {
    let rho = rho_direct(s);
    let rho_perp = rho_perp_direct(s);
    let h_sq = mean_curvature_sq(s);
    CurvatureInvariants { rho, rho_perp, h_sq, b_sq: b_norm_sq(s), slack: h_sq - rho_perp + s.ambient_c - rho }
}

/// Random shape operators (GOE entries) with a standard-Gaussian ambient curvature.
pub fn random_shape_set_with(rng: &mut impl Rng, n: usize, m: usize) -> Result<ShapeOperatorSet> {
    let ops = (0..m).map(|_| matrix::random_sym_with(rng, n)).collect();
    let c = matrix::gaussian(rng);
    ShapeOperatorSet::new(ops, c)
}

pub fn random_shape_set(n: usize, m: usize, seed: u64) -> Result<ShapeOperatorSet> {
    random_shape_set_with(&mut matrix::rng_from_seed(seed), n, m)
}
