//! Lagrangian shape-operator families with closed-form curvature, the Lagrangian
//! symmetry test and the complex-space-form curvature variants.
//!
//! For a Lagrangian `Mⁿ` the normal frame is `Je₁, …, Jeₙ`, so `m = n` and
//! `(A_{Je_α})_{ij} = ⟨h(eᵢ,eⱼ),Je_α⟩` is totally symmetric in `(α, i, j)`.
//!
//! Each family is a [`LagrangianFamily`] strategy, looked up by name in a
//! [`FamilyRegistry`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curvature::{self, commutator_sum, traceless_parts, CurvatureInvariants, ShapeOperatorSet};
use crate::error::{Error, Result};
use crate::inequalities::{self, CheckResult};
use crate::matrix::SymMatrix;
use crate::rel_diff;

/// Relative tolerance for closed form vs. matrix oracle agreement.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HUmbilicalParams {
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C3Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C4BlockParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

fn sym(n: usize, entries: &[(usize, usize, f64)]) -> SymMatrix {
    let mut upper = vec![0.0; n * n];
    for &(i, j, v) in entries {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        upper[i * n + j] = v;
    }
    SymMatrix::from_upper(n, |i, j| upper[i * n + j])
}

fn lagrangian_set(ops: Vec<SymMatrix>) -> ShapeOperatorSet {
    ShapeOperatorSet::new(ops, 0.0).expect("family generators emit consistent dimensions")
}

/// Largest violation of total symmetry of `C_{αij} = (A_α)_{ij}`.
pub fn lagrangian_asymmetry(s: &ShapeOperatorSet) -> Result<f64> {
    let n = s.n();
    if s.m() != n {
        return Err(Error::NotLagrangianFrame { n, m: s.m() });
    }
    let ops = s.ops();
    let mut dev: f64 = 0.0;
    for alpha in 0..n {
        for i in 0..n {
            for j in 0..n {
                // (A_α)_{ij} is already symmetric in (i, j); swapping α ↔ i generates S₃.
                dev = dev.max((ops[alpha].get(i, j) - ops[i].get(alpha, j)).abs());
            }
        }
    }
    Ok(dev)
}

/// `⟨h(X,Y),JZ⟩ = ⟨h(X,Z),JY⟩` within `tol` relative to the largest entry.
pub fn lagrangian_symmetry_check(s: &ShapeOperatorSet, tol: f64) -> Result<bool> {
    let scale = s.ops().iter().map(SymMatrix::max_abs).fold(1.0, f64::max);
    Ok(lagrangian_asymmetry(s)? <= tol * scale)
}

/// `A_{Je₁} = diag(λ, μ, …, μ)` and `A_{Jeⱼ} = μ(E₁ⱼ + Eⱼ₁)` for `j ≥ 2`.
pub fn h_umbilical(p: &HUmbilicalParams) -> Result<ShapeOperatorSet> {
    let n = p.n;
    if n < 2 {
        return Err(Error::InvalidDimension(format!("h-umbilical family needs n >= 2, got {n}")));
    }
    let mut ops = Vec::with_capacity(n);
    ops.push(SymMatrix::diag(&std::iter::once(p.lambda).chain(std::iter::repeat_n(p.mu, n - 1)).collect::<Vec<_>>()));
    for j in 1..n {
        ops.push(sym(n, &[(0, j, p.mu)]));
    }
    Ok(lagrangian_set(ops))
}

/// Closed forms for the H-umbilical family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HUmbilicalClosed {
    /// `Σ_{α,β}‖[B_α,B_β]‖²`
    pub lhs: f64,
    /// `(Σ_α‖B_α‖²)²`
    pub rhs: f64,
    pub quartic: f64,
}

pub fn h_umbilical_closed(p: &HUmbilicalParams) -> HUmbilicalClosed {
    let n = p.n as f64;
    let (l, m) = (p.lambda, p.mu);
    let d2 = (l - m).powi(2);
    let m2 = m * m;
    HUmbilicalClosed {
        lhs: 2.0 * (n - 1.0) * m2 * ((n - 2.0) * m2 + 2.0 * d2),
        rhs: (n - 1.0).powi(2) * (d2 / n + 2.0 * m2).powi(2),
        quartic: 2.0 * n * m2 * m2 - 4.0 / n * m2 * d2 + (n - 1.0) / (n * n) * d2 * d2,
    }
}

/// Shape operators of a minimal Lagrangian `M³ ⊂ ℂ³` in the frame where `e₁`
/// maximizes `⟨h(X,X),JX⟩`.
pub fn minimal_lagrangian_c3(p: &C3Params) -> ShapeOperatorSet {
    let C3Params { a, b, c, d } = *p;
    lagrangian_set(vec![
        SymMatrix::diag(&[a + b, -a, -b]),
        sym(3, &[(0, 1, -a), (1, 1, c), (1, 2, -d), (2, 2, -c)]),
        sym(3, &[(0, 2, -b), (1, 1, -d), (1, 2, -c), (2, 2, d)]),
    ])
}

/// `(3ρ, 9(ρ⊥)²)` for the ℂ³ family.
pub fn c3_closed(p: &C3Params) -> (f64, f64) {
    let C3Params { a, b, c, d } = *p;
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let three_rho = -2.0 * (a2 + b2 + c2 + d2) - a * b;
    let nine_rho_perp_sq = 4.0 * (a2 * a2 + b2 * b2 + c2 * c2 + d2 * d2)
        + 4.0 * a2 * a * b
        + 4.0 * a * b2 * b
        + 3.0 * a2 * b2
        + 2.0 * a2 * c2
        + 2.0 * a2 * d2
        + 2.0 * b2 * c2
        + 2.0 * b2 * d2
        + 8.0 * c2 * d2
        - 8.0 * a * b * c2
        - 8.0 * a * b * d2;
    (three_rho, nine_rho_perp_sq)
}

/// Equality configuration for minimal Lagrangian `M³ ⊂ ℂ³`.
pub fn s3_equality_form(a: f64) -> ShapeOperatorSet {
    lagrangian_set(vec![SymMatrix::diag(&[a, -a, 0.0]), sym(3, &[(0, 1, -a)]), SymMatrix::zeros(3)])
}

/// Curvature invariants in a complex space form of holomorphic sectional curvature `4c`.
///
/// ρ uses the Gauss equation with constant `c`; the Ricci components pick up
/// `c(δ_{jα}δ_{iβ} − δ_{iα}δ_{jβ})`. The slack field keeps the real-space-form meaning.
pub fn csf_invariants(s: &ShapeOperatorSet, c: f64) -> Result<CurvatureInvariants> {
    if !lagrangian_symmetry_check(s, inequalities::DEFAULT_TOL)? {
        return Err(Error::LagrangianSymmetry(lagrangian_asymmetry(s)?));
    }
    let s = s.with_ambient_c(c);
    let n = s.n();
    let rho = curvature::rho_direct(&s);
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let sum = curvature::normal_curvature_sum_sq(&s, |i, j, alpha, beta| {
        c * (delta(j, alpha) * delta(i, beta) - delta(i, alpha) * delta(j, beta))
    })?;
    let rho_perp = 2.0 / (n * (n - 1)) as f64 * sum.sqrt();
    let h_sq = curvature::mean_curvature_sq(&s);
    Ok(CurvatureInvariants { rho, rho_perp, h_sq, b_sq: curvature::b_norm_sq(&s), slack: h_sq - rho_perp + c - rho })
}

/// `(ρ⊥)² ≤ (ρ−c)² − 2c(ρ−c) + c²/3` for minimal Lagrangian `M³` in a complex space form.
pub fn csf_check(s: &ShapeOperatorSet, c: f64, tol: f64) -> Result<CheckResult> {
    let inv = csf_invariants(s, c)?;
    let x = inv.rho - c;
    Ok(CheckResult::evaluate("csf", inv.rho_perp.powi(2), x * x - 2.0 * c * x + c * c / 3.0, tol))
}

/// Ultra-minimal Lagrangian `M⁴ ⊂ ℂ⁴` with two 2×2 blocks.
///
/// The second block follows the same Lagrangian-symmetric pattern as the first:
/// `A_{Je₃} = [[c, d], [d, −c]]`, `A_{Je₄} = [[d, −c], [−c, −d]]`.
pub fn ultraminimal_c4_22(p: &C4BlockParams) -> ShapeOperatorSet {
    let C4BlockParams { a, b, c, d } = *p;
    lagrangian_set(vec![
        sym(4, &[(0, 0, a), (0, 1, b), (1, 1, -a)]),
        sym(4, &[(0, 0, b), (0, 1, -a), (1, 1, -b)]),
        sym(4, &[(2, 2, c), (2, 3, d), (3, 3, -c)]),
        sym(4, &[(2, 2, d), (2, 3, -c), (3, 3, -d)]),
    ])
}

/// `(6ρ, 36(ρ⊥)²)` for the ℂ⁴ two-block family.
pub fn c4_closed(p: &C4BlockParams) -> (f64, f64) {
    let ab = p.a * p.a + p.b * p.b;
    let cd = p.c * p.c + p.d * p.d;
    (-2.0 * (ab + cd), 4.0 * (ab * ab + cd * cd))
}

/// Equality configuration for ultra-minimal `M⁴ ⊂ ℂ⁴`.
pub fn eq_5_1_form(a: f64, b: f64) -> ShapeOperatorSet {
    ultraminimal_c4_22(&C4BlockParams { a, b, c: 0.0, d: 0.0 })
}

/// Named parameters as they arrive from the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csf_c: Option<f64>,
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::MissingParam(name))
}

impl FamilyParams {
    fn c3(&self) -> Result<C3Params> {
        Ok(C3Params { a: need(self.a, "a")?, b: need(self.b, "b")?, c: need(self.c, "c")?, d: need(self.d, "d")? })
    }

    fn c4(&self) -> Result<C4BlockParams> {
        Ok(C4BlockParams { a: need(self.a, "a")?, b: need(self.b, "b")?, c: need(self.c, "c")?, d: need(self.d, "d")? })
    }
}

/// One closed-form quantity compared with its generic matrix computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub agree: bool,
}

impl Comparison {
    pub fn new(quantity: impl Into<String>, closed_form: f64, oracle: f64) -> Self {
        let rel_err = rel_diff(closed_form, oracle);
        Self { quantity: quantity.into(), closed_form, oracle, rel_err, agree: rel_err <= ORACLE_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyEvaluation {
    pub shape: ShapeOperatorSet,
    pub comparisons: Vec<Comparison>,
    pub checks: Vec<CheckResult>,
}

impl FamilyEvaluation {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.agree) && self.checks.iter().all(|c| c.holds)
    }
}

/// A named generator of Lagrangian shape operators with its own closed-form checks.
pub trait LagrangianFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// Parameter flags this family reads.
    fn params(&self) -> &'static [&'static str];

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet>;

    /// Closed form vs. oracle comparisons and the family's theorem checks.
    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation>;
}

fn ddvv_pointwise(s: &ShapeOperatorSet, tol: f64) -> CheckResult {
    inequalities::ddvv_pointwise_check(s, tol)
}

fn with_csf(mut checks: Vec<CheckResult>, s: &ShapeOperatorSet, p: &FamilyParams, tol: f64) -> Result<Vec<CheckResult>> {
    if let Some(c) = p.csf_c {
        checks.push(csf_check(s, c, tol)?);
    }
    Ok(checks)
}

pub struct HUmbilical;

impl LagrangianFamily for HUmbilical {
    fn name(&self) -> &'static str {
        "h-umbilical"
    }

    fn params(&self) -> &'static [&'static str] {
        &["n", "lambda", "mu"]
    }

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet> {
        h_umbilical(&HUmbilicalParams { n: need(p.n, "n")?, lambda: need(p.lambda, "lambda")?, mu: need(p.mu, "mu")? })
    }

    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation> {
        let shape = self.build(p)?;
        let params = HUmbilicalParams { n: shape.n(), lambda: p.lambda.unwrap_or_default(), mu: p.mu.unwrap_or_default() };
        let closed = h_umbilical_closed(&params);
        let t = traceless_parts(&shape);
        let lhs = commutator_sum(t.mats())?;
        let rhs = t.norm_sq().powi(2);
        let comparisons = vec![
            Comparison::new("commutator_sum", closed.lhs, lhs),
            Comparison::new("norm_sq_sum_squared", closed.rhs, rhs),
            Comparison::new("(n-1)*quartic", (shape.n() - 1) as f64 * closed.quartic, rhs - lhs),
        ];
        let checks = vec![
            ddvv_pointwise(&shape, tol),
            CheckResult::evaluate("h-umbilical-quartic", 0.0, closed.quartic, tol),
        ];
        Ok(FamilyEvaluation { shape, comparisons, checks })
    }
}

fn c3_comparisons(shape: &ShapeOperatorSet, p: &C3Params) -> Vec<Comparison> {
    let (three_rho, nine_rho_perp_sq) = c3_closed(p);
    let inv = curvature::invariants(shape);
    vec![
        Comparison::new("3*rho", three_rho, 3.0 * inv.rho),
        Comparison::new("9*rho_perp^2", nine_rho_perp_sq, 9.0 * inv.rho_perp.powi(2)),
    ]
}

fn c3_checks(shape: &ShapeOperatorSet, tol: f64) -> Vec<CheckResult> {
    let inv = curvature::invariants(&shape.normalized());
    vec![
        ddvv_pointwise(shape, tol),
        CheckResult::evaluate("c3-rho-perp-sq", inv.rho_perp.powi(2), inv.rho.powi(2), tol),
        CheckResult::evaluate("c3-rho-nonpositive", inv.rho, 0.0, tol),
    ]
}

pub struct MinimalC3;

impl LagrangianFamily for MinimalC3 {
    fn name(&self) -> &'static str {
        "minimal-c3"
    }

    fn params(&self) -> &'static [&'static str] {
        &["a", "b", "c", "d", "csf-c"]
    }

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet> {
        Ok(minimal_lagrangian_c3(&p.c3()?))
    }

    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation> {
        let params = p.c3()?;
        let shape = minimal_lagrangian_c3(&params);
        let comparisons = c3_comparisons(&shape, &params);
        let checks = with_csf(c3_checks(&shape, tol), &shape, p, tol)?;
        Ok(FamilyEvaluation { shape, comparisons, checks })
    }
}

pub struct S3Equality;

impl LagrangianFamily for S3Equality {
    fn name(&self) -> &'static str {
        "s3-equality"
    }

    fn params(&self) -> &'static [&'static str] {
        &["a", "csf-c"]
    }

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet> {
        Ok(s3_equality_form(need(p.a, "a")?))
    }

    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation> {
        let a = need(p.a, "a")?;
        let shape = s3_equality_form(a);
        let comparisons = c3_comparisons(&shape, &C3Params { a, b: 0.0, c: 0.0, d: 0.0 });
        let mut equality = ddvv_pointwise(&shape, tol);
        equality.label = "s3-equality".into();
        equality.holds = equality.equality;
        let mut checks = c3_checks(&shape, tol);
        checks.push(equality);
        Ok(FamilyEvaluation { shape: shape.clone(), comparisons, checks: with_csf(checks, &shape, p, tol)? })
    }
}

fn c4_evaluate(shape: ShapeOperatorSet, params: &C4BlockParams, tol: f64) -> FamilyEvaluation {
    let (six_rho, thirtysix_rho_perp_sq) = c4_closed(params);
    let inv = curvature::invariants(&shape);
    let comparisons = vec![
        Comparison::new("6*rho", six_rho, 6.0 * inv.rho),
        Comparison::new("36*rho_perp^2", thirtysix_rho_perp_sq, 36.0 * inv.rho_perp.powi(2)),
    ];
    let checks = vec![ddvv_pointwise(&shape, tol)];
    FamilyEvaluation { shape, comparisons, checks }
}

pub struct UltraminimalC4;

impl LagrangianFamily for UltraminimalC4 {
    fn name(&self) -> &'static str {
        "ultraminimal-c4"
    }

    fn params(&self) -> &'static [&'static str] {
        &["a", "b", "c", "d"]
    }

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet> {
        Ok(ultraminimal_c4_22(&p.c4()?))
    }

    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation> {
        let params = p.c4()?;
        Ok(c4_evaluate(ultraminimal_c4_22(&params), &params, tol))
    }
}

pub struct Eq51;

impl LagrangianFamily for Eq51 {
    fn name(&self) -> &'static str {
        "eq51"
    }

    fn params(&self) -> &'static [&'static str] {
        &["a", "b"]
    }

    fn build(&self, p: &FamilyParams) -> Result<ShapeOperatorSet> {
        Ok(eq_5_1_form(need(p.a, "a")?, need(p.b, "b")?))
    }

    fn evaluate(&self, p: &FamilyParams, tol: f64) -> Result<FamilyEvaluation> {
        let params = C4BlockParams { a: need(p.a, "a")?, b: need(p.b, "b")?, c: 0.0, d: 0.0 };
        let mut eval = c4_evaluate(eq_5_1_form(params.a, params.b), &params, tol);
        let mut equality = eval.checks[0].clone();
        equality.label = "eq51-equality".into();
        equality.holds = equality.equality;
        eval.checks.push(equality);
        Ok(eval)
    }
}

/// Families by name.
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn LagrangianFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self { families: BTreeMap::new() }
    }

    pub fn register(&mut self, family: Box<dyn LagrangianFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn LagrangianFamily> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::Unknown { kind: "family", name: name.to_string() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(HUmbilical));
        reg.register(Box::new(MinimalC3));
        reg.register(Box::new(S3Equality));
        reg.register(Box::new(UltraminimalC4));
        reg.register(Box::new(Eq51));
        reg
    }
}
