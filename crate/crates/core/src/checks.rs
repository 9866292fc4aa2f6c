//! Pointwise checks on a [`ShapeOperatorSet`], each a [`PointCheck`] strategy
//! registered by name in a [`CheckRegistry`].

use serde::{Deserialize, Serialize};

use crate::curvature::{traceless_parts, ShapeOperatorSet};
use crate::error::{Error, Result};
use crate::families::lagrangian_asymmetry;
use crate::inequalities::{self, ddvv_proved, CheckResult};
use crate::matrix::SymMatrix;

/// What a failed check means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// A proved inequality; a failure is a bug or bad data.
    Theorem,
    /// Expected to hold but not proved for these sizes; failures are reported only.
    Conjecture,
    /// A structural property of the input, not an inequality.
    Structural,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    #[serde(flatten)]
    pub result: CheckResult,
    pub status: CheckStatus,
}

impl CheckEntry {
    pub fn is_theorem_failure(&self) -> bool {
        self.status == CheckStatus::Theorem && !self.result.holds
    }
}

pub trait PointCheck: Send + Sync {
    fn name(&self) -> &'static str;

    fn applies(&self, _s: &ShapeOperatorSet) -> bool {
        true
    }

    fn status(&self, _s: &ShapeOperatorSet) -> CheckStatus {
        CheckStatus::Theorem
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>>;
}

/// DDVV on the traceless parts.
pub struct Ddvv;

impl PointCheck for Ddvv {
    fn name(&self) -> &'static str {
        "ddvv"
    }

    fn status(&self, s: &ShapeOperatorSet) -> CheckStatus {
        if ddvv_proved(s.n(), s.m()) {
            CheckStatus::Theorem
        } else {
            CheckStatus::Conjecture
        }
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        Ok(vec![inequalities::ddvv_check(&traceless_parts(s), tol)])
    }
}

pub struct Chen;

impl PointCheck for Chen {
    fn name(&self) -> &'static str {
        "chen"
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        Ok(vec![inequalities::chen_check(s, tol)])
    }
}

pub struct WeakM;

impl PointCheck for WeakM {
    fn name(&self) -> &'static str {
        "weak-m"
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        Ok(vec![inequalities::weak_checks(s, tol).0])
    }
}

pub struct WeakN;

impl PointCheck for WeakN {
    fn name(&self) -> &'static str {
        "weak-n"
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        Ok(vec![inequalities::weak_checks(s, tol).1])
    }
}

/// Li–Li on the traceless parts.
pub struct LiLi;

impl PointCheck for LiLi {
    fn name(&self) -> &'static str {
        "li-li"
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        Ok(vec![inequalities::lili_check(traceless_parts(s).mats(), tol)?])
    }
}

/// CDK on every pair of traceless parts.
pub struct Cdk;

impl PointCheck for Cdk {
    fn name(&self) -> &'static str {
        "cdk"
    }

    fn applies(&self, s: &ShapeOperatorSet) -> bool {
        s.m() >= 2
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        let t = traceless_parts(s);
        let mats = t.mats();
        let mut out = Vec::new();
        for a in 0..mats.len() {
            for b in (a + 1)..mats.len() {
                let mut r = inequalities::cdk_check(&mats[a], &mats[b], tol)?;
                r.label = format!("cdk[{},{}]", a + 1, b + 1);
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// Total symmetry of `⟨h(X,Y),JZ⟩`; meaningful only for `m = n`.
pub struct LagrangianSymmetry;

impl PointCheck for LagrangianSymmetry {
    fn name(&self) -> &'static str {
        "lagrangian-symmetry"
    }

    fn applies(&self, s: &ShapeOperatorSet) -> bool {
        s.m() == s.n()
    }

    fn status(&self, _s: &ShapeOperatorSet) -> CheckStatus {
        CheckStatus::Structural
    }

    fn run(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckResult>> {
        let scale = s.ops().iter().map(SymMatrix::max_abs).fold(1.0, f64::max);
        let dev = lagrangian_asymmetry(s)? / scale;
        Ok(vec![CheckResult::evaluate("lagrangian-symmetry", dev, 0.0, tol)])
    }
}

/// Ordered collection of checks, selectable by name.
pub struct CheckRegistry {
    checks: Vec<Box<dyn PointCheck>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        Self { checks: Vec::new() }
    }

    /// Adds a check; a check with the same name is replaced in place.
    pub fn register(&mut self, check: Box<dyn PointCheck>) {
        match self.checks.iter().position(|c| c.name() == check.name()) {
            Some(i) => self.checks[i] = check,
            None => self.checks.push(check),
        }
    }

    pub fn get(&self, name: &str) -> Result<&dyn PointCheck> {
        self.checks
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::Unknown { kind: "check", name: name.to_string() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    /// Sub-registry with only the named checks, in the given order.
    pub fn select(self, names: &[String]) -> Result<Self> {
        let mut pool = self.checks;
        let mut checks = Vec::with_capacity(names.len());
        for name in names {
            let i = pool
                .iter()
                .position(|c| c.name() == name)
                .ok_or_else(|| Error::Unknown { kind: "check", name: name.clone() })?;
            checks.push(pool.remove(i));
        }
        Ok(Self { checks })
    }

    pub fn run_all(&self, s: &ShapeOperatorSet, tol: f64) -> Result<Vec<CheckEntry>> {
        let mut out = Vec::new();
        for check in self.checks.iter().filter(|c| c.applies(s)) {
            let status = check.status(s);
            out.extend(check.run(s, tol)?.into_iter().map(|result| CheckEntry { result, status }));
        }
        Ok(out)
    }
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Ddvv));
        reg.register(Box::new(Chen));
        reg.register(Box::new(WeakM));
        reg.register(Box::new(WeakN));
        reg.register(Box::new(LiLi));
        reg.register(Box::new(Cdk));
        reg.register(Box::new(LagrangianSymmetry));
        reg
    }
}
