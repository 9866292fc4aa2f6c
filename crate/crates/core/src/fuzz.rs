//! Randomized property suite over seeded shape-operator sets.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{self, random_shape_set_with, traceless_parts, ShapeOperatorSet};
use crate::error::{Error, Result};
use crate::inequalities::{self, ddvv_proved};
use crate::matrix::{derive_seed, random_orthogonal_with, rng_from_seed};
use crate::rel_diff;

/// Relative tolerance for dual-route and invariance properties.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest sizes drawn when `n` or `m` is left open.
pub const MAX_RANDOM_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    /// Fixed tangent dimension, or random in `2..=6` per sample.
    pub n: Option<usize>,
    /// Fixed codimension, or random in `1..=6` per sample.
    pub m: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub name: String,
    /// Failures of a hard property are errors; soft ones are only counted.
    pub hard: bool,
    pub passed: u64,
    pub failed: u64,
    /// Smallest slack for inequalities, largest relative error for identities.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub properties: Vec<PropertyTally>,
    pub hard_failures: u64,
    pub soft_failures: u64,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Identity,
    Inequality,
}

const PROPERTIES: &[(&str, Kind)] = &[
    ("rho-dual-route", Kind::Identity),
    ("rho-perp-dual-route", Kind::Identity),
    ("tangent-invariance", Kind::Identity),
    ("normal-invariance", Kind::Identity),
    ("chen", Kind::Inequality),
    ("li-li", Kind::Inequality),
    ("weak-m", Kind::Inequality),
    ("weak-n", Kind::Inequality),
    ("cdk", Kind::Inequality),
    ("weak-chain", Kind::Inequality),
    ("ddvv", Kind::Inequality),
];

struct Outcome {
    /// Identity: relative error. Inequality: slack.
    metric: f64,
    hard: bool,
}

fn invariance_error(a: &ShapeOperatorSet, b: &ShapeOperatorSet) -> f64 {
    let (x, y) = (curvature::invariants(a), curvature::invariants(b));
    rel_diff(x.rho, y.rho).max(rel_diff(x.rho_perp, y.rho_perp)).max(rel_diff(x.h_sq, y.h_sq))
}

fn sample(config: &FuzzConfig, index: usize) -> Result<Vec<Option<Outcome>>> {
    let mut rng = rng_from_seed(derive_seed(config.seed, index as u64));
    let n = config.n.unwrap_or_else(|| rng.random_range(2..=MAX_RANDOM_DIM));
    let m = config.m.unwrap_or_else(|| rng.random_range(1..=MAX_RANDOM_DIM));
    let s = random_shape_set_with(&mut rng, n, m)?;
    let tangent = random_orthogonal_with(&mut rng, n);
    let normal = random_orthogonal_with(&mut rng, m);
    let tol = config.tol;

    let hard = |metric: f64| Some(Outcome { metric, hard: true });
    let raw = s.normalized();
    let mut cdk_slack = f64::INFINITY;
    for a in 0..m {
        for b in (a + 1)..m {
            cdk_slack = cdk_slack.min(inequalities::cdk_check(&raw.ops()[a], &raw.ops()[b], tol)?.slack());
        }
    }
    let t = traceless_parts(&s);
    let nonzero = t.norm_sq() > 0.0;
    let (weak_m, weak_n) = inequalities::weak_checks(&s, tol);

    Ok(vec![
        hard(rel_diff(curvature::rho_direct(&s), curvature::rho_identity(&s))),
        hard(rel_diff(curvature::rho_perp_direct(&s), curvature::rho_perp_commutator(&s))),
        hard(invariance_error(&s, &s.conjugate_all(&tangent)?)),
        hard(invariance_error(&s, &s.mix_normal(&normal)?)),
        hard(inequalities::chen_check(&s, tol).slack()),
        hard(inequalities::lili_check(raw.ops(), tol)?.slack()),
        hard(weak_m.slack()),
        hard(weak_n.slack()),
        (m >= 2).then_some(Outcome { metric: cdk_slack, hard: true }),
        if m >= 2 && nonzero { hard(inequalities::weak_chain_check(&t, tol)?.slack()) } else { None },
        Some(Outcome { metric: inequalities::ddvv_check(&t, tol).slack(), hard: ddvv_proved(n, m) }),
    ])
}

/// Runs every property on `config.samples` seeded configurations.
///
/// Sample `i` is drawn from `derive_seed(config.seed, i)`, so results do not depend
/// on how samples are scheduled across threads.
pub fn run_fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    if config.n.is_some_and(|n| n < 2) || config.m.is_some_and(|m| m < 1) {
        return Err(Error::InvalidDimension("fuzzing needs n >= 2 and m >= 1".into()));
    }
    let outcomes: Vec<Vec<Option<Outcome>>> =
        (0..config.samples).into_par_iter().map(|i| sample(config, i)).collect::<Result<_>>()?;

    let mut properties: Vec<PropertyTally> = PROPERTIES
        .iter()
        .map(|(name, kind)| PropertyTally {
            name: name.to_string(),
            hard: true,
            passed: 0,
            failed: 0,
            worst: if *kind == Kind::Identity { 0.0 } else { f64::INFINITY },
        })
        .collect();
    let (mut hard_failures, mut soft_failures) = (0, 0);
    for row in &outcomes {
        for ((tally, (_, kind)), outcome) in properties.iter_mut().zip(PROPERTIES).zip(row) {
            let Some(o) = outcome else { continue };
            let ok = match kind {
                Kind::Identity => {
                    tally.worst = tally.worst.max(o.metric);
                    o.metric <= IDENTITY_TOL
                }
                Kind::Inequality => {
                    tally.worst = tally.worst.min(o.metric);
                    o.metric >= -config.tol
                }
            };
            if ok {
                tally.passed += 1;
            } else {
                tally.failed += 1;
                if o.hard {
                    hard_failures += 1;
                } else {
                    soft_failures += 1;
                }
            }
            if !o.hard {
                tally.hard = false;
            }
        }
    }
    Ok(FuzzSummary { config: config.clone(), properties, hard_failures, soft_failures })
}
