//! Multistart projected gradient ascent of `F(B) = Σ_{α,β}‖[B_α,B_β]‖²` over traceless
//! symmetric tuples on the unit sphere `Σ_α‖B_α‖² = 1`.
//!
//! Since both sides of the DDVV inequality are homogeneous of degree four, the
//! conjecture for given `(n, m)` is equivalent to `max F ≤ 1` on this sphere.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{commutator_sum, MatrixTuple};
use crate::error::{Error, Result};
use crate::inequalities::ddvv_proved;
use crate::matrix::{commutator, derive_seed, random_traceless_sym_with, rng_from_seed, traceless_project, Frobenius, SymMatrix};

/// Values above `1 + VIOLATION_MARGIN` are reported as counterexample candidates.
pub const VIOLATION_MARGIN: f64 = 1e-6;
/// Restarts whose values differ by less than this are tied.
pub const TIE_TOL: f64 = 1e-12;
const MIN_STEP: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub m: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub step_shrink: f64,
    pub grad_tol: f64,
    pub seed: u64,
}

impl SearchConfig {
    /// Defaults: 64 restarts, 5000 iterations, step 0.1 halved on failure, gradient tolerance 1e−10.
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self { n, m, restarts: 64, max_iters: 5000, step_init: 0.1, step_shrink: 0.5, grad_tol: 1e-10, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 1 {
            return Err(Error::InvalidDimension(format!("search needs n >= 2 and m >= 1, got n = {}, m = {}", self.n, self.m)));
        }
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.restarts < 1 {
            return bad("restarts must be at least 1");
        }
        if self.max_iters < 1 {
            return bad("max_iters must be at least 1");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("step_shrink must lie in (0, 1)");
        }
        if self.grad_tol.is_nan() || self.grad_tol < 0.0 {
            return bad("grad_tol must be nonnegative");
        }
        Ok(())
    }
}

fn inner(a: &[SymMatrix], b: &[SymMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.frobenius_inner(y).expect("equal dimensions")).sum()
}

fn axpy(x: &[SymMatrix], t: f64, d: &[SymMatrix]) -> Vec<SymMatrix> {
    x.iter().zip(d).map(|(a, b)| a.add_scaled(t, b).expect("equal dimensions")).collect()
}

/// `Σ_{α,β}‖[B_α,B_β]‖²` over ordered pairs.
pub fn objective(t: &MatrixTuple) -> f64 {
    commutator_sum(t.mats()).expect("tuple members share dimension")
}

/// Traceless projection followed by scaling to `Σ‖B_α‖² = 1`.
pub fn normalize(t: &MatrixTuple) -> Result<MatrixTuple> {
    normalize_mats(t.mats())
}

fn normalize_mats(mats: &[SymMatrix]) -> Result<MatrixTuple> {
    let projected: Vec<SymMatrix> = mats.iter().map(traceless_project).collect();
    let s: f64 = projected.iter().map(SymMatrix::norm_sq).sum();
    if s == 0.0 || !s.is_finite() {
        return Err(Error::ZeroTuple);
    }
    let inv = 1.0 / s.sqrt();
    MatrixTuple::new(projected.iter().map(|b| b.scale(inv)).collect())
}

/// Euclidean gradient `∂F/∂B_α = 4 Σ_β [[B_α,B_β],B_β]`, a traceless symmetric tuple.
pub fn gradient(t: &MatrixTuple) -> Vec<SymMatrix> {
    let mats = t.mats();
    let n = t.n();
    mats.iter()
        .map(|a| {
            let mut g = SymMatrix::zeros(n);
            for b in mats {
                let c = commutator(a, b).expect("equal dimensions");
                g = g.add_scaled(4.0, &c.bracket_sym(b).expect("equal dimensions")).expect("equal dimensions");
            }
            traceless_project(&g)
        })
        .collect()
}

/// Tangential part of the gradient at a point of the sphere through `t`.
pub fn riemannian_gradient(t: &MatrixTuple) -> Vec<SymMatrix> {
    let g = gradient(t);
    let x = t.mats();
    let xx = inner(x, x);
    if xx == 0.0 {
        return g;
    }
    axpy(&g, -inner(&g, x) / xx, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Riemannian gradient norm fell below `grad_tol`.
    GradTol,
    /// No step down to the minimum length increased the objective.
    Stalled,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct AscentOutcome {
    pub value: f64,
    pub tuple: MatrixTuple,
    pub iterations: usize,
    pub grad_norm: f64,
    pub stop: StopReason,
    /// Initial objective followed by the running total of accepted increments.
    pub trace: Vec<f64>,
}

/// `F(x + s)/‖x + s‖⁴ − F(x)/‖x‖⁴`, expanded so that the result keeps its relative
/// accuracy when the two values agree to machine precision.
fn sphere_increment(x: &[SymMatrix], s: &[SymMatrix]) -> f64 {
    let n = x[0].dim();
    let m = x.len();
    let mut f = 0.0;
    let mut df = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            let c = commutator(&x[a], &x[b]).expect("equal dimensions");
            let parts = [
                commutator(&x[a], &s[b]).expect("equal dimensions"),
                commutator(&s[a], &x[b]).expect("equal dimensions"),
                commutator(&s[a], &s[b]).expect("equal dimensions"),
            ];
            for k in 0..n * n {
                let d: f64 = parts.iter().map(|p| p.as_slice()[k]).sum();
                let ck = c.as_slice()[k];
                f += 2.0 * ck * ck;
                df += 2.0 * (2.0 * ck * d + d * d);
            }
        }
    }
    let nx = inner(x, x);
    let dn = 2.0 * inner(x, s) + inner(s, s);
    let nc = nx + dn;
    (df * nx * nx - f * dn * (nc + nx)) / (nc * nc * nx * nx)
}

/// Projected gradient ascent with backtracking; each iterate is renormalized onto the sphere.
///
/// Steps are accepted on a strictly positive increment computed by `sphere_increment`
/// rather than by comparing two rounded objective values, which would stall once the
/// gradient drops to about the square root of machine precision.
pub fn ascend(config: &SearchConfig, start: &MatrixTuple) -> Result<AscentOutcome> {
    config.validate()?;
    let mut x = normalize(start)?;
    let mut total = objective(&x);
    let mut trace = vec![total];
    let mut grad_norm = f64::INFINITY;
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    while iterations < config.max_iters {
        let g = riemannian_gradient(&x);
        grad_norm = inner(&g, &g).sqrt();
        if grad_norm <= config.grad_tol {
            stop = StopReason::GradTol;
            break;
        }
        let mut step = config.step_init;
        let mut accepted = None;
        while step >= MIN_STEP {
            let s: Vec<SymMatrix> = g.iter().map(|d| d.scale(step)).collect();
            let gain = sphere_increment(x.mats(), &s);
            if gain > 0.0 {
                if let Ok(cand) = normalize_mats(&axpy(x.mats(), 1.0, &s)) {
                    accepted = Some((cand, gain));
                    break;
                }
            }
            step *= config.step_shrink;
        }
        let Some((cand, gain)) = accepted else {
            stop = StopReason::Stalled;
            break;
        };
        debug_assert!(gain > 0.0, "ascent must be monotone");
        x = cand;
        total += gain;
        trace.push(total);
        iterations += 1;
    }
    if stop == StopReason::MaxIters {
        let g = riemannian_gradient(&x);
        grad_norm = inner(&g, &g).sqrt();
    }
    Ok(AscentOutcome { value: objective(&x), tuple: x, iterations, grad_norm, stop, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub seed: u64,
    pub final_value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
    pub stop: StopReason,
}

/// A restart that ended above `1 + VIOLATION_MARGIN`, kept with its full tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationCandidate {
    pub restart: usize,
    pub value: f64,
    pub proved_regime: bool,
    pub tuple: MatrixTuple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub best_value: f64,
    pub best_restart: usize,
    pub best_tuple: MatrixTuple,
    pub per_restart: Vec<RestartSummary>,
    pub violation_candidates: Vec<ViolationCandidate>,
    pub config: SearchConfig,
    pub wall_time: f64,
}

/// Seeded Gaussian start for restart `index`.
pub fn start_point(config: &SearchConfig, index: usize) -> (u64, MatrixTuple) {
    let seed = derive_seed(config.seed, index as u64);
    let mut rng = rng_from_seed(seed);
    let mats: Vec<SymMatrix> = (0..config.m).map(|_| random_traceless_sym_with(&mut rng, config.n)).collect();
    (seed, normalize_mats(&mats).expect("gaussian tuple is nonzero"))
}

/// Runs `config.restarts` independent ascents in parallel. Output depends only on `config`.
pub fn multistart(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let started = Instant::now();
    let outcomes: Vec<(u64, AscentOutcome)> = (0..config.restarts)
        .into_par_iter()
        .map(|i| {
            let (seed, start) = start_point(config, i);
            ascend(config, &start).map(|o| (seed, o))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (_, o)) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].1.value + TIE_TOL {
            best = i;
        }
    }
    let proved = ddvv_proved(config.n, config.m);
    let per_restart = outcomes
        .iter()
        .enumerate()
        .map(|(restart, (seed, o))| RestartSummary {
            restart,
            seed: *seed,
            final_value: o.value,
            iterations: o.iterations,
            grad_norm: o.grad_norm,
            converged: o.stop == StopReason::GradTol,
            stop: o.stop,
        })
        .collect();
    let violation_candidates = outcomes
        .iter()
        .enumerate()
        .filter(|(_, (_, o))| o.value > 1.0 + VIOLATION_MARGIN)
        .map(|(restart, (_, o))| ViolationCandidate { restart, value: o.value, proved_regime: proved, tuple: o.tuple.clone() })
        .collect();
    let (_, winner) = &outcomes[best];
    Ok(SearchReport {
        best_value: winner.value,
        best_restart: best,
        best_tuple: winner.tuple.clone(),
        per_restart,
        violation_candidates,
        config: config.clone(),
        wall_time: started.elapsed().as_secs_f64(),
    })
}
