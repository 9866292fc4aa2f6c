//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ddvv::cli::{cmd_search, SearchArgs};
use ddvv::curvature::{self, random_shape_set_with};
use ddvv::extremizer::{gradient, multistart, riemannian_gradient, SearchConfig};
use ddvv::families::*;
use ddvv::fuzz::{run_fuzz, FuzzConfig};
use ddvv::inequalities::{cdk_equality_detect, ddvv_check, dominant_pair, weak_constant_m, weak_constant_n, DEFAULT_TOL};
use ddvv::matrix::{random_orthogonal_with, random_traceless_sym_with, rng_from_seed, Frobenius};
use ddvv::{MatrixTuple, ShapeOperatorSet, SymMatrix};
use rand::Rng;
use serde_json::Value;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn cdk_pair(n: usize) -> MatrixTuple {
    MatrixTuple::new(vec![
        SymMatrix::from_upper(n, |i, j| if (i, j) == (0, 1) { 0.5 } else { 0.0 }),
        SymMatrix::from_upper(n, |i, j| match (i, j) {
            (0, 0) => 0.5,
            (1, 1) => -0.5,
            _ => 0.0,
        }),
    ])
    .unwrap()
}

fn criterion_1() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        let r = ddvv_check(&cdk_pair(n), DEFAULT_TOL);
        worst = worst.max((r.lhs - 1.0).abs()).max((r.rhs - 1.0).abs());
        if !r.equality {
            return verdict(false, format!("n = {n}: equality flag not set"));
        }
    }
    verdict(worst <= 1e-12, format!("n = 2..10, max |side − 1| = {worst:.1e}"))
}

fn criterion_2() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, m) in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 3)] {
        let started = Instant::now();
        let r = multistart(&SearchConfig::new(n, m, 0)).unwrap();
        let secs = started.elapsed().as_secs_f64();
        let in_window = (1.0 - 1e-6..=1.0 + 1e-9).contains(&r.best_value);
        let cdk = match dominant_pair(r.best_tuple.mats()).unwrap() {
            Some((a, b)) => cdk_equality_detect(&a, &b, DEFAULT_TOL).unwrap(),
            None => false,
        };
        ok &= in_window && cdk && secs < 60.0;
        lines.push(format!("({n},{m}) best = {:.17} cdk = {cdk} {secs:.2}s", r.best_value));
    }
    verdict(ok, lines.join("; "))
}

fn criterion_3() -> Verdict {
    let s = run_fuzz(&FuzzConfig { n: None, m: None, samples: 10_000, seed: 0, tol: 1e-9 }).unwrap();
    let mut ok = s.hard_failures == 0;
    let mut parts = Vec::new();
    for name in ["chen", "li-li", "weak-m", "weak-n", "cdk"] {
        let p = s.properties.iter().find(|p| p.name == name).unwrap();
        ok &= p.failed == 0 && p.worst >= -1e-9 && p.passed > 0;
        parts.push(format!("{name} {}/{} min slack {:.2e}", p.passed, p.passed + p.failed, p.worst));
    }
    verdict(ok, parts.join(", "))
}

fn criterion_4() -> Verdict {
    let m2 = weak_constant_m(2).unwrap() == 1.0;
    let m3 = (weak_constant_m(3).unwrap() - (5.0f64 / 6.0).sqrt()).abs() <= 1e-15;
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        worst = worst.max((weak_constant_n(n).unwrap() - weak_constant_m(n * (n + 1) / 2 - 1).unwrap()).abs());
    }
    verdict(m2 && m3 && worst <= 1e-15, format!("C(2) = 1: {m2}, C(3) = √(5/6): {m3}, max |C_n − C_m| = {worst:.1e}"))
}

fn criterion_5() -> Verdict {
    let mut rng = rng_from_seed(5);
    let (mut route, mut inv, mut reference): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=6);
        let s = random_shape_set_with(&mut rng, n, m).unwrap();
        route = route
            .max(common::rel(curvature::rho_direct(&s), curvature::rho_identity(&s)))
            .max(common::rel(curvature::rho_perp_direct(&s), curvature::rho_perp_commutator(&s)));
        let base = curvature::invariants(&s);
        reference = reference.max(common::rel(base.rho, common::rho(&s))).max(common::rel(base.rho_perp, common::rho_perp(&s)));
        let tangent = s.conjugate_all(&random_orthogonal_with(&mut rng, n)).unwrap();
        let normal = s.mix_normal(&random_orthogonal_with(&mut rng, m)).unwrap();
        for t in [tangent, normal] {
            let x = curvature::invariants(&t);
            inv = inv.max(common::rel(x.rho, base.rho)).max(common::rel(x.rho_perp, base.rho_perp)).max(common::rel(x.h_sq, base.h_sq));
        }
    }
    verdict(
        route <= 1e-10 && inv <= 1e-10 && reference <= 1e-10,
        format!("1000 sets: dual route {route:.1e}, invariance {inv:.1e}, reference {reference:.1e}"),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = rng_from_seed(6);
    let (mut worst, mut min_quartic): (f64, f64) = (0.0, f64::INFINITY);
    for _ in 0..1000 {
        let p = HUmbilicalParams { n: rng.random_range(2..=8), lambda: rng.random_range(-5.0..5.0), mu: rng.random_range(-5.0..5.0) };
        let b: Vec<_> = common::ops(&h_umbilical(&p).unwrap()).iter().map(common::traceless).collect();
        let closed = h_umbilical_closed(&p);
        let lhs = common::commutator_sum(&b);
        let rhs = b.iter().map(common::fro_sq).sum::<f64>().powi(2);
        worst = worst.max(common::rel(closed.lhs, lhs)).max(common::rel(closed.rhs, rhs));
        min_quartic = min_quartic.min(closed.quartic);
    }
    let spot = h_umbilical_closed(&HUmbilicalParams { n: 3, lambda: 3.0, mu: 1.0 });
    let spot_ok = (spot.lhs - 36.0).abs() <= 1e-12 && (spot.rhs - 400.0 / 9.0).abs() <= 1e-12 && (spot.quartic - 38.0 / 9.0).abs() <= 1e-12;
    verdict(
        worst <= 1e-10 && spot_ok && min_quartic >= 0.0,
        format!("oracle {worst:.1e}, spot ({}, {}, {}), min quartic {min_quartic:.2e}", spot.lhs, spot.rhs, spot.quartic),
    )
}

fn c3_equality_flag(p: &C3Params) -> bool {
    let params = FamilyParams { a: Some(p.a), b: Some(p.b), c: Some(p.c), d: Some(p.d), ..Default::default() };
    let eval = MinimalC3.evaluate(&params, DEFAULT_TOL).unwrap();
    eval.checks.iter().find(|c| c.label == "c3-rho-perp-sq").unwrap().equality
}

fn unit(v: [f64; 4]) -> [f64; 4] {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / r)
}

fn criterion_7() -> Verdict {
    let mut rng = rng_from_seed(7);
    let (mut worst, mut ineq_ok, mut iff_ok): (f64, bool, bool) = (0.0, true, true);
    for k in 0..1000 {
        let mut v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        // Every fourth draw is pushed onto the equality set c = d = 0, ab = 0.
        if k % 4 == 0 {
            v[2] = 0.0;
            v[3] = 0.0;
            v[k % 8 / 4] = 0.0;
        }
        let p = C3Params { a: v[0], b: v[1], c: v[2], d: v[3] };
        let s = minimal_lagrangian_c3(&p);
        let (three_rho, nine_rho_perp_sq) = c3_closed(&p);
        worst = worst.max(common::rel(three_rho, 3.0 * common::rho(&s))).max(common::rel(nine_rho_perp_sq, 9.0 * common::rho_perp(&s).powi(2)));
        ineq_ok &= nine_rho_perp_sq <= three_rho * three_rho * (1.0 + 1e-12) && three_rho <= 0.0;
        let u = unit(v);
        let structural = u[2].abs() <= 1e-9 && u[3].abs() <= 1e-9 && (u[0] * u[1]).abs() <= 1e-9;
        iff_ok &= c3_equality_flag(&p) == structural;
    }
    let mut s3_worst: f64 = 0.0;
    for a in [-3.0, -1.0, 0.2, 1.0, 2.5] {
        s3_worst = s3_worst.max(curvature::invariants(&s3_equality_form(a)).slack.abs());
    }
    verdict(
        worst <= 1e-10 && ineq_ok && iff_ok && s3_worst <= 1e-12,
        format!("oracle {worst:.1e}, inequality {ineq_ok}, equality iff {iff_ok}, S3 slack {s3_worst:.1e}"),
    )
}

fn criterion_8() -> Verdict {
    let mut rng = rng_from_seed(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = C4BlockParams { a: rng.random_range(-3.0..3.0), b: rng.random_range(-3.0..3.0), c: rng.random_range(-3.0..3.0), d: rng.random_range(-3.0..3.0) };
        let s = ultraminimal_c4_22(&p);
        let (six_rho, thirtysix_rho_perp_sq) = c4_closed(&p);
        worst = worst.max(common::rel(six_rho, 6.0 * common::rho(&s))).max(common::rel(thirtysix_rho_perp_sq, 36.0 * common::rho_perp(&s).powi(2)));
    }
    let spot = |a, b, c, d| {
        let p = C4BlockParams { a, b, c, d };
        let s = ultraminimal_c4_22(&p);
        let eq = ddvv::inequalities::ddvv_pointwise_check(&s, DEFAULT_TOL).equality;
        (c4_closed(&p), 6.0 * common::rho(&s), 36.0 * common::rho_perp(&s).powi(2), eq)
    };
    let (c1, r1, q1, eq1) = spot(1.0, 1.0, 0.0, 0.0);
    let (c2, r2, q2, eq2) = spot(1.0, 0.0, 1.0, 0.0);
    let spots_ok = c1 == (-4.0, 16.0)
        && (r1 + 4.0).abs() < 1e-12
        && (q1 - 16.0).abs() < 1e-12
        && eq1
        && c2 == (-4.0, 8.0)
        && (r2 + 4.0).abs() < 1e-12
        && (q2 - 8.0).abs() < 1e-12
        && !eq2;
    let mut eq51_worst: f64 = 0.0;
    for (a, b) in [(1.0, 1.0), (0.3, -2.0), (-1.5, 0.0), (0.0, 0.7)] {
        eq51_worst = eq51_worst.max(curvature::invariants(&eq_5_1_form(a, b)).slack.abs());
    }
    verdict(
        worst <= 1e-10 && spots_ok && eq51_worst <= 1e-12,
        format!("oracle {worst:.1e}, (1,1,0,0) -> ({r1}, {q1:.12}) eq {eq1}, (1,0,1,0) -> ({r2}, {q2:.12}) eq {eq2}, eq51 slack {eq51_worst:.1e}"),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = rng_from_seed(9);
    let mut flat_diff: f64 = 0.0;
    for _ in 0..100 {
        let p = C3Params { a: rng.random_range(-2.0..2.0), b: rng.random_range(-2.0..2.0), c: rng.random_range(-2.0..2.0), d: rng.random_range(-2.0..2.0) };
        let s = minimal_lagrangian_c3(&p);
        let (flat, csf) = (curvature::invariants(&s), csf_invariants(&s, 0.0).unwrap());
        flat_diff = flat_diff.max((flat.rho - csf.rho).abs()).max((flat.rho_perp - csf.rho_perp).abs()).max((flat.h_sq - csf.h_sq).abs());
    }
    let flat_ok = flat_diff <= 1e-14;

    let zero = ShapeOperatorSet::zeros(3, 3, 0.0).unwrap();
    let geo = csf_invariants(&zero, 1.0).unwrap();
    let x = geo.rho - 1.0;
    let bound = x * x - 2.0 * x + 1.0 / 3.0;
    let geo_ok = (geo.rho_perp.powi(2) - 1.0 / 3.0).abs() <= 1e-12 && (bound - 1.0 / 3.0).abs() <= 1e-12;

    let (mut violations, mut with_positive_c, mut worst) = (0, 0, f64::INFINITY);
    for _ in 0..1000 {
        let p = C3Params { a: rng.random_range(-2.0..2.0), b: rng.random_range(-2.0..2.0), c: rng.random_range(-2.0..2.0), d: rng.random_range(-2.0..2.0) };
        let c = rng.random_range(-2.0..2.0);
        let r = csf_check(&minimal_lagrangian_c3(&p), c, DEFAULT_TOL).unwrap();
        worst = worst.min(r.slack());
        if !r.holds {
            violations += 1;
            if c >= 0.0 {
                with_positive_c += 1;
            }
        }
    }
    verdict(
        flat_ok && geo_ok && violations == 0,
        format!(
            "flat reduction {flat_diff:.1e}, totally geodesic (rho_perp^2 = {:.15}, bound = {bound:.15}), csf inequality violated in {violations}/1000 draws, {with_positive_c} of them with c >= 0 (min slack {worst:.3})",
            geo.rho_perp.powi(2)
        ),
    )
}

fn criterion_10() -> Verdict {
    let mut rng = rng_from_seed(10);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 4;
        let m = 2 + k % 3;
        let t = MatrixTuple::new((0..m).map(|_| random_traceless_sym_with(&mut rng, n)).collect()).unwrap();
        let g = gradient(&t);
        let reference = |u: &MatrixTuple| common::commutator_sum(&u.mats().iter().map(common::dense).collect::<Vec<_>>());
        let (mut diff, mut norm) = (0.0, 0.0);
        for alpha in 0..m {
            // Shifted tuples are traceless-projected, so each quotient is the derivative along P(E).
            for i in 0..n {
                for j in i..n {
                    let e = SymMatrix::from_upper(n, |r, c| if (r, c) == (i, j) { 1.0 } else { 0.0 });
                    let shift = |sign: f64| {
                        let mut mats = t.mats().to_vec();
                        mats[alpha] = mats[alpha].add_scaled(sign * h, &e).unwrap();
                        MatrixTuple::project(&mats).unwrap()
                    };
                    let fd = (reference(&shift(1.0)) - reference(&shift(-1.0))) / (2.0 * h);
                    let an = g[alpha].frobenius_inner(&ddvv::matrix::traceless_project(&e)).unwrap();
                    diff += (fd - an).powi(2);
                    norm += an * an;
                }
            }
        }
        worst = worst.max((diff / norm).sqrt());
    }
    let rg: f64 = riemannian_gradient(&cdk_pair(3)).iter().map(SymMatrix::norm_sq).sum::<f64>().sqrt();
    verdict(worst < 1e-6 && rg < 1e-8, format!("max relative FD error {worst:.1e}, Riemannian gradient at CDK {rg:.1e}"))
}

fn criterion_11() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let args = SearchArgs {
            n: 3,
            m: 3,
            restarts: 64,
            iters: 5000,
            seed: 2024,
            step_init: 0.1,
            step_shrink: 0.5,
            grad_tol: 1e-10,
            output: Some(path.clone()),
        };
        assert_eq!(cmd_search(&args).unwrap(), 0);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        (serde_json::to_string(&v["best_value"]).unwrap(), serde_json::to_string(&v["best_tuple"]).unwrap())
    };
    let (a, b) = (run("a.json"), run("b.json"));
    verdict(a == b, format!("best_value {} identical: {}, best_tuple identical: {}", a.0, a.0 == b.0, a.1 == b.1))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("ddvv equality at the cdk pair", criterion_1),
        ("extremizer ceiling", criterion_2),
        ("theorem fuzzing", criterion_3),
        ("weak constants", criterion_4),
        ("dual-route invariants", criterion_5),
        ("h-umbilical closed forms", criterion_6),
        ("c3 family", criterion_7),
        ("c4 family", criterion_8),
        ("complex space form", criterion_9),
        ("gradient correctness", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let v = run();
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {} [{:.2}s]", i + 1, v.detail, started.elapsed().as_secs_f64());
        if !v.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
