//! Naive dense reference computations, written from the definitions and sharing no
//! code with the library beyond reading matrix entries.

#![allow(dead_code)]

use ddvv::{ShapeOperatorSet, SymMatrix};

pub type Dense = Vec<Vec<f64>>;

pub fn dense(a: &SymMatrix) -> Dense {
    let n = a.dim();
    (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn bracket(a: &Dense, b: &Dense) -> Dense {
    let (ab, ba) = (mul(a, b), mul(b, a));
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn fro_sq(a: &Dense) -> f64 {
    a.iter().flatten().map(|x| x * x).sum()
}

pub fn trace(a: &Dense) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn traceless(a: &Dense) -> Dense {
    let n = a.len();
    let t = trace(a) / n as f64;
    (0..n).map(|i| (0..n).map(|j| a[i][j] - if i == j { t } else { 0.0 }).collect()).collect()
}

/// Sum of `‖[A,B]‖²` over ordered pairs of distinct members.
pub fn commutator_sum(mats: &[Dense]) -> f64 {
    let mut s = 0.0;
    for (x, a) in mats.iter().enumerate() {
        for (y, b) in mats.iter().enumerate() {
            if x != y {
                s += fro_sq(&bracket(a, b));
            }
        }
    }
    s
}

pub fn ops(s: &ShapeOperatorSet) -> Vec<Dense> {
    s.ops().iter().map(dense).collect()
}

/// Average of the sectional curvatures `c + Σ_α (A_ii A_jj − A_ij²)` over coordinate planes.
pub fn rho(s: &ShapeOperatorSet) -> f64 {
    let a = ops(s);
    let n = s.n();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += s.ambient_c();
            for op in &a {
                sum += op[i][i] * op[j][j] - op[i][j] * op[i][j];
            }
        }
    }
    2.0 * sum / (n * (n - 1)) as f64
}

/// `2/(n(n−1)) · sqrt(Σ_{i<j, α<β} R⊥²)`, with component `⟨[A_α,A_β]eᵢ,eⱼ⟩ + extra(i,j,α,β)`.
pub fn rho_perp_with(s: &ShapeOperatorSet, extra: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
    let a = ops(s);
    let n = s.n();
    let mut sum = 0.0;
    for al in 0..a.len() {
        for be in (al + 1)..a.len() {
            let c = bracket(&a[al], &a[be]);
            for i in 0..n {
                for j in (i + 1)..n {
                    let r = c[j][i] + extra(i, j, al, be);
                    sum += r * r;
                }
            }
        }
    }
    2.0 / (n * (n - 1)) as f64 * sum.sqrt()
}

pub fn rho_perp(s: &ShapeOperatorSet) -> f64 {
    rho_perp_with(s, |_, _, _, _| 0.0)
}

pub fn h_sq(s: &ShapeOperatorSet) -> f64 {
    let n = s.n() as f64;
    ops(s).iter().map(|a| (trace(a) / n).powi(2)).sum()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
