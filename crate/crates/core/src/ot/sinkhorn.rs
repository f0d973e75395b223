//! Log-domain Sinkhorn scaling and marginal rounding.

use super::cost::CostMatrix;
use crate::par::{map_indices, Exec};

pub(crate) struct SinkhornOutput {
    /// Dense plan with exactly rounded marginals.
    pub plan: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[inline]
fn log_sum_exp(vals: impl Iterator<Item = f64> + Clone) -> f64 {
    let mx = vals.clone().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + vals.map(|v| (v - mx).exp()).sum::<f64>().ln()
}

/// Soft c-transform: `out_r = eps ln w_r - eps LSE_s((pot_s - c_rs)/eps)`.
fn half_step(cost: &CostMatrix, pot: &[f64], log_w: &[f64], eps: f64, exec: Exec) -> Vec<f64> {
    map_indices(exec, cost.rows(), |r| {
        let row = cost.row(r);
        let lse = log_sum_exp(row.iter().zip(pot).map(|(c, p)| (p - c) / eps));
        eps * (log_w[r] - lse)
    })
}

fn dense_plan(cost: &CostMatrix, f: &[f64], g: &[f64], eps: f64, exec: Exec) -> Vec<f64> {
    let n = cost.cols();
    let rows = map_indices(exec, cost.rows(), |i| {
        cost.row(i)
            .iter()
            .zip(g)
            .map(|(c, gj)| ((f[i] + gj - c) / eps).exp())
            .collect::<Vec<_>>()
    });
    let mut out = Vec::with_capacity(cost.rows() * n);
    for r in rows {
        out.extend(r);
    }
    out
}

pub(crate) fn solve(
    cost: &CostMatrix,
    a: &[f64],
    b: &[f64],
    eps: f64,
    max_iters: usize,
    tol: f64,
    exec: Exec,
) -> SinkhornOutput {
    let (m, n) = (cost.rows(), cost.cols());
    let cost_t = cost.transposed();
    let log_a: Vec<f64> = a.iter().map(|w| w.ln()).collect();
    let log_b: Vec<f64> = b.iter().map(|w| w.ln()).collect();
    let mass: f64 = a.iter().sum();
    let mut f = vec![0.0; m];
    let mut g = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        f = half_step(cost, &g, &log_a, eps, exec);
        g = half_step(&cost_t, &f, &log_b, eps, exec);
        if iterations % 10 == 0 || iterations == max_iters {
            // columns are exact after the g update; measure the rows
            let err: f64 = map_indices(exec, m, |i| {
                let row = cost.row(i);
                let s: f64 = row.iter().zip(&g).map(|(c, gj)| ((f[i] + gj - c) / eps).exp()).sum();
                (s - a[i]).abs()
            })
            .iter()
            .sum();
            if err <= tol * mass {
                converged = true;
                break;
            }
        }
    }
    let mut plan = dense_plan(cost, &f, &g, eps, exec);
    round_to_marginals(&mut plan, a, b);
    SinkhornOutput {
        plan,
        f,
        g,
        iterations,
        converged,
    }
}

/// Projects a nonnegative matrix onto the transport polytope: scale rows
/// down to at most `a`, columns down to at most `b`, then add the rank-one
/// correction `err_a err_bᵀ / |err_a|₁`.
pub(crate) fn round_to_marginals(plan: &mut [f64], a: &[f64], b: &[f64]) {
    let (m, n) = (a.len(), b.len());
    for i in 0..m {
        let row = &mut plan[i * n..(i + 1) * n];
        let s: f64 = row.iter().sum();
        if s > a[i] {
            let x = a[i] / s;
            row.iter_mut().for_each(|v| *v *= x);
        }
    }
    let mut cols = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            cols[j] += plan[i * n + j];
        }
    }
    let scale: Vec<f64> = (0..n)
        .map(|j| if cols[j] > b[j] { b[j] / cols[j] } else { 1.0 })
        .collect();
    for i in 0..m {
        for j in 0..n {
            plan[i * n + j] *= scale[j];
        }
    }
    let err_a: Vec<f64> = (0..m)
        .map(|i| (a[i] - plan[i * n..(i + 1) * n].iter().sum::<f64>()).max(0.0))
        .collect();
    let mut cols = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            cols[j] += plan[i * n + j];
        }
    }
    let err_b: Vec<f64> = (0..n).map(|j| (b[j] - cols[j]).max(0.0)).collect();
    let total: f64 = err_a.iter().sum();
    if total > 0.0 {
        for i in 0..m {
            if err_a[i] == 0.0 {
                continue;
            }
            let ri = err_a[i] / total;
            for j in 0..n {
                plan[i * n + j] += ri * err_b[j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_hits_marginals() {
        let a = [0.2, 0.3, 0.5];
        let b = [0.6, 0.4];
        let mut p = vec![0.3, 0.01, 0.05, 0.2, 0.1, 0.1];
        round_to_marginals(&mut p, &a, &b);
        for i in 0..3 {
            let s: f64 = p[i * 2..i * 2 + 2].iter().sum();
            assert!((s - a[i]).abs() < 1e-15);
        }
        for j in 0..2 {
            let s: f64 = (0..3).map(|i| p[i * 2 + j]).sum();
            assert!((s - b[j]).abs() < 1e-15);
        }
        assert!(p.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn lse_is_stable() {
        let v = [-1000.0, -1000.0];
        let r = log_sum_exp(v.iter().copied());
        assert!((r - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
