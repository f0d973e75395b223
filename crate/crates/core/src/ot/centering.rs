//! Canonical dual potentials for a fixed optimal plan.
//!
//! A basic solution only pins the duals on each connected component of the
//! plan support; across components any shift satisfying the difference
//! constraints `t_A - t_B <= slack(A, B)` stays optimal. Vertex duals make
//! extra arcs tight, which shows up as spurious ties in the ray-tracing
//! argmax. We pick the shift
//!
//! `t_A = (1 / 2K) Σ_r (D[r][A] - D[A][r])`
//!
//! where `D` holds all-pairs shortest paths of the constraint graph. Every
//! term is feasible, so the average is, and an arc that is slack for some
//! root is slack in the average. The result depends only on the support,
//! not on which vertex the simplex stopped at.

use super::cost::CostMatrix;
use crate::par::{for_each_row, Exec};

/// Potentials `(phi, psi)` with `phi_i + psi_j = c_ij` on the support arcs
/// and centered shifts between support components, or `None` when the
/// number of components exceeds `limit`.
pub(crate) fn centered_duals(
    cost: &CostMatrix,
    support: &[(usize, usize)],
    limit: usize,
    exec: Exec,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let (m, n) = (cost.rows(), cost.cols());
    let nodes = m + n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for &(i, j) in support {
        adj[i].push(m + j);
        adj[m + j].push(i);
    }

    let mut comp = vec![usize::MAX; nodes];
    let mut pot = vec![0.0; nodes];
    let mut k = 0;
    let mut stack = Vec::new();
    for start in 0..nodes {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = k;
        pot[start] = 0.0;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if comp[y] != usize::MAX {
                    continue;
                }
                comp[y] = k;
                // pot holds phi for sources and psi for targets
                pot[y] = if x < m {
                    cost.get(x, y - m) - pot[x]
                } else {
                    cost.get(y, x - m) - pot[x]
                };
                stack.push(y);
            }
        }
        k += 1;
    }
    if k > limit {
        return None;
    }

    let mut phi = pot[..m].to_vec();
    let mut psi = pot[m..].to_vec();
    if k == 1 {
        return Some((phi, psi));
    }

    // dist[b * k + a]: edge b -> a bounds t_a - t_b
    let mut dist = vec![f64::INFINITY; k * k];
    for i in 0..m {
        let a = comp[i];
        let row = cost.row(i);
        for j in 0..n {
            let b = comp[m + j];
            if a != b {
                let s = row[j] - phi[i] - psi[j];
                let d = &mut dist[b * k + a];
                if s < *d {
                    *d = s;
                }
            }
        }
    }
    for a in 0..k {
        dist[a * k + a] = 0.0;
    }
    floyd_warshall(&mut dist, k, exec);

    let shift: Vec<f64> = (0..k)
        .map(|a| {
            let mut s = 0.0;
            for r in 0..k {
                s += dist[r * k + a] - dist[a * k + r];
            }
            s / (2 * k) as f64
        })
        .collect();
    for i in 0..m {
        phi[i] += shift[comp[i]];
    }
    for j in 0..n {
        psi[j] -= shift[comp[m + j]];
    }
    Some((phi, psi))
}

/// In-place all-pairs shortest paths on a dense `k x k` matrix.
pub fn floyd_warshall(dist: &mut [f64], k: usize, exec: Exec) {
    let mut pivot_row = vec![0.0; k];
    for p in 0..k {
        pivot_row.copy_from_slice(&dist[p * k..(p + 1) * k]);
        let pr = &pivot_row;
        for_each_row(exec, dist, k, |_, row| {
            let d = row[p];
            if d.is_finite() {
                for (x, &y) in row.iter_mut().zip(pr) {
                    let c = d + y;
                    if c < *x {
                        *x = c;
                    }
                }
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floyd_matches_brute_force() {
        let k = 6;
        let mut d: Vec<f64> = (0..k * k)
            .map(|e| if e % (k + 1) == 0 { 0.0 } else { ((e * 7919) % 13) as f64 + 1.0 })
            .collect();
        let orig = d.clone();
        floyd_warshall(&mut d, k, Exec::Sequential);
        // Bellman-Ford style relaxation as oracle
        let mut o = orig.clone();
        for _ in 0..k {
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        o[a * k + c] = o[a * k + c].min(o[a * k + b] + orig[b * k + c]);
                    }
                }
            }
        }
        assert_eq!(d, o);
        let mut p = orig;
        floyd_warshall(&mut p, k, Exec::Parallel);
        assert_eq!(p, d);
    }

    #[test]
    fn identity_instance_centers_to_zero_duals() {
        // two points on each side at 0 and 1, identity support
        let cost = CostMatrix::from_vec(2, 2, vec![0.0, 0.5, 0.5, 0.0]);
        let (phi, psi) = centered_duals(&cost, &[(0, 0), (1, 1)], 10, Exec::Sequential).unwrap();
        // midpoint of the feasible interval, up to a global constant
        let c = phi[0];
        assert!((phi[1] - c).abs() < 1e-15);
        assert!((psi[0] + c).abs() < 1e-15 && (psi[1] + c).abs() < 1e-15);
    }
}
