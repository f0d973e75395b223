//! Reference solvers used to check the library, written without any of its
//! transport machinery.
#![allow(dead_code)]

use mirrorpair::{DiscreteMeasure, ProblemSpec};
use rand::Rng;

/// Monotone (or, with `reverse`, anti-monotone) rearrangement of two 1D
/// measures: entries `(source, target, mass)`.
pub fn sort_oracle_1d(source: &DiscreteMeasure, target: &DiscreteMeasure, reverse: bool) -> Vec<(usize, usize, f64)> {
    let order = |m: &DiscreteMeasure, rev: bool| {
        let mut idx: Vec<usize> = (0..m.len()).collect();
        idx.sort_by(|&a, &b| m.point(a)[0].total_cmp(&m.point(b)[0]));
        if rev {
            idx.reverse();
        }
        idx
    };
    let rows = order(source, false);
    let cols = order(target, reverse);
    let (mut a, mut b) = (0, 0);
    let mut ra = source.weight(rows[0]);
    let mut rb = target.weight(cols[0]);
    let mut out = Vec::new();
    let eps = 1e-12 * source.total_mass();
    while a < rows.len() && b < cols.len() {
        let t = ra.min(rb);
        if t > eps {
            out.push((rows[a], cols[b], t));
        }
        ra -= t;
        rb -= t;
        if ra <= eps && a < rows.len() {
            a += 1;
            if a < rows.len() {
                ra = source.weight(rows[a]);
            }
        }
        if rb <= eps && b < cols.len() {
            b += 1;
            if b < cols.len() {
                rb = target.weight(cols[b]);
            }
        }
    }
    out
}

/// Minimum-cost perfect assignment of a square matrix (Hungarian method,
/// shortest augmenting paths). Returns the column of every row.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

/// Minimum and maximum of `Σ cost[i][σ(i)]` over all permutations.
pub fn brute_force_assignment(cost: &[Vec<f64>]) -> (f64, f64) {
    fn rec(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut (f64, f64)) {
        if row == cost.len() {
            best.0 = best.0.min(acc);
            best.1 = best.1.max(acc);
            return;
        }
        for j in 0..cost.len() {
            if !used[j] {
                used[j] = true;
                rec(cost, row + 1, used, acc + cost[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = (f64::INFINITY, f64::NEG_INFINITY);
    rec(cost, 0, &mut vec![false; cost.len()], 0.0, &mut best);
    best
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The transport cost `|x - p|²/2` as a dense matrix.
pub fn cost_rows(spec: &ProblemSpec) -> Vec<Vec<f64>> {
    (0..spec.source.len())
        .map(|i| {
            (0..spec.target.len())
                .map(|j| 0.5 * sq_dist(spec.source.point(i), spec.target.point(j)))
                .collect()
        })
        .collect()
}

/// `n` uniform-weight points on each side in the unit square.
pub fn random_assignment_problem<R: Rng>(rng: &mut R, n: usize, beta: f64) -> ProblemSpec {
    let cloud = |rng: &mut R| {
        let coords: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
        DiscreteMeasure::from_flat(2, coords, vec![1.0 / n as f64; n]).unwrap()
    };
    let s = cloud(rng);
    let t = cloud(rng);
    mirrorpair::validate_problem(&ProblemSpec::new(s, t, beta)).unwrap().0
}

/// Random positions and positive weights, target rescaled to the source mass.
pub fn random_problem<R: Rng>(rng: &mut R, m: usize, n: usize, dim: usize, beta: f64) -> ProblemSpec {
    let cloud = |rng: &mut R, k: usize| {
        let coords: Vec<f64> = (0..dim * k).map(|_| rng.gen::<f64>()).collect();
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
        DiscreteMeasure::from_flat(dim, coords, weights).unwrap()
    };
    let s = cloud(rng, m);
    let t = cloud(rng, n);
    let mut spec = ProblemSpec::new(s, t, beta);
    spec.force_balance = true;
    mirrorpair::validate_problem(&spec).unwrap().0
}
