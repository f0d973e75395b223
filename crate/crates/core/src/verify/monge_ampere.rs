//! Finite-difference residual of `L(∇V) |det Hess V| = I` for the potential
//! of a solved pair. The discrete `V` is piecewise affine, so the stencil
//! step must be tied to the sampling resolution; each refinement level
//! therefore carries its own solved pair.

use crate::density::{AnalyticDensity, SyntheticProblem};
use crate::design::{design, DesignSettings};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::pair::{Kind, ReflectorPair};
use crate::reflector::potential_v;

/// One refinement level: a pair, the difference step and the nodes at which
/// the residual is sampled.
#[derive(Debug, Clone)]
pub struct MongeAmpereLevel {
    pub pair: ReflectorPair,
    pub step: f64,
    pub nodes: Vec<Vec<f64>>,
}

/// Support points whose full difference stencil (`±step` along each axis
/// and each diagonal pair) stays inside the support's bounding box.
pub fn interior_nodes(measure: &DiscreteMeasure, step: f64) -> Vec<Vec<f64>> {
    let (lo, hi) = measure.bounding_box();
    let slack = 1e-9 * step;
    measure
        .points()
        .filter(|p| {
            p.iter()
                .enumerate()
                .all(|(k, v)| v - step >= lo[k] - slack && v + step <= hi[k] + slack)
        })
        .map(<[f64]>::to_vec)
        .collect()
}

fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&r, &s| a[r * n + c].abs().total_cmp(&a[s * n + c].abs()))
            .unwrap();
        if a[piv * n + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
            }
            det = -det;
        }
        let d = a[c * n + c];
        det *= d;
        for r in c + 1..n {
            let f = a[r * n + c] / d;
            for k in c..n {
                a[r * n + k] -= f * a[c * n + k];
            }
        }
    }
    det
}

fn residual_at(x: &[f64], pair: &ReflectorPair, h: f64, source: &AnalyticDensity, target: &AnalyticDensity) -> f64 {
    let n = x.len();
    let v = |dx: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(k, s) in dx {
            y[k] += s * h;
        }
        potential_v(&y, pair)
    };
    let v0 = v(&[]);
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n * n];
    for k in 0..n {
        let (vp, vm) = (v(&[(k, 1.0)]), v(&[(k, -1.0)]));
        grad[k] = (vp - vm) / (2.0 * h);
        hess[k * n + k] = (vp - 2.0 * v0 + vm) / (h * h);
        for l in k + 1..n {
            let d = (v(&[(k, 1.0), (l, 1.0)]) - v(&[(k, 1.0), (l, -1.0)]) - v(&[(k, -1.0), (l, 1.0)])
                + v(&[(k, -1.0), (l, -1.0)]))
                / (4.0 * h * h);
            hess[k * n + l] = d;
            hess[l * n + k] = d;
        }
    }
    (target.eval(&grad) * determinant(hess, n).abs() - source.eval(x)).abs()
}

/// `|L(∇V)|det Hess V| - I| / max I` at every node of one level.
pub fn node_residuals(level: &MongeAmpereLevel, source: &AnalyticDensity, target: &AnalyticDensity) -> Result<Vec<f64>> {
    let imax = level.nodes.iter().map(|x| source.eval(x)).fold(0.0, f64::max);
    if imax <= 0.0 {
        return Err(Error::invalid("source density vanishes on all nodes"));
    }
    Ok(level
        .nodes
        .iter()
        .map(|x| residual_at(x, &level.pair, level.step, source, target) / imax)
        .collect())
}

/// Median over each level's nodes of `|L(∇V)|det Hess V| - I| / max I`.
pub fn check_monge_ampere(
    levels: &[MongeAmpereLevel],
    source: &AnalyticDensity,
    target: &AnalyticDensity,
) -> Result<Vec<f64>> {
    if levels.len() < 2 {
        return Err(Error::invalid("Monge-Ampère check needs at least two refinement levels"));
    }
    levels
        .iter()
        .map(|level| {
            if level.nodes.is_empty() {
                return Err(Error::invalid("refinement level has no interior nodes"));
            }
            if !(level.step.is_finite() && level.step > 0.0) {
                return Err(Error::invalid("difference step must be positive"));
            }
            let mut r = node_residuals(level, source, target)?;
            r.sort_by(f64::total_cmp);
            let mid = r.len() / 2;
            Ok(if r.len() % 2 == 1 { r[mid] } else { 0.5 * (r[mid - 1] + r[mid]) })
        })
        .collect()
}

/// Stencil step for a grid of `cells` cells of width `h` per axis: about
/// `sqrt(cells)` cell widths. A step of one cell sees individual slope
/// jumps of the piecewise affine potential and does not converge; a step
/// of order `sqrt(h)` balances that noise against the truncation error.
pub fn stencil_step(h: f64, cells: usize) -> f64 {
    h * (cells as f64).sqrt().ceil().max(1.0)
}

/// Solves `problem` at resolutions `1, 2, 4, ...` (`levels` of them) and
/// prepares the type A levels with [`stencil_step`].
pub fn monge_ampere_levels(
    problem: &SyntheticProblem,
    levels: usize,
    settings: &DesignSettings,
) -> Result<Vec<MongeAmpereLevel>> {
    (0..levels)
        .map(|l| {
            let refined = problem.refined(1 << l);
            let (spec, _) = refined.to_spec()?;
            let h = refined.source.spacing().into_iter().fold(f64::INFINITY, f64::min);
            let cells = refined.source.cells.iter().copied().max().unwrap_or(1);
            let step = stencil_step(h, cells);
            let d = design(&spec, Kind::TypeA, settings)?;
            let nodes = interior_nodes(&spec.source, step);
            Ok(MongeAmpereLevel {
                pair: d.pair,
                step,
                nodes,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(vec![2.0], 1), 2.0);
        assert!((determinant(vec![1.0, 2.0, 3.0, 4.0], 2) + 2.0).abs() < 1e-15);
        assert!((determinant(vec![0.0, 1.0, 1.0, 0.0], 2) + 1.0).abs() < 1e-15);
    }
}
