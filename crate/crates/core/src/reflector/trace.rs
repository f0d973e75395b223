use serde::{Deserialize, Serialize};

use crate::geometry::{dist2, k_unchecked};
use crate::pair::ReflectorPair;

/// One ray followed through both reflectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayTraceResult {
    pub source_point: Vec<f64>,
    pub target_point: Vec<f64>,
    /// Index of the target support point hit.
    pub target_index: usize,
    pub z_height: f64,
    pub w_height: f64,
    /// Distance between the two reflection points.
    pub segment_length: f64,
    /// `z - w + t`; equals `beta` for a valid design.
    pub opl_reduced: f64,
}

fn tie_tolerance(best: f64, beta: f64) -> f64 {
    1e-11 * (1.0 + best.abs() + beta)
}

/// Supporting paraboloid values `s * k(x; p_j, omega_j)` (maximized for
/// either kind) and their maximum.
fn scores(x: &[f64], pair: &ReflectorPair) -> (Vec<f64>, f64) {
    let s = pair.kind.sign();
    let vals: Vec<f64> = (0..pair.n_target())
        .map(|j| s * k_unchecked(x, pair.target_point(j), pair.omega[j], pair.beta))
        .collect();
    let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (vals, best)
}

/// All target indices whose paraboloid supports the first reflector at `x`
/// (the full multivalued ray-tracing map).
pub fn argmax_set(x: &[f64], pair: &ReflectorPair) -> Vec<usize> {
    let (vals, best) = scores(x, pair);
    let tol = tie_tolerance(best, pair.beta);
    (0..vals.len()).filter(|&j| vals[j] >= best - tol).collect()
}

/// Single-valued ray-tracing map: the lowest index in [`argmax_set`].
pub fn target_index(x: &[f64], pair: &ReflectorPair) -> usize {
    let (vals, best) = scores(x, pair);
    let tol = tie_tolerance(best, pair.beta);
    vals.iter().position(|&v| v >= best - tol).expect("pair has target support")
}

fn finish(x: &[f64], z: f64, j: usize, pair: &ReflectorPair) -> RayTraceResult {
    let p = pair.target_point(j);
    let w = pair.omega[j];
    let dz = z - w;
    let t = (dist2(x, p) + dz * dz).sqrt();
    RayTraceResult {
        source_point: x.to_vec(),
        target_point: p.to_vec(),
        target_index: j,
        z_height: z,
        w_height: w,
        segment_length: t,
        opl_reduced: dz + t,
    }
}

/// Traces the ray entering at an arbitrary point `x` of the aperture plane,
/// using the envelope height `z(x)`.
pub fn ray_trace(x: &[f64], pair: &ReflectorPair) -> RayTraceResult {
    let j = target_index(x, pair);
    let z = crate::reflector::eval_first(x, pair);
    finish(x, z, j, pair)
}

/// Traces the ray through source support point `i`, using the stored height
/// `zeta_i` rather than the envelope (so inconsistent pairs show up).
pub fn ray_trace_source(i: usize, pair: &ReflectorPair) -> RayTraceResult {
    let x = pair.source_point(i);
    let j = target_index(x, pair);
    finish(x, pair.zeta[i], j, pair)
}

/// For every target index, the source indices whose ray-tracing set
/// contains it.
pub fn preimages(pair: &ReflectorPair) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); pair.n_target()];
    for i in 0..pair.n_source() {
        for j in argmax_set(pair.source_point(i), pair) {
            out[j].push(i);
        }
    }
    out
}

/// Source support indices whose rays can land on the target support point
/// at `p`; empty when `p` is not a target support point.
pub fn inverse_ray_trace(p: &[f64], pair: &ReflectorPair) -> Vec<usize> {
    let targets: Vec<usize> = (0..pair.n_target()).filter(|&j| pair.target_point(j) == p).collect();
    if targets.is_empty() {
        return Vec::new();
    }
    (0..pair.n_source())
        .filter(|&i| {
            let set = argmax_set(pair.source_point(i), pair);
            targets.iter().any(|j| set.contains(j))
        })
        .collect()
}
