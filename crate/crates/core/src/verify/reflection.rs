use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::angle_between;
use crate::pair::ReflectorPair;
use crate::problem::ProblemSpec;
use crate::reflector::{preimages, target_index};

/// Angle residuals of the reflection law at both mirrors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionCheck {
    /// Angle between the ray reflected off the first mirror and the segment
    /// joining the two reflection points.
    pub first_surface: f64,
    /// Angle between the ray reflected off the second mirror and the
    /// vertical axis.
    pub second_surface: f64,
    pub max: f64,
}

fn reflect(v: &[f64], normal: &[f64]) -> Vec<f64> {
    let n2: f64 = normal.iter().map(|a| a * a).sum();
    let dot: f64 = v.iter().zip(normal).map(|(a, b)| a * b).sum();
    v.iter().zip(normal).map(|(a, b)| a - 2.0 * dot / n2 * b).collect()
}

/// Traces every source support ray through both mirrors, with mirror
/// normals taken from the slopes implied by the ray-tracing map:
/// `∇z(x) = (P(x) - x)/beta` and `∇w(p) = (p - x̄)/beta` where `x̄` is the
/// intensity-weighted mean of the preimage of `p`. The front offset `d`
/// only places the output wavefront and must be finite.
pub fn check_reflection_law(pair: &ReflectorPair, spec: &ProblemSpec, d: f64) -> Result<ReflectionCheck> {
    if !d.is_finite() {
        return Err(Error::invalid("front offset must be finite"));
    }
    if !pair.matches(spec) {
        return Err(Error::invalid("pair supports differ from the problem"));
    }
    let n = pair.dim;
    let beta = pair.beta;
    let pre = preimages(pair);
    let reps: Vec<Option<Vec<f64>>> = pre
        .iter()
        .map(|set| {
            let mass: f64 = set.iter().map(|&i| spec.source.weight(i)).sum();
            if set.is_empty() || mass <= 0.0 {
                return None;
            }
            let mut bar = vec![0.0; n];
            for &i in set {
                let w = spec.source.weight(i) / mass;
                for (b, x) in bar.iter_mut().zip(pair.source_point(i)) {
                    *b += w * x;
                }
            }
            Some(bar)
        })
        .collect();

    let mut axis = vec![0.0; n + 1];
    axis[n] = 1.0;
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for i in 0..pair.n_source() {
        let x = pair.source_point(i);
        let j = target_index(x, pair);
        let p = pair.target_point(j);
        let mut normal1: Vec<f64> = x.iter().zip(p).map(|(a, b)| -(b - a) / beta).collect();
        normal1.push(1.0);
        let y = reflect(&axis, &normal1);
        let mut segment: Vec<f64> = x.iter().zip(p).map(|(a, b)| b - a).collect();
        segment.push(pair.omega[j] - pair.zeta[i]);
        if segment.iter().all(|v| *v == 0.0) {
            r1 = std::f64::consts::PI;
        } else {
            r1 = r1.max(angle_between(&y, &segment));
        }
        let rep = reps[j].as_deref().unwrap_or(x);
        let mut normal2: Vec<f64> = rep.iter().zip(p).map(|(a, b)| -(b - a) / beta).collect();
        normal2.push(1.0);
        let out = reflect(&y, &normal2);
        r2 = r2.max(angle_between(&out, &axis));
    }
    Ok(ReflectionCheck {
        first_surface: r1,
        second_surface: r2,
        max: r1.max(r2),
    })
}
