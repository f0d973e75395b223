use crate::pair::ReflectorPair;
use crate::reflector::ray_trace_source;

/// Largest deviation of the reduced optical path `z - w + t` from `beta`
/// over the source support, using the stored heights.
pub fn check_opl(pair: &ReflectorPair) -> f64 {
    (0..pair.n_source())
        .map(|i| (ray_trace_source(i, pair).opl_reduced - pair.beta).abs())
        .fold(0.0, f64::max)
}

/// Same check on the absolute path `z + t + s` with `s = d - w`, against
/// `l = beta + d`. The front offset `d` cancels up to rounding.
pub fn check_opl_absolute(pair: &ReflectorPair, d: f64) -> f64 {
    (0..pair.n_source())
        .map(|i| {
            let r = ray_trace_source(i, pair);
            let s = d - r.w_height;
            (r.z_height + r.segment_length + s - (pair.beta + d)).abs()
        })
        .fold(0.0, f64::max)
}
