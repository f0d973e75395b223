use crate::geometry::{h_unchecked, k_unchecked};
use crate::pair::ReflectorPair;

/// Which reflector of a pair a surface represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `z` over the source aperture, envelope of `k` paraboloids.
    First,
    /// `w` over the target aperture, envelope of `h` paraboloids.
    Second,
}

/// Height function of one reflector, evaluated anywhere in the aperture
/// plane as an envelope over the opposite side's support.
#[derive(Debug, Clone, Copy)]
pub struct ReflectorSurface<'a> {
    pub pair: &'a ReflectorPair,
    pub side: Side,
}

impl<'a> ReflectorSurface<'a> {
    pub fn new(pair: &'a ReflectorPair, side: Side) -> Self {
        ReflectorSurface { pair, side }
    }

    pub fn height(&self, x: &[f64]) -> f64 {
        match self.side {
            Side::First => eval_first(x, self.pair),
            Side::Second => eval_second(x, self.pair),
        }
    }
}

/// First reflector height: `max_j k(x; p_j, omega_j)` (type A) or the
/// minimum (type B).
pub fn eval_first(x: &[f64], pair: &ReflectorPair) -> f64 {
    let s = pair.kind.sign();
    let mut best = f64::NEG_INFINITY;
    for j in 0..pair.n_target() {
        best = best.max(s * k_unchecked(x, pair.target_point(j), pair.omega[j], pair.beta));
    }
    s * best
}

/// Second reflector height: `min_i h(p; x_i, zeta_i)` (type A) or the
/// maximum (type B).
pub fn eval_second(p: &[f64], pair: &ReflectorPair) -> f64 {
    let s = pair.kind.sign();
    let mut best = f64::INFINITY;
    for i in 0..pair.n_source() {
        best = best.min(s * h_unchecked(p, pair.source_point(i), pair.zeta[i], pair.beta));
    }
    s * best
}

/// `V(x) = |x|²/2 + beta z(x) - beta²/2`, convex for type A and concave for
/// type B; its gradient is the ray-tracing map.
pub fn potential_v(x: &[f64], pair: &ReflectorPair) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    r2 / 2.0 + pair.beta * eval_first(x, pair) - pair.beta * pair.beta / 2.0
}
