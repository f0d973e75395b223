//! The affine correspondence between Kantorovich potentials and reflector
//! heights, envelope tightening, gauge fixing and the functional `F`.
//!
//! With `zeta_i = beta/2 - phi_i/beta` and `omega_j = psi_j/beta`,
//! `phi_i + psi_j <= |x_i - p_j|²/2` is exactly
//! `zeta_i - omega_j >= (beta² - |x_i - p_j|²)/(2 beta)`.

use super::{CostMatrix, Direction, DualPotentials};
use crate::error::{Error, Result};
use crate::geometry::{h_unchecked, k_unchecked};
use crate::pair::{Gauge, Kind, ReflectorPair, PAIR_TOLERANCE};
use crate::par::{map_indices, Exec};
use crate::problem::ProblemSpec;

/// Affine map only: no tightening, no gauge.
pub fn duals_to_reflectors_raw(duals: &DualPotentials, spec: &ProblemSpec, direction: Direction) -> Result<ReflectorPair> {
    let beta = spec.beta;
    let zeta = duals.phi.iter().map(|p| beta / 2.0 - p / beta).collect();
    let omega = duals.psi.iter().map(|p| p / beta).collect();
    ReflectorPair::new(spec, zeta, omega, direction.kind(), Gauge::Raw)
}

/// Inverse of [`duals_to_reflectors_raw`].
pub fn reflectors_to_duals(pair: &ReflectorPair) -> DualPotentials {
    let beta = pair.beta;
    DualPotentials {
        phi: pair.zeta.iter().map(|z| beta * (beta / 2.0 - z)).collect(),
        psi: pair.omega.iter().map(|w| beta * w).collect(),
    }
}

/// Converts feasible duals into a tight, gauge-fixed reflector pair.
pub fn duals_to_reflectors(
    duals: &DualPotentials,
    spec: &ProblemSpec,
    direction: Direction,
    gauge: Gauge,
) -> Result<ReflectorPair> {
    if duals.phi.len() != spec.source.len() || duals.psi.len() != spec.target.len() {
        return Err(Error::invalid("dual vectors do not match the supports"));
    }
    let raw = duals_to_reflectors_raw(duals, spec, direction)?;
    let violation = raw.admissibility_violation();
    let scale = 1.0 + spec.beta + raw.lipschitz_constant() * raw.lipschitz_constant() * spec.beta;
    if violation > PAIR_TOLERANCE * scale {
        return Err(Error::invalid(format!("infeasible duals (violation {violation:e})")));
    }
    Ok(apply_gauge(&c_transform_pair(&raw), gauge))
}

/// Replaces `zeta` by the envelope of the `k` paraboloids focused on the
/// target heights, then `omega` by the envelope of the `h` paraboloids
/// focused on the new `zeta` (sup/inf for type A, inf/sup for type B).
pub fn c_transform_pair(pair: &ReflectorPair) -> ReflectorPair {
    c_transform_pair_with(pair, Exec::default())
}

pub(crate) fn c_transform_pair_with(pair: &ReflectorPair, exec: Exec) -> ReflectorPair {
    let beta = pair.beta;
    let s = pair.kind.sign();
    let zeta = map_indices(exec, pair.n_source(), |i| {
        let x = pair.source_point(i);
        let best = (0..pair.n_target())
            .map(|j| s * k_unchecked(x, pair.target_point(j), pair.omega[j], beta))
            .fold(f64::NEG_INFINITY, f64::max);
        s * best
    });
    let omega = map_indices(exec, pair.n_target(), |j| {
        let p = pair.target_point(j);
        let best = (0..pair.n_source())
            .map(|i| s * h_unchecked(p, pair.source_point(i), zeta[i], beta))
            .fold(f64::INFINITY, f64::min);
        s * best
    });
    ReflectorPair {
        zeta,
        omega,
        ..pair.clone()
    }
}

/// Shifts both reflectors by one constant according to `gauge`.
pub fn apply_gauge(pair: &ReflectorPair, gauge: Gauge) -> ReflectorPair {
    let shift = match gauge {
        Gauge::Raw => 0.0,
        Gauge::MinFirstZero => -pair.zeta.iter().copied().fold(f64::INFINITY, f64::min),
        Gauge::MinSecondZero => -pair.omega.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let mut out = pair.translated(shift);
    out.gauge = gauge;
    out
}

/// `F = Σ zeta_i I_i - Σ omega_j L_j`.
pub fn functional_f(pair: &ReflectorPair, spec: &ProblemSpec) -> f64 {
    let a: f64 = pair.zeta.iter().zip(spec.source.weights()).map(|(z, w)| z * w).sum();
    let b: f64 = pair.omega.iter().zip(spec.target.weights()).map(|(o, w)| o * w).sum();
    a - b
}

/// Makes possibly infeasible duals (e.g. from Sinkhorn) feasible by
/// replacing `phi` with the c-transform of `psi`.
pub fn c_transform_duals(duals: &DualPotentials, cost: &CostMatrix, direction: Direction) -> DualPotentials {
    let phi = (0..cost.rows())
        .map(|i| {
            let row = cost.row(i).iter().zip(&duals.psi).map(|(c, q)| c - q);
            match direction {
                Direction::MinCost => row.fold(f64::INFINITY, f64::min),
                Direction::MaxCost => row.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    DualPotentials {
        phi,
        psi: duals.psi.clone(),
    }
}

impl Kind {
    pub fn direction(self) -> Direction {
        Direction::from(self)
    }
}
