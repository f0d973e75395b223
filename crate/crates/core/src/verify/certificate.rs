use rand::Rng;
use serde::{Deserialize, Serialize};

use super::random::random_feasible_plan;
use crate::error::{Error, Result};
use crate::ot::functional_f;
use crate::pair::{Kind, ReflectorPair};
use crate::plan::TransportPlan;
use crate::problem::ProblemSpec;

/// Optimality certificate for an exact solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Largest `|zeta_i - omega_j - (beta² - r²)/(2 beta)|` over plan entries.
    pub slackness_violation: f64,
    /// `|F - (beta/2) M + cost/beta|` relative to the size of its terms.
    pub duality_rel_error: f64,
    pub random_plans: usize,
    /// Smallest `±(random cost - plan cost)` (sign so that >= 0 is correct).
    pub random_margin: f64,
    pub random_costs: Vec<f64>,
    pub slackness_ok: bool,
    pub duality_ok: bool,
    pub random_ok: bool,
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.slackness_ok && self.duality_ok && self.random_ok
    }
}

pub const SLACKNESS_TOLERANCE: f64 = 1e-9;
pub const DUALITY_TOLERANCE: f64 = 1e-9;

/// Checks complementary slackness of `plan` against `pair`, the identity
/// `F(pair) = (beta/2) M - cost/beta`, and that `n_random` random feasible
/// plans cost no less (type A) or no more (type B) than `plan`.
pub fn certify_optimality<R: Rng + ?Sized>(
    pair: &ReflectorPair,
    spec: &ProblemSpec,
    plan: &TransportPlan,
    n_random: usize,
    rng: &mut R,
) -> Result<Certificate> {
    if !pair.matches(spec) {
        return Err(Error::invalid("pair supports differ from the problem"));
    }
    let mut violations = Vec::new();
    let mut slack = 0.0f64;
    for e in &plan.entries {
        if e.mass > 0.0 {
            let s = pair.slack(e.source, e.target).abs();
            if s > SLACKNESS_TOLERANCE {
                violations.push(format!(
                    "plan entry ({}, {}) with mass {:e} has slack {:e}",
                    e.source, e.target, e.mass, s
                ));
            }
            slack = slack.max(s);
        }
    }
    let beta = pair.beta;
    let m = spec.mass();
    let f = functional_f(pair, spec);
    let expected = beta / 2.0 * m - plan.cost / beta;
    let scale = f.abs().max(beta / 2.0 * m).max(plan.cost / beta).max(f64::MIN_POSITIVE);
    let duality_rel_error = (f - expected).abs() / scale;
    if duality_rel_error > DUALITY_TOLERANCE {
        violations.push(format!("F = {f:e} but (beta/2)M - cost/beta = {expected:e}"));
    }
    let sign = match pair.kind {
        Kind::TypeA => 1.0,
        Kind::TypeB => -1.0,
    };
    let tol = 1e-12 * plan.cost.abs().max(f64::MIN_POSITIVE);
    let mut random_costs = Vec::with_capacity(n_random);
    let mut margin = f64::INFINITY;
    for _ in 0..n_random {
        let c = random_feasible_plan(spec, rng)?.cost;
        let d = sign * (c - plan.cost);
        if d < -tol {
            violations.push(format!("random plan cost {c:e} beats plan cost {:e}", plan.cost));
        }
        margin = margin.min(d);
        random_costs.push(c);
    }
    Ok(Certificate {
        slackness_violation: slack,
        duality_rel_error,
        random_plans: n_random,
        random_margin: margin,
        random_costs,
        slackness_ok: slack <= SLACKNESS_TOLERANCE,
        duality_ok: duality_rel_error <= DUALITY_TOLERANCE,
        random_ok: margin >= -tol,
        violations,
    })
}
