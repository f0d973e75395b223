use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    certify_optimality, check_monge_ampere, check_opl, check_pushforward, check_reflection_law,
    monge_ampere_levels, Bins,
};
use crate::design::DesignSettings;
use crate::density::SyntheticProblem;
use crate::error::Result;
use crate::pair::{Kind, ReflectorPair};
use crate::plan::TransportPlan;
use crate::problem::ProblemSpec;

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Pass thresholds, stored in the report so flags can be recomputed from
/// the document alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub opl: f64,
    /// Applies to the first-surface reflection residual.
    pub reflection: f64,
    pub pushforward: f64,
    pub energy_balance: f64,
    pub certificate_slackness: f64,
    pub certificate_duality: f64,
    /// Residual sequences entirely below this count as converged even if
    /// not monotone.
    pub monge_ampere_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            opl: 1e-9,
            reflection: 1e-9,
            pushforward: 1e-10,
            energy_balance: 1e-12,
            certificate_slackness: 1e-9,
            certificate_duality: 1e-9,
            monge_ampere_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PassFlags {
    pub opl: Option<bool>,
    pub reflection: Option<bool>,
    pub pushforward: Option<bool>,
    pub monge_ampere: Option<bool>,
    pub energy_balance: Option<bool>,
    pub certificate: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomPlanStats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl RandomPlanStats {
    fn from_costs(costs: &[f64]) -> Option<Self> {
        if costs.is_empty() {
            return None;
        }
        Some(RandomPlanStats {
            count: costs.len(),
            min: costs.iter().copied().fold(f64::INFINITY, f64::min),
            max: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: costs.iter().sum::<f64>() / costs.len() as f64,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub method: Option<String>,
    pub kinds: Vec<String>,
    pub beta: Option<f64>,
    pub front_offset: Option<f64>,
    pub rescale_factor: Option<f64>,
    pub seed: Option<u64>,
    pub source_points: Option<usize>,
    pub target_points: Option<usize>,
}

/// Outcome of all checks on one solution. Absent checks are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format_version: u32,
    pub metadata: ReportMetadata,
    pub thresholds: Thresholds,
    pub opl_max_abs_dev: Option<f64>,
    pub reflection_max_angle_residual: Option<f64>,
    pub reflection_first_surface_residual: Option<f64>,
    pub reflection_second_surface_residual: Option<f64>,
    pub pushforward_l1_error: Option<f64>,
    pub pushforward_map_l1_error: Option<f64>,
    pub monge_ampere_residuals: Option<Vec<f64>>,
    pub energy_balance_rel_error: Option<f64>,
    pub cost_a: Option<f64>,
    pub cost_b: Option<f64>,
    pub random_plan_costs: Option<RandomPlanStats>,
    pub certificate_slackness_violation: Option<f64>,
    pub certificate_duality_rel_error: Option<f64>,
    pub certificate_random_ok: Option<bool>,
    pub passed: PassFlags,
    pub all_passed: bool,
}

impl VerificationReport {
    pub fn empty(metadata: ReportMetadata) -> Self {
        VerificationReport {
            format_version: REPORT_FORMAT_VERSION,
            metadata,
            thresholds: Thresholds::default(),
            opl_max_abs_dev: None,
            reflection_max_angle_residual: None,
            reflection_first_surface_residual: None,
            reflection_second_surface_residual: None,
            pushforward_l1_error: None,
            pushforward_map_l1_error: None,
            monge_ampere_residuals: None,
            energy_balance_rel_error: None,
            cost_a: None,
            cost_b: None,
            random_plan_costs: None,
            certificate_slackness_violation: None,
            certificate_duality_rel_error: None,
            certificate_random_ok: None,
            passed: PassFlags::default(),
            all_passed: true,
        }
    }

    /// Recomputes the pass flags from the stored values and thresholds.
    pub fn evaluate(&mut self) {
        let t = self.thresholds;
        let le = |v: Option<f64>, lim: f64| v.map(|x| x.is_finite() && x <= lim);
        let mut p = PassFlags {
            opl: le(self.opl_max_abs_dev, t.opl),
            reflection: le(self.reflection_first_surface_residual, t.reflection),
            pushforward: le(self.pushforward_l1_error, t.pushforward),
            energy_balance: le(self.energy_balance_rel_error, t.energy_balance),
            monge_ampere: self.monge_ampere_residuals.as_ref().map(|r| {
                let below = r.iter().all(|x| x.is_finite() && *x <= t.monge_ampere_floor);
                let monotone = r.windows(2).all(|w| w[1] <= w[0]);
                below || monotone
            }),
            certificate: None,
        };
        if let (Some(s), Some(d)) = (self.certificate_slackness_violation, self.certificate_duality_rel_error) {
            p.certificate = Some(
                s <= t.certificate_slackness
                    && d <= t.certificate_duality
                    && self.certificate_random_ok.unwrap_or(true)
                    && match (self.cost_a, self.cost_b) {
                        (Some(a), Some(b)) => a <= b + 1e-12 * b.abs(),
                        _ => true,
                    },
            );
        }
        self.passed = p;
        self.all_passed = [p.opl, p.reflection, p.pushforward, p.monge_ampere, p.energy_balance, p.certificate]
            .into_iter()
            .flatten()
            .all(|b| b);
    }
}

/// `|Σ I - Σ L| / Σ I`.
pub fn energy_balance_rel_error(spec: &ProblemSpec) -> f64 {
    (spec.source.total_mass() - spec.target.total_mass()).abs() / spec.source.total_mass()
}

/// Options for [`verify_designs`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub front_offset: f64,
    pub bins_per_axis: usize,
    pub random_plans: usize,
    pub seed: u64,
    /// Analytic problem and number of levels for the Monge-Ampère sweep.
    pub monge_ampere: Option<(SyntheticProblem, usize)>,
    pub settings: DesignSettings,
}

impl VerifyOptions {
    pub fn new(beta: f64) -> Self {
        VerifyOptions {
            front_offset: crate::reflector::default_front_offset(beta),
            bins_per_axis: 4,
            random_plans: 100,
            seed: 0,
            monge_ampere: None,
            settings: DesignSettings::default(),
        }
    }
}

/// Runs every check on the given pairs (each with its plan, when known) and
/// aggregates the worst values into one report.
pub fn verify_designs(
    spec: &ProblemSpec,
    designs: &[(&ReflectorPair, Option<&TransportPlan>)],
    opts: &VerifyOptions,
    mut metadata: ReportMetadata,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    metadata.seed = Some(opts.seed);
    metadata.front_offset = Some(opts.front_offset);
    metadata.beta = Some(spec.beta);
    metadata.source_points = Some(spec.source.len());
    metadata.target_points = Some(spec.target.len());
    metadata.kinds = designs.iter().map(|(p, _)| p.kind.label().to_string()).collect();
    let mut r = VerificationReport::empty(metadata);
    let worst = |acc: Option<f64>, v: f64| Some(acc.map_or(v, |a: f64| a.max(v)));
    let bins = Bins::grid(&spec.target, opts.bins_per_axis);
    let mut random_costs = Vec::new();

    for &(pair, plan) in designs {
        r.opl_max_abs_dev = worst(r.opl_max_abs_dev, check_opl(pair));
        let refl = check_reflection_law(pair, spec, opts.front_offset)?;
        r.reflection_max_angle_residual = worst(r.reflection_max_angle_residual, refl.max);
        r.reflection_first_surface_residual = worst(r.reflection_first_surface_residual, refl.first_surface);
        r.reflection_second_surface_residual = worst(r.reflection_second_surface_residual, refl.second_surface);
        let push = check_pushforward(pair, spec, &bins, plan)?;
        r.pushforward_map_l1_error = worst(r.pushforward_map_l1_error, push.map_based);
        if let Some(pb) = push.plan_based {
            r.pushforward_l1_error = worst(r.pushforward_l1_error, pb);
        }
        if let Some(plan) = plan {
            match pair.kind {
                Kind::TypeA => r.cost_a = Some(plan.cost),
                Kind::TypeB => r.cost_b = Some(plan.cost),
            }
            let cert = certify_optimality(pair, spec, plan, opts.random_plans, &mut rng)?;
            r.certificate_slackness_violation = worst(r.certificate_slackness_violation, cert.slackness_violation);
            r.certificate_duality_rel_error = worst(r.certificate_duality_rel_error, cert.duality_rel_error);
            r.certificate_random_ok = Some(r.certificate_random_ok.unwrap_or(true) && cert.random_ok);
            random_costs.extend(cert.random_costs);
        }
    }
    r.random_plan_costs = RandomPlanStats::from_costs(&random_costs);
    r.energy_balance_rel_error = Some(energy_balance_rel_error(spec));
    if let Some((problem, levels)) = &opts.monge_ampere {
        let lv = monge_ampere_levels(problem, *levels, &opts.settings)?;
        r.monge_ampere_residuals = Some(check_monge_ampere(&lv, &problem.source.density, &problem.target.density)?);
    }
    r.evaluate();
    Ok(r)
}
