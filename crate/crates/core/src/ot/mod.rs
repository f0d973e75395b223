//! Discrete transport between the source and target measures: the exact
//! transportation LP, the entropic approximation, and the conversion of
//! dual potentials into reflector heights.

mod centering;
mod cost;
mod reflectors;
mod simplex;
mod sinkhorn;

use serde::{Deserialize, Serialize};

pub use centering::floyd_warshall;
pub use cost::CostMatrix;
pub use reflectors::{
    apply_gauge, c_transform_duals, c_transform_pair, duals_to_reflectors, duals_to_reflectors_raw,
    functional_f, reflectors_to_duals,
};
pub use simplex::PivotRule;

use crate::error::{Error, Result};
use crate::pair::Kind;
use crate::par::Exec;
use crate::plan::{PlanEntry, TransportPlan};
use crate::problem::ProblemSpec;

/// Whether the quadratic cost is minimized (type A) or maximized (type B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    MinCost,
    MaxCost,
}

impl Direction {
    pub fn kind(self) -> Kind {
        match self {
            Direction::MinCost => Kind::TypeA,
            Direction::MaxCost => Kind::TypeB,
        }
    }
}

impl From<Kind> for Direction {
    fn from(k: Kind) -> Self {
        match k {
            Kind::TypeA => Direction::MinCost,
            Kind::TypeB => Direction::MaxCost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[serde(rename = "exact", alias = "exact_lp")]
    ExactLp,
    Entropic,
}

/// Kantorovich potentials. For [`Direction::MinCost`] they satisfy
/// `phi_i + psi_j <= c_ij`; for [`Direction::MaxCost`], `phi_i + psi_j >= c_ij`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPotentials {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl DualPotentials {
    /// `Σ phi_i a_i + Σ psi_j b_j`.
    pub fn objective(&self, spec: &ProblemSpec) -> f64 {
        let s: f64 = self.phi.iter().zip(spec.source.weights()).map(|(p, w)| p * w).sum();
        let t: f64 = self.psi.iter().zip(spec.target.weights()).map(|(p, w)| p * w).sum();
        s + t
    }

    /// Largest violation of the feasibility inequality for `direction`.
    pub fn infeasibility(&self, cost: &CostMatrix, direction: Direction) -> f64 {
        let sign = match direction {
            Direction::MinCost => 1.0,
            Direction::MaxCost => -1.0,
        };
        let mut worst: f64 = 0.0;
        for (i, p) in self.phi.iter().enumerate() {
            for (j, q) in self.psi.iter().enumerate() {
                worst = worst.max(sign * (p + q - cost.get(i, j)));
            }
        }
        worst
    }

    fn negated(self) -> Self {
        DualPotentials {
            phi: self.phi.into_iter().map(|v| -v).collect(),
            psi: self.psi.into_iter().map(|v| -v).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub plan: TransportPlan,
    pub duals: DualPotentials,
    /// Quadratic cost of the plan (the minimum or the maximum).
    pub objective: f64,
    pub iterations: usize,
    pub method: Method,
    pub direction: Direction,
    /// `|objective - Σφa - Σψb|`.
    pub duality_gap: f64,
    /// Entropic runs: whether the marginal tolerance was met.
    pub converged: bool,
    /// Exact runs: whether the duals were centered between support components.
    pub centered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactConfig {
    /// Largest admissible point count on either side.
    pub max_points: usize,
    pub pivot: PivotRule,
    /// Pivot budget; `None` picks a size-dependent default.
    pub max_pivots: Option<usize>,
    /// Largest number of support components for which duals are centered.
    pub centering_limit: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_points: 5000,
            pivot: PivotRule::BlockSearch,
            max_pivots: None,
            centering_limit: 1200,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropicConfig {
    /// Regularization relative to the squared diameter `max |x_i - p_j|²`.
    pub epsilon_rel: f64,
    pub max_iters: usize,
    /// Stop when the row marginal L1 error drops below `tol * mass`.
    pub tol: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for EntropicConfig {
    fn default() -> Self {
        EntropicConfig {
            epsilon_rel: 1e-3,
            max_iters: 20_000,
            tol: 1e-9,
            exec: Exec::default(),
        }
    }
}

/// Plan masses at or below this fraction of the total are rounding residue
/// of degenerate pivots.
const FLOW_EPS: f64 = 1e-14;

/// Exact transportation LP on the quadratic cost of `spec`, which must
/// already be normalized by [`crate::validate_problem`].
pub fn solve_exact(spec: &ProblemSpec, direction: Direction, cfg: &ExactConfig) -> Result<SolveResult> {
    check_size(spec, cfg.max_points)?;
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, cfg.exec);
    solve_exact_with_cost(spec, &cost, direction, cfg)
}

fn check_size(spec: &ProblemSpec, cap: usize) -> Result<()> {
    let (m, n) = (spec.source.len(), spec.target.len());
    if m > cap || n > cap {
        return Err(Error::ProblemTooLarge {
            sources: m,
            targets: n,
            cap,
        });
    }
    Ok(())
}

/// Exact LP with a precomputed cost matrix (`cost[i][j]` for source `i`,
/// target `j`). [`Direction::MaxCost`] negates the matrix and reuses the
/// minimization.
pub fn solve_exact_with_cost(
    spec: &ProblemSpec,
    cost: &CostMatrix,
    direction: Direction,
    cfg: &ExactConfig,
) -> Result<SolveResult> {
    let (m, n) = (spec.source.len(), spec.target.len());
    if cost.rows() != m || cost.cols() != n {
        return Err(Error::invalid("cost matrix shape does not match the problem"));
    }
    check_size(spec, cfg.max_points)?;
    if spec.source.weights().iter().chain(spec.target.weights()).any(|&w| w <= 0.0) {
        return Err(Error::invalid("solve requires a normalized problem without zero weights"));
    }
    let negated;
    let work = match direction {
        Direction::MinCost => cost,
        Direction::MaxCost => {
            negated = cost.negated();
            &negated
        }
    };
    let max_pivots = cfg.max_pivots.unwrap_or(2000 * (m + n) + 10_000);
    let out = simplex::solve(work, spec.source.weights(), spec.target.weights(), cfg.pivot, max_pivots)?;

    let floor = FLOW_EPS * spec.mass();
    let mut entries: Vec<PlanEntry> = out
        .basic
        .iter()
        .filter(|(_, _, f)| *f > floor)
        .map(|&(source, target, mass)| PlanEntry { source, target, mass })
        .collect();
    entries.sort_by_key(|e| (e.source, e.target));
    let support: Vec<(usize, usize)> = entries.iter().map(|e| (e.source, e.target)).collect();

    let (duals, centered) = match centering::centered_duals(work, &support, cfg.centering_limit, cfg.exec) {
        Some((phi, psi)) => (DualPotentials { phi, psi }, true),
        None => {
            let phi = out.potentials[..m].to_vec();
            let psi = out.potentials[m..].iter().map(|p| -p).collect();
            (DualPotentials { phi, psi }, false)
        }
    };
    let work_objective: f64 = entries.iter().map(|e| e.mass * work.get(e.source, e.target)).sum();
    let work_dual = duals.objective(spec);
    let (duals, objective) = match direction {
        Direction::MinCost => (duals, work_objective),
        Direction::MaxCost => (duals.negated(), -work_objective),
    };
    let plan = TransportPlan { entries, cost: objective };
    Ok(SolveResult {
        plan,
        duals,
        objective,
        iterations: out.pivots,
        method: Method::ExactLp,
        direction,
        duality_gap: (work_objective - work_dual).abs(),
        converged: true,
        centered,
    })
}

/// Entropic approximation with log-domain Sinkhorn updates and a plan
/// rounded onto the exact marginals.
pub fn solve_entropic(spec: &ProblemSpec, direction: Direction, cfg: &EntropicConfig) -> Result<SolveResult> {
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, cfg.exec);
    solve_entropic_with_cost(spec, &cost, direction, cfg)
}

pub fn solve_entropic_with_cost(
    spec: &ProblemSpec,
    cost: &CostMatrix,
    direction: Direction,
    cfg: &EntropicConfig,
) -> Result<SolveResult> {
    if !(cfg.epsilon_rel.is_finite() && cfg.epsilon_rel > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if spec.source.weights().iter().chain(spec.target.weights()).any(|&w| w <= 0.0) {
        return Err(Error::invalid("solve requires a normalized problem without zero weights"));
    }
    let (m, n) = (spec.source.len(), spec.target.len());
    let diam2 = 2.0 * cost.max_abs();
    let eps = cfg.epsilon_rel * if diam2 > 0.0 { diam2 } else { 1.0 };
    let negated;
    let work = match direction {
        Direction::MinCost => cost,
        Direction::MaxCost => {
            negated = cost.negated();
            &negated
        }
    };
    let out = sinkhorn::solve(work, spec.source.weights(), spec.target.weights(), eps, cfg.max_iters, cfg.tol, cfg.exec);
    if out.f.iter().chain(&out.g).any(|v| !v.is_finite()) || out.plan.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("Sinkhorn produced non-finite values".into()));
    }
    let mut entries = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let mass = out.plan[i * n + j];
            if mass > 0.0 {
                entries.push(PlanEntry { source: i, target: j, mass });
            }
        }
    }
    let duals = DualPotentials { phi: out.f, psi: out.g };
    let work_objective: f64 = entries.iter().map(|e| e.mass * work.get(e.source, e.target)).sum();
    let gap = (work_objective - duals.objective(spec)).abs();
    let (duals, objective) = match direction {
        Direction::MinCost => (duals, work_objective),
        Direction::MaxCost => (duals.negated(), -work_objective),
    };
    Ok(SolveResult {
        plan: TransportPlan { entries, cost: objective },
        duals,
        objective,
        iterations: out.iterations,
        method: Method::Entropic,
        direction,
        duality_gap: gap,
        converged: out.converged,
        centered: false,
    })
}
