//! End-to-end construction: transport solve, dual conversion, tightening
//! and gauge fixing.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ot::{
    c_transform_duals, duals_to_reflectors, solve_entropic_with_cost, solve_exact_with_cost, CostMatrix,
    Direction, EntropicConfig, ExactConfig, Method, SolveResult,
};
use crate::pair::{Gauge, Kind, ReflectorPair};
use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSettings {
    pub method: Method,
    pub exact: ExactConfig,
    pub entropic: EntropicConfig,
    pub gauge: Gauge,
}

impl Default for DesignSettings {
    fn default() -> Self {
        DesignSettings {
            method: Method::ExactLp,
            exact: ExactConfig::default(),
            entropic: EntropicConfig::default(),
            gauge: Gauge::MinFirstZero,
        }
    }
}

/// A solved reflector system of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub kind: Kind,
    pub solve: SolveResult,
    pub pair: ReflectorPair,
}

pub fn design(spec: &ProblemSpec, kind: Kind, settings: &DesignSettings) -> Result<Design> {
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, settings.exact.exec);
    design_with_cost(spec, &cost, kind, settings)
}

/// Designs from a precomputed quadratic cost matrix of `spec`.
pub fn design_with_cost(
    spec: &ProblemSpec,
    cost: &CostMatrix,
    kind: Kind,
    settings: &DesignSettings,
) -> Result<Design> {
    let direction = Direction::from(kind);
    let solve = match settings.method {
        Method::ExactLp => solve_exact_with_cost(spec, cost, direction, &settings.exact)?,
        Method::Entropic => solve_entropic_with_cost(spec, cost, direction, &settings.entropic)?,
    };
    let duals = match settings.method {
        Method::ExactLp => solve.duals.clone(),
        Method::Entropic => c_transform_duals(&solve.duals, cost, direction),
    };
    let pair = duals_to_reflectors(&duals, spec, direction, settings.gauge)?;
    Ok(Design { kind, solve, pair })
}

/// Type A and type B designs sharing one cost matrix.
pub fn design_both(spec: &ProblemSpec, settings: &DesignSettings) -> Result<(Design, Design)> {
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, settings.exact.exec);
    let a = design_with_cost(spec, &cost, Kind::TypeA, settings)?;
    let b = design_with_cost(spec, &cost, Kind::TypeB, settings)?;
    Ok((a, b))
}
