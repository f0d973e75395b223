use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Default relative tolerance for the source/target mass balance check.
pub const DEFAULT_MASS_TOLERANCE: f64 = 0.01;

/// Relative mismatches at or below this level are treated as rounding and
/// left untouched, which keeps [`validate_problem`] idempotent.
const ROUNDING_MISMATCH: f64 = 1e-14;

/// A beam shaping problem: input intensity on the source aperture, output
/// intensity on the target aperture and the reduced optical path length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub source: DiscreteMeasure,
    pub target: DiscreteMeasure,
    pub beta: f64,
    pub mass_tolerance: f64,
    /// Rescale the target even when the mismatch exceeds `mass_tolerance`.
    #[serde(default)]
    pub force_balance: bool,
}

impl ProblemSpec {
    pub fn new(source: DiscreteMeasure, target: DiscreteMeasure, beta: f64) -> Self {
        ProblemSpec {
            source,
            target,
            beta,
            mass_tolerance: DEFAULT_MASS_TOLERANCE,
            force_balance: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Total (source) mass.
    pub fn mass(&self) -> f64 {
        self.source.total_mass()
    }
}

/// Record of what [`validate_problem`] changed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Factor applied to every target weight.
    pub rescale_factor: f64,
    pub dropped_source: usize,
    pub dropped_target: usize,
}

/// Checks a problem and returns it with zero-weight points removed and the
/// target rescaled so both masses agree.
pub fn validate_problem(spec: &ProblemSpec) -> Result<(ProblemSpec, Normalization)> {
    if !(spec.beta.is_finite() && spec.beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {}", spec.beta)));
    }
    if !(spec.mass_tolerance.is_finite() && spec.mass_tolerance >= 0.0) {
        return Err(Error::invalid("mass tolerance must be nonnegative"));
    }
    if spec.source.dim() != spec.target.dim() {
        return Err(Error::invalid(format!(
            "source dimension {} differs from target dimension {}",
            spec.source.dim(),
            spec.target.dim()
        )));
    }
    if spec.source.total_mass() <= 0.0 || spec.target.total_mass() <= 0.0 {
        return Err(Error::Unsolvable("empty support".into()));
    }
    let source = spec.source.without_zeros();
    let target = spec.target.without_zeros();
    let (ms, mt) = (source.total_mass(), target.total_mass());
    let mismatch = (ms - mt).abs() / ms;
    if mismatch > spec.mass_tolerance && !spec.force_balance {
        return Err(Error::BalanceViolation {
            source_mass: ms,
            target_mass: mt,
            mismatch,
            tolerance: spec.mass_tolerance,
        });
    }
    let (target, rescale_factor) = if mismatch <= ROUNDING_MISMATCH {
        (target, 1.0)
    } else {
        let f = ms / mt;
        (target.scaled(f), f)
    };
    let norm = Normalization {
        rescale_factor,
        dropped_source: spec.source.len() - source.len(),
        dropped_target: spec.target.len() - target.len(),
    };
    Ok((
        ProblemSpec {
            source,
            target,
            ..spec.clone()
        },
        norm,
    ))
}
