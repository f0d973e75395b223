use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// One nonzero entry of a coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// Sparse coupling between source and target points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    /// Total quadratic cost `Σ γ_ij |x_i - p_j|² / 2`.
    pub cost: f64,
}

impl TransportPlan {
    /// Builds a plan and evaluates its quadratic cost on `spec`.
    pub fn new(entries: Vec<PlanEntry>, spec: &ProblemSpec) -> Result<Self> {
        let (m, n) = (spec.source.len(), spec.target.len());
        for e in &entries {
            if e.source >= m || e.target >= n {
                return Err(Error::invalid(format!(
                    "plan entry ({}, {}) out of range",
                    e.source, e.target
                )));
            }
            if !(e.mass.is_finite() && e.mass >= 0.0) {
                return Err(Error::invalid("plan masses must be finite and nonnegative"));
            }
        }
        let cost = quadratic_cost_of(&entries, spec);
        Ok(TransportPlan { entries, cost })
    }

    pub fn row_sums(&self, m: usize) -> Vec<f64> {
        let mut r = vec![0.0; m];
        for e in &self.entries {
            r[e.source] += e.mass;
        }
        r
    }

    pub fn col_sums(&self, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n];
        for e in &self.entries {
            c[e.target] += e.mass;
        }
        c
    }

    /// Largest relative marginal deviation `max |sum - weight| / total mass`.
    pub fn marginal_error(&self, spec: &ProblemSpec) -> f64 {
        let m = spec.mass();
        let rows = self.row_sums(spec.source.len());
        let cols = self.col_sums(spec.target.len());
        let r = rows
            .iter()
            .zip(spec.source.weights())
            .map(|(s, w)| (s - w).abs())
            .fold(0.0, f64::max);
        let c = cols
            .iter()
            .zip(spec.target.weights())
            .map(|(s, w)| (s - w).abs())
            .fold(0.0, f64::max);
        r.max(c) / m
    }

    /// Dense `m x n` matrix view.
    pub fn to_dense(&self, m: usize, n: usize) -> Vec<f64> {
        let mut d = vec![0.0; m * n];
        for e in &self.entries {
            d[e.source * n + e.target] += e.mass;
        }
        d
    }
}

pub(crate) fn quadratic_cost_of(entries: &[PlanEntry], spec: &ProblemSpec) -> f64 {
    entries
        .iter()
        .map(|e| {
            e.mass * 0.5 * crate::geometry::dist2(spec.source.point(e.source), spec.target.point(e.target))
        })
        .sum()
}
