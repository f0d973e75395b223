//! Closed-form intensity profiles on axis-aligned boxes and their midpoint
//! sampling onto cell grids.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Intensity profile supported on the box `[lo, hi]`, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDensity {
    Uniform {
        lo: Vec<f64>,
        hi: Vec<f64>,
        value: f64,
    },
    /// Separable truncated Gaussian `amplitude * exp(-|x-c|²/(2σ²))`.
    Gaussian {
        lo: Vec<f64>,
        hi: Vec<f64>,
        center: Vec<f64>,
        sigma: f64,
        amplitude: f64,
    },
}

impl AnalyticDensity {
    pub fn lo(&self) -> &[f64] {
        match self {
            AnalyticDensity::Uniform { lo, .. } | AnalyticDensity::Gaussian { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &[f64] {
        match self {
            AnalyticDensity::Uniform { hi, .. } | AnalyticDensity::Gaussian { hi, .. } => hi,
        }
    }

    pub fn dim(&self) -> usize {
        self.lo().len()
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.lo(), self.hi());
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::invalid("density box bounds must have equal nonzero length"));
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(Error::invalid("density box must satisfy lo < hi on every axis"));
        }
        match self {
            AnalyticDensity::Uniform { value, .. } => {
                if !(value.is_finite() && *value >= 0.0) {
                    return Err(Error::invalid("uniform density value must be nonnegative"));
                }
            }
            AnalyticDensity::Gaussian {
                center,
                sigma,
                amplitude,
                ..
            } => {
                if center.len() != lo.len() {
                    return Err(Error::invalid("gaussian center has wrong dimension"));
                }
                if !(sigma.is_finite() && *sigma > 0.0 && amplitude.is_finite() && *amplitude >= 0.0) {
                    return Err(Error::invalid("gaussian needs sigma > 0 and amplitude >= 0"));
                }
            }
        }
        Ok(())
    }

    /// Density value at `x` (zero outside the closed box).
    pub fn eval(&self, x: &[f64]) -> f64 {
        let inside = x
            .iter()
            .zip(self.lo().iter().zip(self.hi()))
            .all(|(v, (a, b))| *v >= *a && *v <= *b);
        if !inside {
            return 0.0;
        }
        match self {
            AnalyticDensity::Uniform { value, .. } => *value,
            AnalyticDensity::Gaussian {
                center,
                sigma,
                amplitude,
                ..
            } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                amplitude * (-r2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    /// Exact integral over the box.
    pub fn mass(&self) -> f64 {
        match self {
            AnalyticDensity::Uniform { lo, hi, value } => {
                value * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>()
            }
            AnalyticDensity::Gaussian {
                lo,
                hi,
                center,
                sigma,
                amplitude,
            } => {
                let s = sigma * std::f64::consts::SQRT_2;
                amplitude
                    * lo.iter()
                        .zip(hi)
                        .zip(center)
                        .map(|((a, b), c)| 0.5 * s * std::f64::consts::PI.sqrt() * (erf((b - c) / s) - erf((a - c) / s)))
                        .product::<f64>()
            }
        }
    }

    /// Midpoint-rule sampling on `cells[k]` equal cells per axis; zero cells
    /// are kept (they are dropped later by validation).
    pub fn sample(&self, cells: &[usize]) -> Result<DiscreteMeasure> {
        self.validate()?;
        if cells.len() != self.dim() || cells.contains(&0) {
            return Err(Error::invalid("cell counts must be positive, one per axis"));
        }
        let (lo, hi) = (self.lo(), self.hi());
        let spacing: Vec<f64> = (0..self.dim()).map(|k| (hi[k] - lo[k]) / cells[k] as f64).collect();
        let cell_measure: f64 = spacing.iter().product();
        let n: usize = cells.iter().product();
        let dim = self.dim();
        let mut coords = Vec::with_capacity(n * dim);
        let mut weights = Vec::with_capacity(n);
        let mut idx = vec![0usize; dim];
        let mut x = vec![0.0; dim];
        for _ in 0..n {
            for k in 0..dim {
                x[k] = lo[k] + (idx[k] as f64 + 0.5) * spacing[k];
            }
            coords.extend_from_slice(&x);
            weights.push(self.eval(&x) * cell_measure);
            // first axis varies fastest
            for k in 0..dim {
                idx[k] += 1;
                if idx[k] < cells[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        DiscreteMeasure::from_flat(dim, coords, weights)
    }
}

/// An analytic density together with the cell grid it is sampled on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDensity {
    pub density: AnalyticDensity,
    pub cells: Vec<usize>,
}

impl SampledDensity {
    pub fn sample(&self) -> Result<DiscreteMeasure> {
        self.density.sample(&self.cells)
    }

    /// Same density on a grid refined `factor` times along every axis.
    pub fn refined(&self, factor: usize) -> Self {
        SampledDensity {
            density: self.density.clone(),
            cells: self.cells.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cell width along each axis.
    pub fn spacing(&self) -> Vec<f64> {
        let (lo, hi) = (self.density.lo(), self.density.hi());
        (0..self.cells.len()).map(|k| (hi[k] - lo[k]) / self.cells[k] as f64).collect()
    }
}

/// A problem whose intensities are known in closed form, so that it can be
/// re-sampled at any resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticProblem {
    pub beta: f64,
    pub source: SampledDensity,
    pub target: SampledDensity,
}

impl SyntheticProblem {
    pub fn refined(&self, factor: usize) -> Self {
        SyntheticProblem {
            beta: self.beta,
            source: self.source.refined(factor),
            target: self.target.refined(factor),
        }
    }

    /// Fails when the exact masses of the two densities differ by more than
    /// `tolerance` (relative).
    pub fn check_balance(&self, tolerance: f64) -> Result<()> {
        self.source.density.validate()?;
        self.target.density.validate()?;
        let (ms, mt) = (self.source.density.mass(), self.target.density.mass());
        let mismatch = (ms - mt).abs() / ms;
        if !(mismatch <= tolerance) {
            return Err(Error::BalanceViolation {
                source_mass: ms,
                target_mass: mt,
                mismatch,
                tolerance,
            });
        }
        Ok(())
    }

    /// Samples both densities and validates the resulting problem. Balance
    /// is checked on the exact masses; the quadrature mismatch of the
    /// samples is always rescaled away.
    pub fn to_spec(&self) -> Result<(crate::problem::ProblemSpec, crate::problem::Normalization)> {
        let mut spec = crate::problem::ProblemSpec::new(self.source.sample()?, self.target.sample()?, self.beta);
        self.check_balance(spec.mass_tolerance)?;
        spec.force_balance = true;
        crate::problem::validate_problem(&spec)
    }
}
