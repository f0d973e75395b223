//! Canonical demonstration instances.

use std::fmt;
use std::str::FromStr;

use crate::density::{AnalyticDensity, SampledDensity, SyntheticProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demo {
    /// Same uniform square on both sides; flat mirrors.
    Identity,
    /// Uniform square mapped onto a translated copy.
    Shift,
    /// Uniform `[0, 1]` stretched onto uniform `[0, 2]`.
    Stretch1d,
    /// Truncated Gaussian beam flattened onto a uniform square.
    Gaussian2d,
}

impl Demo {
    pub const ALL: [Demo; 4] = [Demo::Identity, Demo::Shift, Demo::Stretch1d, Demo::Gaussian2d];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Identity => "identity",
            Demo::Shift => "shift",
            Demo::Stretch1d => "stretch1d",
            Demo::Gaussian2d => "gaussian2d",
        }
    }

    /// Default cells per axis.
    pub fn default_cells(self) -> usize {
        match self {
            Demo::Stretch1d => 64,
            _ => 8,
        }
    }

    pub fn problem(self) -> SyntheticProblem {
        self.problem_with_cells(self.default_cells())
    }

    /// The instance sampled with `cells` cells per axis on each side.
    pub fn problem_with_cells(self, cells: usize) -> SyntheticProblem {
        let unit2 = || (vec![0.0, 0.0], vec![1.0, 1.0]);
        let uniform = |lo: Vec<f64>, hi: Vec<f64>, value: f64| AnalyticDensity::Uniform { lo, hi, value };
        let sampled = |density: AnalyticDensity| SampledDensity {
            cells: vec![cells; density.dim()],
            density,
        };
        let (source, target) = match self {
            Demo::Identity => {
                let (lo, hi) = unit2();
                (uniform(lo.clone(), hi.clone(), 1.0), uniform(lo, hi, 1.0))
            }
            Demo::Shift => {
                let (lo, hi) = unit2();
                (uniform(lo, hi, 1.0), uniform(vec![0.5, 0.25], vec![1.5, 1.25], 1.0))
            }
            Demo::Stretch1d => (uniform(vec![0.0], vec![1.0], 1.0), uniform(vec![0.0], vec![2.0], 0.5)),
            Demo::Gaussian2d => {
                let (lo, hi) = unit2();
                let g = AnalyticDensity::Gaussian {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    center: vec![0.5, 0.5],
                    sigma: 0.3,
                    amplitude: 1.0,
                };
                let value = g.mass();
                (g, uniform(lo, hi, value))
            }
        };
        SyntheticProblem {
            beta: 1.0,
            source: sampled(source),
            target: sampled(target),
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Demo::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Demo::ALL.iter().map(|d| d.name()).collect();
            Error::invalid(format!("unknown demo {s:?}; available: {}", names.join(", ")))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for d in Demo::ALL {
            assert_eq!(d.name().parse::<Demo>().unwrap(), d);
        }
        assert!("nope".parse::<Demo>().is_err());
    }

    #[test]
    fn demos_are_balanced() {
        for d in Demo::ALL {
            let (spec, norm) = d.problem().to_spec().unwrap();
            assert!((norm.rescale_factor - 1.0).abs() < 1e-2, "{d}");
            assert!((spec.source.total_mass() - spec.target.total_mass()).abs() <= 1e-12 * spec.mass());
        }
    }

    #[test]
    fn identity_has_equal_supports() {
        let (spec, _) = Demo::Identity.problem().to_spec().unwrap();
        assert_eq!(spec.source, spec.target);
        let (shift, _) = Demo::Shift.problem().to_spec().unwrap();
        for (x, p) in shift.source.points().zip(shift.target.points()) {
            assert!((p[0] - x[0] - 0.5).abs() < 1e-15 && (p[1] - x[1] - 0.25).abs() < 1e-15);
        }
    }
}
