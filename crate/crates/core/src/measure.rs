use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Weighted point cloud sampling an intensity distribution on one aperture.
///
/// Coordinates are stored flat (`dim` values per point); weights carry
/// intensity times cell measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    total_mass: f64,
}

impl DiscreteMeasure {
    /// Builds a measure from explicit points and weights.
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let dim = points.first().map(Point::dim).unwrap_or(0);
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::invalid("points of a measure must share one dimension"));
        }
        let coords = points.into_iter().flat_map(Point::into_vec).collect();
        Self::from_flat(dim.max(1), coords, weights)
    }

    /// Builds a measure from flat coordinates (`dim` values per point).
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if coords.len() != dim * weights.len() {
            return Err(Error::invalid("coordinate count does not match weights"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coordinates must be finite"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!("weights must be finite and nonnegative, got {w}")));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::Unsolvable("measure has no positive weight".into()));
        }
        let total_mass = weights.iter().sum();
        Ok(DiscreteMeasure {
            dim,
            coords,
            weights,
            total_mass,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Per-axis bounding box `(lo, hi)` of the support.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        let weights: Vec<f64> = self.weights.iter().map(|w| w * factor).collect();
        let total_mass = weights.iter().sum();
        DiscreteMeasure {
            dim: self.dim,
            coords: self.coords.clone(),
            weights,
            total_mass,
        }
    }

    pub(crate) fn without_zeros(&self) -> Self {
        if self.weights.iter().all(|&w| w > 0.0) {
            return self.clone();
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        for (p, &w) in self.points().zip(&self.weights) {
            if w > 0.0 {
                coords.extend_from_slice(p);
                weights.push(w);
            }
        }
        let total_mass = weights.iter().sum();
        DiscreteMeasure {
            dim: self.dim,
            coords,
            weights,
            total_mass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[f64]]) -> Vec<Point> {
        v.iter().map(|c| Point::new(c.to_vec()).unwrap()).collect()
    }

    #[test]
    fn caches_mass() {
        let m = DiscreteMeasure::new(pts(&[&[0.0], &[1.0]]), vec![0.25, 0.5]).unwrap();
        assert_eq!(m.total_mass(), 0.75);
        assert_eq!(m.point(1), &[1.0]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(DiscreteMeasure::new(pts(&[&[0.0]]), vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(pts(&[&[0.0], &[0.0, 1.0]]), vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(pts(&[&[0.0]]), vec![-1.0]).is_err());
        assert!(matches!(
            DiscreteMeasure::new(pts(&[&[0.0]]), vec![0.0]),
            Err(Error::Unsolvable(_))
        ));
        assert!(matches!(DiscreteMeasure::new(vec![], vec![]), Err(Error::Unsolvable(_))));
    }

    #[test]
    fn drops_zero_weights() {
        let m = DiscreteMeasure::new(pts(&[&[0.0], &[1.0], &[2.0]]), vec![1.0, 0.0, 2.0]).unwrap();
        let d = m.without_zeros();
        assert_eq!(d.len(), 2);
        assert_eq!(d.point(1), &[2.0]);
    }
}
