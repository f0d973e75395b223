//! Points in the aperture hyperplane and the paraboloid families whose
//! envelopes form the two reflectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the hyperplane carrying both apertures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_args(x: &[f64], p: &[f64], height: f64, beta: f64) -> Result<()> {
    if x.len() != p.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            p.len()
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive and finite, got {beta}")));
    }
    if !height.is_finite() || x.iter().chain(p).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite paraboloid argument"));
    }
    Ok(())
}

/// Paraboloid with focus `(p, w)` and focal parameter `beta`, opening
/// downward, evaluated at `x`: `(beta² - |x-p|²)/(2 beta) + w`.
pub fn paraboloid_k(x: &[f64], p: &[f64], w: f64, beta: f64) -> Result<f64> {
    check_args(x, p, w, beta)?;
    Ok(k_unchecked(x, p, w, beta))
}

/// Paraboloid with focus `(x, z)` opening upward, evaluated at `p`:
/// `(|x-p|² - beta²)/(2 beta) + z`.
pub fn paraboloid_h(p: &[f64], x: &[f64], z: f64, beta: f64) -> Result<f64> {
    check_args(x, p, z, beta)?;
    Ok(h_unchecked(p, x, z, beta))
}

/// Quadratic transport cost `|x-p|²/2`.
pub fn quadratic_cost(x: &[f64], p: &[f64]) -> Result<f64> {
    if x.len() != p.len() {
        return Err(Error::invalid("dimension mismatch"));
    }
    let c = 0.5 * dist2(x, p);
    if !c.is_finite() {
        return Err(Error::invalid("non-finite cost"));
    }
    Ok(c)
}

#[inline]
pub(crate) fn k_unchecked(x: &[f64], p: &[f64], w: f64, beta: f64) -> f64 {
    (beta * beta - dist2(x, p)) / (2.0 * beta) + w
}

#[inline]
pub(crate) fn h_unchecked(p: &[f64], x: &[f64], z: f64, beta: f64) -> f64 {
    (dist2(x, p) - beta * beta) / (2.0 * beta) + z
}

/// Right-hand side of the admissibility inequality `ζ - ω ≥ (β² - r²)/(2β)`.
#[inline]
pub(crate) fn admissibility_bound(x: &[f64], p: &[f64], beta: f64) -> f64 {
    (beta * beta - dist2(x, p)) / (2.0 * beta)
}

/// Angle between two nonzero vectors, accurate near 0 and pi.
pub(crate) fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k_vertex_and_rim() {
        assert_eq!(paraboloid_k(&[0.3, 0.1], &[0.3, 0.1], 0.0, 2.0).unwrap(), 1.0);
        assert_eq!(paraboloid_k(&[3.0, 4.0], &[0.0, 0.0], 0.0, 5.0).unwrap(), 0.0);
        assert_eq!(paraboloid_k(&[1.0, 0.0], &[0.0, 0.0], 0.5, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn h_vertex_and_rim() {
        assert_eq!(paraboloid_h(&[0.2], &[0.2], 0.0, 2.0).unwrap(), -1.0);
        assert_eq!(paraboloid_h(&[0.0, 0.0], &[3.0, 4.0], 0.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn cost_values() {
        assert_eq!(quadratic_cost(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(quadratic_cost(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 12.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(paraboloid_k(&[f64::NAN], &[0.0], 0.0, 1.0).is_err());
        assert!(paraboloid_k(&[0.0], &[0.0], f64::INFINITY, 1.0).is_err());
        assert!(paraboloid_h(&[0.0], &[0.0], 0.0, 0.0).is_err());
        assert!(paraboloid_h(&[0.0, 1.0], &[0.0], 0.0, 1.0).is_err());
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn angle_is_accurate() {
        assert_eq!(angle_between(&[0.0, -1.0], &[0.0, -2.0]), 0.0);
        let a = angle_between(&[1.0, 0.0], &[0.0, 1.0]);
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    fn pt() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-5.0f64..5.0, 2)
    }

    proptest! {
        #[test]
        fn k_and_h_are_negatives(x in pt(), p in pt(), w in -3.0f64..3.0, beta in 0.1f64..4.0) {
            let k = paraboloid_k(&x, &p, w, beta).unwrap();
            let h = paraboloid_h(&p, &x, -w, beta).unwrap();
            prop_assert!((k + h).abs() <= 1e-12 * (1.0 + k.abs()));
        }

        #[test]
        fn admissibility_forms_agree(x in pt(), p in pt(), z in -3.0f64..3.0, w in -3.0f64..3.0, beta in 0.1f64..4.0) {
            let direct = z - w - admissibility_bound(&x, &p, beta);
            let via_k = z - paraboloid_k(&x, &p, w, beta).unwrap();
            let via_h = paraboloid_h(&p, &x, z, beta).unwrap() - w;
            let tol = 1e-12 * (1.0 + direct.abs() + x.iter().chain(&p).map(|v| v * v).sum::<f64>() / beta);
            prop_assume!(direct.abs() > tol);
            prop_assert_eq!(direct > 0.0, via_k > 0.0);
            prop_assert_eq!(direct > 0.0, via_h > 0.0);
        }

        #[test]
        fn cost_symmetric(x in pt(), p in pt()) {
            prop_assert_eq!(quadratic_cost(&x, &p).unwrap(), quadratic_cost(&p, &x).unwrap());
        }
    }
}
