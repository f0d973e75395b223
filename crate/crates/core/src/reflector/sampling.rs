use serde::{Deserialize, Serialize};

use super::surface::{eval_first, eval_second};
use crate::error::{Error, Result};
use crate::pair::ReflectorPair;
use crate::par::{map_indices, Exec};

/// Rectangular sampling grid: `counts[k]` nodes from `lo[k]` to `hi[k]`
/// inclusive along axis `k` (a single node sits at `lo`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridSpec {
    /// Grid with `count` nodes per axis over the given bounding box.
    pub fn covering(lo: Vec<f64>, hi: Vec<f64>, count: usize) -> Self {
        let counts = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| if a == b { 1 } else { count })
            .collect();
        GridSpec { lo, hi, counts }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lo.len();
        if d == 0 || self.hi.len() != d || self.counts.len() != d {
            return Err(Error::invalid("grid bounds and counts must share one nonzero dimension"));
        }
        for k in 0..d {
            let (a, b, c) = (self.lo[k], self.hi[k], self.counts[k]);
            if !(a.is_finite() && b.is_finite()) || c == 0 || b < a || (c > 1 && a == b) {
                return Err(Error::invalid(format!("degenerate grid along axis {k}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of node `idx` along axis `k`.
    pub fn coord(&self, k: usize, idx: usize) -> f64 {
        let c = self.counts[k];
        if c == 1 {
            return self.lo[k];
        }
        self.lo[k] + (self.hi[k] - self.lo[k]) * (idx as f64 / (c - 1) as f64)
    }

    /// Node `flat` in first-axis-fastest order.
    pub fn node(&self, mut flat: usize) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.counts.len());
        for (k, &c) in self.counts.iter().enumerate() {
            x.push(self.coord(k, flat % c));
            flat /= c;
        }
        x
    }
}

/// Heights sampled on a [`GridSpec`], first axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightField {
    pub grid: GridSpec,
    pub heights: Vec<f64>,
}

/// Dense samples of both reflectors: the first on `first_grid`, the second
/// on `second_grid`.
pub fn export_sampling(
    pair: &ReflectorPair,
    first_grid: &GridSpec,
    second_grid: &GridSpec,
    exec: Exec,
) -> Result<(HeightField, HeightField)> {
    for g in [first_grid, second_grid] {
        g.validate()?;
        if g.lo.len() != pair.dim {
            return Err(Error::invalid("grid dimension does not match the pair"));
        }
    }
    let first = map_indices(exec, first_grid.len(), |f| eval_first(&first_grid.node(f), pair));
    let second = map_indices(exec, second_grid.len(), |f| eval_second(&second_grid.node(f), pair));
    Ok((
        HeightField {
            grid: first_grid.clone(),
            heights: first,
        },
        HeightField {
            grid: second_grid.clone(),
            heights: second,
        },
    ))
}
