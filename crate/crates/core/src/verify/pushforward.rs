use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::pair::ReflectorPair;
use crate::plan::TransportPlan;
use crate::problem::ProblemSpec;
use crate::reflector::target_index;

/// A partition of the target support into bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Bins {
    labels: Vec<usize>,
    count: usize,
}

impl Bins {
    /// From explicit index sets; every target index must appear exactly once.
    pub fn from_sets(sets: &[Vec<usize>], n_target: usize) -> Result<Self> {
        let mut labels = vec![usize::MAX; n_target];
        for (b, set) in sets.iter().enumerate() {
            for &j in set {
                if j >= n_target {
                    return Err(Error::invalid(format!("bin {b} names target {j} out of range")));
                }
                if labels[j] != usize::MAX {
                    return Err(Error::invalid(format!("target {j} lies in two bins")));
                }
                labels[j] = b;
            }
        }
        if let Some(j) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::invalid(format!("target {j} is in no bin")));
        }
        Ok(Bins {
            labels,
            count: sets.len(),
        })
    }

    pub fn singletons(n_target: usize) -> Self {
        Bins {
            labels: (0..n_target).collect(),
            count: n_target,
        }
    }

    /// `per_axis` equal bins per axis over the bounding box of `target`.
    pub fn grid(target: &DiscreteMeasure, per_axis: usize) -> Self {
        let per_axis = per_axis.max(1);
        let (lo, hi) = target.bounding_box();
        let labels = target
            .points()
            .map(|p| {
                let mut label = 0;
                for k in (0..p.len()).rev() {
                    let w = hi[k] - lo[k];
                    let c = if w > 0.0 {
                        (((p[k] - lo[k]) / w * per_axis as f64) as usize).min(per_axis - 1)
                    } else {
                        0
                    };
                    label = label * per_axis + c;
                }
                label
            })
            .collect();
        Bins {
            labels,
            count: per_axis.pow(target.dim() as u32),
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn label(&self, j: usize) -> usize {
        self.labels[j]
    }
}

/// L1 discrepancies between pushed-forward and prescribed bin masses, as
/// fractions of the total mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PushforwardCheck {
    /// Mass routed by the plan (splitting at multivalued points).
    pub plan_based: Option<f64>,
    /// Mass routed whole along the single-valued map.
    pub map_based: f64,
}

pub fn check_pushforward(
    pair: &ReflectorPair,
    spec: &ProblemSpec,
    bins: &Bins,
    plan: Option<&TransportPlan>,
) -> Result<PushforwardCheck> {
    if bins.labels.len() != spec.target.len() {
        return Err(Error::invalid("bins do not partition the target support"));
    }
    if !pair.matches(spec) {
        return Err(Error::invalid("pair supports differ from the problem"));
    }
    let mass = spec.mass();
    let mut prescribed = vec![0.0; bins.count];
    for (j, w) in spec.target.weights().iter().enumerate() {
        prescribed[bins.labels[j]] += w;
    }
    let l1 = |got: &[f64]| got.iter().zip(&prescribed).map(|(a, b)| (a - b).abs()).sum::<f64>() / mass;

    let mut mapped = vec![0.0; bins.count];
    for i in 0..pair.n_source() {
        let j = target_index(pair.source_point(i), pair);
        mapped[bins.labels[j]] += spec.source.weight(i);
    }
    let plan_based = plan.map(|p| {
        let mut routed = vec![0.0; bins.count];
        for e in &p.entries {
            routed[bins.labels[e.target]] += e.mass;
        }
        l1(&routed)
    });
    Ok(PushforwardCheck {
        plan_based,
        map_based: l1(&mapped),
    })
}
