use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::pair::{Gauge, Kind, ReflectorPair};
use crate::plan::{PlanEntry, TransportPlan};
use crate::problem::ProblemSpec;
use crate::reflector::eval_first;

/// A random vertex of the transport polytope: the northwest-corner rule
/// applied after shuffling both supports.
pub fn random_feasible_plan<R: Rng + ?Sized>(spec: &ProblemSpec, rng: &mut R) -> Result<TransportPlan> {
    let (m, n) = (spec.source.len(), spec.target.len());
    let mut rows: Vec<usize> = (0..m).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let (mut a, mut b) = (0, 0);
    let mut ra = spec.source.weight(rows[0]);
    let mut rb = spec.target.weight(cols[0]);
    let mut entries = Vec::with_capacity(m + n);
    while a < m && b < n {
        let t = ra.min(rb);
        if t > 0.0 {
            entries.push(PlanEntry {
                source: rows[a],
                target: cols[b],
                mass: t,
            });
        }
        ra -= t;
        rb -= t;
        if ra <= rb {
            a += 1;
            if a < m {
                ra = spec.source.weight(rows[a]);
            }
        } else {
            b += 1;
            if b < n {
                rb = spec.target.weight(cols[b]);
            }
        }
    }
    TransportPlan::new(entries, spec)
}

/// A random admissible pair of the given kind: random second-reflector
/// heights, the matching envelope on the first side, then independent
/// nonnegative offsets that keep admissibility (upward for type A,
/// downward for type B).
pub fn random_admissible_pair<R: Rng + ?Sized>(spec: &ProblemSpec, kind: Kind, rng: &mut R) -> Result<ReflectorPair> {
    let (lo, hi) = spec.source.bounding_box();
    let diam2: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().max(1e-12);
    let scale = spec.beta + diam2 / spec.beta;
    let omega: Vec<f64> = (0..spec.target.len()).map(|_| rng.gen_range(-scale..scale)).collect();
    let zeros = vec![0.0; spec.source.len()];
    let base = ReflectorPair::new(spec, zeros, omega, kind, Gauge::Raw)?;
    let zeta = (0..spec.source.len())
        .map(|i| {
            let env = eval_first(base.source_point(i), &base);
            let bump = if rng.gen_bool(0.5) { rng.gen_range(0.0..scale) } else { 0.0 };
            env + kind.sign() * bump
        })
        .collect();
    Ok(ReflectorPair { zeta, ..base })
}
