use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::admissibility_bound;
use crate::problem::ProblemSpec;

/// Which envelope construction a reflector pair follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// First reflector is the upper envelope of `k` paraboloids, second the
    /// lower envelope of `h` paraboloids; minimizes the transport cost.
    #[serde(rename = "A")]
    TypeA,
    /// Envelopes swapped; maximizes the transport cost.
    #[serde(rename = "B")]
    TypeB,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::TypeA => "A",
            Kind::TypeB => "B",
        }
    }

    /// +1 for type A, -1 for type B: the sign that turns the type B
    /// inequalities into the type A ones.
    pub(crate) fn sign(self) -> f64 {
        match self {
            Kind::TypeA => 1.0,
            Kind::TypeB => -1.0,
        }
    }
}

/// Convention fixing the free additive constant shared by both reflectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// Shift so that the smallest first-reflector height is zero.
    #[default]
    MinFirstZero,
    /// Shift so that the smallest second-reflector height is zero.
    MinSecondZero,
    /// No shift applied.
    Raw,
}

/// Reflector heights sampled on the source (`zeta`) and target (`omega`)
/// support points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectorPair {
    pub dim: usize,
    pub source_coords: Vec<f64>,
    pub target_coords: Vec<f64>,
    pub zeta: Vec<f64>,
    pub omega: Vec<f64>,
    pub beta: f64,
    pub kind: Kind,
    pub gauge: Gauge,
}

/// Slack allowed in the admissibility and tightness checks.
pub const PAIR_TOLERANCE: f64 = 1e-9;

impl ReflectorPair {
    /// Assembles a pair on the supports of `spec`.
    pub fn new(spec: &ProblemSpec, zeta: Vec<f64>, omega: Vec<f64>, kind: Kind, gauge: Gauge) -> Result<Self> {
        if zeta.len() != spec.source.len() || omega.len() != spec.target.len() {
            return Err(Error::invalid("height vectors do not match the supports"));
        }
        if zeta.iter().chain(&omega).any(|v| !v.is_finite()) {
            return Err(Error::invalid("reflector heights must be finite"));
        }
        Ok(ReflectorPair {
            dim: spec.dim(),
            source_coords: spec.source.coords().to_vec(),
            target_coords: spec.target.coords().to_vec(),
            zeta,
            omega,
            beta: spec.beta,
            kind,
            gauge,
        })
    }

    pub fn n_source(&self) -> usize {
        self.zeta.len()
    }

    pub fn n_target(&self) -> usize {
        self.omega.len()
    }

    pub fn source_point(&self, i: usize) -> &[f64] {
        &self.source_coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn target_point(&self, j: usize) -> &[f64] {
        &self.target_coords[j * self.dim..(j + 1) * self.dim]
    }

    /// Checks that the supports stored in the pair are those of `spec`.
    pub fn matches(&self, spec: &ProblemSpec) -> bool {
        self.dim == spec.dim()
            && self.source_coords == spec.source.coords()
            && self.target_coords == spec.target.coords()
    }

    /// Signed slack of the admissibility inequality for `(i, j)`, positive
    /// when strictly admissible (for either kind).
    pub fn slack(&self, i: usize, j: usize) -> f64 {
        let gap = self.zeta[i] - self.omega[j] - admissibility_bound(self.source_point(i), self.target_point(j), self.beta);
        self.kind.sign() * gap
    }

    /// Most negative admissibility slack (0 when none is violated).
    pub fn admissibility_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n_source() {
            for j in 0..self.n_target() {
                worst = worst.min(self.slack(i, j));
            }
        }
        -worst
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility_violation() <= PAIR_TOLERANCE
    }

    /// Largest over rows and columns of the smallest slack in that row or
    /// column; zero for a pair where every point touches the envelope.
    pub fn tightness_defect(&self) -> f64 {
        let (m, n) = (self.n_source(), self.n_target());
        let mut row = vec![f64::INFINITY; m];
        let mut col = vec![f64::INFINITY; n];
        for i in 0..m {
            for j in 0..n {
                let s = self.slack(i, j).abs();
                row[i] = row[i].min(s);
                col[j] = col[j].min(s);
            }
        }
        row.into_iter().chain(col).fold(0.0, f64::max)
    }

    pub fn is_tight(&self) -> bool {
        self.tightness_defect() <= PAIR_TOLERANCE
    }

    /// `sup |x - p| / beta` over support pairs, the Lipschitz constant of
    /// either envelope.
    pub fn lipschitz_constant(&self) -> f64 {
        let mut r2: f64 = 0.0;
        for i in 0..self.n_source() {
            for j in 0..self.n_target() {
                r2 = r2.max(crate::geometry::dist2(self.source_point(i), self.target_point(j)));
            }
        }
        r2.sqrt() / self.beta
    }

    /// Adds `c` to every height of both reflectors.
    pub fn translated(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.zeta.iter_mut().for_each(|z| *z += c);
        out.omega.iter_mut().for_each(|w| *w += c);
        out
    }
}
