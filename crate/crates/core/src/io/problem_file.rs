use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_json, read_text, write_json};
use crate::density::{SampledDensity, SyntheticProblem};
use crate::design::DesignSettings;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::ot::{EntropicConfig, ExactConfig, Method, PivotRule};
use crate::pair::{Gauge, Kind};
use crate::problem::{validate_problem, Normalization, ProblemSpec, DEFAULT_MASS_TOLERANCE};

pub const PROBLEM_FORMAT_VERSION: u32 = 1;

/// On-disk problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format_version: u32,
    pub dimension: usize,
    pub beta: f64,
    /// Front offset used in reports and meshes; defaults to `beta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    pub source: MeasureBlock,
    pub target: MeasureBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    /// Closed-form model the measures were sampled from, used for
    /// refinement studies when the blocks themselves are plain points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<SyntheticProblem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureBlock {
    Grid(GridBlock),
    Points(Vec<PointEntry>),
    Pgm(PgmBlock),
    Analytic(SampledDensity),
}

/// Cell intensities on a regular grid. `origin` is the lower corner;
/// `rows[r][c]` is the cell whose center is
/// `origin + ((c + 1/2) * spacing[0], (r + 1/2) * spacing[1])`. In one
/// dimension there is a single row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub coords: Vec<f64>,
    pub weight: f64,
}

/// Grayscale PGM image (8 or 16 bit). The top image row has the largest
/// second coordinate. Pixel values map linearly to `[0, 1]`, then to the
/// power `gamma` when given. Relative paths are resolved against the
/// directory of the problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PgmBlock {
    pub path: PathBuf,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeSelection {
    A,
    B,
    #[serde(rename = "both")]
    Both,
}

impl TypeSelection {
    pub fn kinds(self) -> Vec<Kind> {
        match self {
            TypeSelection::A => vec![Kind::TypeA],
            TypeSelection::B => vec![Kind::TypeB],
            TypeSelection::Both => vec![Kind::TypeA, Kind::TypeB],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverBlock {
    pub method: Method,
    #[serde(rename = "type")]
    pub kind: TypeSelection,
    /// Entropic regularization relative to the squared diameter.
    pub epsilon: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub max_points: usize,
    pub pivot: PivotRule,
    pub mass_tolerance: f64,
    /// Rescale the target even beyond `mass_tolerance`.
    pub force: bool,
    pub seed: u64,
    pub gauge: Gauge,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let exact = ExactConfig::default();
        let entropic = EntropicConfig::default();
        SolverBlock {
            method: Method::ExactLp,
            kind: TypeSelection::A,
            epsilon: entropic.epsilon_rel,
            max_iters: entropic.max_iters,
            tol: entropic.tol,
            max_points: exact.max_points,
            pivot: exact.pivot,
            mass_tolerance: DEFAULT_MASS_TOLERANCE,
            force: false,
            seed: 0,
            gauge: Gauge::default(),
        }
    }
}

impl SolverBlock {
    pub fn settings(&self) -> DesignSettings {
        let mut s = DesignSettings {
            method: self.method,
            gauge: self.gauge,
            ..Default::default()
        };
        s.exact.max_points = self.max_points;
        s.exact.pivot = self.pivot;
        s.entropic.epsilon_rel = self.epsilon;
        s.entropic.max_iters = self.max_iters;
        s.entropic.tol = self.tol;
        s
    }
}

/// A parsed and validated problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProblem {
    pub file: ProblemFile,
    pub spec: ProblemSpec,
    pub norm: Normalization,
    pub d: f64,
    /// Analytic model: the explicit `model` field, or both blocks when
    /// both are analytic.
    pub model: Option<SyntheticProblem>,
}

impl ProblemFile {
    /// Points-form document for an already built problem.
    pub fn from_spec(spec: &ProblemSpec, d: Option<f64>, solver: SolverBlock) -> Self {
        let points = |m: &DiscreteMeasure| {
            MeasureBlock::Points(
                (0..m.len())
                    .map(|i| PointEntry {
                        coords: m.point(i).to_vec(),
                        weight: m.weight(i),
                    })
                    .collect(),
            )
        };
        ProblemFile {
            format_version: PROBLEM_FORMAT_VERSION,
            dimension: spec.dim(),
            beta: spec.beta,
            d,
            source: points(&spec.source),
            target: points(&spec.target),
            solver: SolverBlock {
                mass_tolerance: spec.mass_tolerance,
                force: spec.force_balance,
                ..solver
            },
            model: None,
        }
    }

    /// Analytic-form document for a synthetic problem.
    pub fn from_synthetic(problem: &SyntheticProblem) -> Self {
        ProblemFile {
            format_version: PROBLEM_FORMAT_VERSION,
            dimension: problem.source.density.dim(),
            beta: problem.beta,
            d: None,
            source: MeasureBlock::Analytic(problem.source.clone()),
            target: MeasureBlock::Analytic(problem.target.clone()),
            solver: SolverBlock::default(),
            model: None,
        }
    }

    /// Builds and validates the problem. `base` resolves relative image
    /// paths.
    pub fn resolve(&self, path: &Path, base: &Path) -> Result<LoadedProblem> {
        if self.format_version != PROBLEM_FORMAT_VERSION {
            return Err(parse_err(
                path,
                format!("unsupported format_version {}", self.format_version),
            ));
        }
        if self.dimension == 0 {
            return Err(parse_err(path, "dimension must be positive"));
        }
        let source = build_measure(&self.source, self.dimension, path, base, "source")?;
        let target = build_measure(&self.target, self.dimension, path, base, "target")?;
        let mut spec = ProblemSpec::new(source, target, self.beta);
        spec.mass_tolerance = self.solver.mass_tolerance;
        spec.force_balance = self.solver.force;
        if let (MeasureBlock::Analytic(s), MeasureBlock::Analytic(t)) = (&self.source, &self.target) {
            if !spec.force_balance {
                let model = SyntheticProblem {
                    beta: self.beta,
                    source: s.clone(),
                    target: t.clone(),
                };
                model.check_balance(spec.mass_tolerance)?;
                spec.force_balance = true;
            }
        }
        let (spec, norm) = validate_problem(&spec)?;
        let d = self.d.unwrap_or(self.beta);
        if !d.is_finite() {
            return Err(Error::invalid("front offset d must be finite"));
        }
        let model = self.model.clone().or_else(|| match (&self.source, &self.target) {
            (MeasureBlock::Analytic(s), MeasureBlock::Analytic(t)) => Some(SyntheticProblem {
                beta: self.beta,
                source: s.clone(),
                target: t.clone(),
            }),
            _ => None,
        });
        Ok(LoadedProblem {
            file: self.clone(),
            spec,
            norm,
            d,
            model,
        })
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn build_measure(block: &MeasureBlock, dim: usize, path: &Path, base: &Path, side: &str) -> Result<DiscreteMeasure> {
    let check_dim = |what: &str, len: usize| {
        if len != dim {
            Err(parse_err(
                path,
                format!("{side}.{what} has length {len}, expected dimension {dim}"),
            ))
        } else {
            Ok(())
        }
    };
    match block {
        MeasureBlock::Points(points) => {
            let mut coords = Vec::with_capacity(points.len() * dim);
            let mut weights = Vec::with_capacity(points.len());
            for (k, p) in points.iter().enumerate() {
                check_dim(&format!("points[{k}].coords"), p.coords.len())?;
                coords.extend_from_slice(&p.coords);
                weights.push(p.weight);
            }
            DiscreteMeasure::from_flat(dim, coords, weights)
        }
        MeasureBlock::Grid(g) => {
            check_dim("origin", g.origin.len())?;
            check_dim("spacing", g.spacing.len())?;
            if dim > 2 {
                return Err(parse_err(path, format!("{side}.grid supports dimension 1 or 2")));
            }
            if dim == 1 && g.rows.len() != 1 {
                return Err(parse_err(path, format!("{side}.grid in dimension 1 needs exactly one row")));
            }
            grid_measure(&g.origin, &g.spacing, &g.rows, |r| r)
        }
        MeasureBlock::Pgm(p) => {
            check_dim("origin", p.origin.len())?;
            check_dim("spacing", p.spacing.len())?;
            if dim != 2 {
                return Err(parse_err(path, format!("{side}.pgm requires dimension 2")));
            }
            let rows = read_pgm(&base.join(&p.path), p.gamma)?;
            let n = rows.len();
            grid_measure(&p.origin, &p.spacing, &rows, |r| n - 1 - r)
        }
        MeasureBlock::Analytic(s) => {
            check_dim("density bounds", s.density.dim())?;
            check_dim("cells", s.cells.len())?;
            s.sample()
        }
    }
}

/// Cell-center sampling of a row-major intensity table; `row_pos` maps a
/// table row to its position along the second axis.
fn grid_measure(
    origin: &[f64],
    spacing: &[f64],
    rows: &[Vec<f64>],
    row_pos: impl Fn(usize) -> usize,
) -> Result<DiscreteMeasure> {
    if spacing.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::invalid("grid spacing must be positive"));
    }
    if origin.iter().any(|o| !o.is_finite()) {
        return Err(Error::invalid("grid origin must be finite"));
    }
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::invalid("grid rows must be nonempty and of equal length"));
    }
    let dim = origin.len();
    let cell: f64 = spacing.iter().product();
    let mut coords = Vec::with_capacity(rows.len() * cols * dim);
    let mut weights = Vec::with_capacity(rows.len() * cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("negative or non-finite intensity {v} at row {r}, column {c}")));
            }
            coords.push(origin[0] + (c as f64 + 0.5) * spacing[0]);
            if dim == 2 {
                coords.push(origin[1] + (row_pos(r) as f64 + 0.5) * spacing[1]);
            }
            weights.push(v * cell);
        }
    }
    DiscreteMeasure::from_flat(dim, coords, weights)
}

fn read_pgm(path: &Path, gamma: Option<f64>) -> Result<Vec<Vec<f64>>> {
    if let Some(g) = gamma {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::invalid("pgm gamma must be positive"));
        }
    }
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = image::load_from_memory_with_format(&bytes, image::ImageFormat::Pnm).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let values: Vec<f64> = match img {
        image::DynamicImage::ImageLuma8(buf) => buf.into_raw().into_iter().map(|v| v as f64 / 255.0).collect(),
        image::DynamicImage::ImageLuma16(buf) => buf.into_raw().into_iter().map(|v| v as f64 / 65535.0).collect(),
        _ => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: "expected a grayscale image".into(),
            })
        }
    };
    let g = gamma.unwrap_or(1.0);
    Ok(values
        .chunks(w)
        .take(h)
        .map(|row| row.iter().map(|&v| if g == 1.0 { v } else { v.powf(g) }).collect())
        .collect())
}

pub fn parse_problem(text: &str, path: &Path) -> Result<ProblemFile> {
    parse_json(path, text)
}

/// Reads, builds and validates a problem file.
pub fn load_problem_file(path: &Path) -> Result<LoadedProblem> {
    let text = read_text(path)?;
    let file = parse_problem(&text, path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.resolve(path, base)
}

pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    Ok(load_problem_file(path)?.spec)
}

/// Writes `spec` in points form; [`load_problem`] reads it back unchanged
/// when `spec` is already validated.
pub fn write_problem(spec: &ProblemSpec, path: &Path) -> Result<()> {
    write_json(path, &ProblemFile::from_spec(spec, None, SolverBlock::default()))
}
