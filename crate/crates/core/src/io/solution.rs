use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::mesh::{export_meshes, mesh_grids};
use super::problem_file::{load_problem_file, LoadedProblem, ProblemFile};
use super::{read_json, write_json};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::ot::{functional_f, Method};
use crate::pair::{Kind, ReflectorPair};
use crate::plan::TransportPlan;

pub const SUMMARY_FILE: &str = "summary.json";
pub const PROBLEM_FILE: &str = "problem.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub kind: Kind,
    /// Quadratic transport cost of the plan.
    pub cost: f64,
    /// `Σ zeta_i I_i - Σ omega_j L_j`.
    pub functional_f: f64,
    /// `(beta/2) M - cost/beta`.
    pub expected_f: f64,
    pub iterations: usize,
    pub duality_gap: f64,
    pub marginal_error: f64,
    pub converged: bool,
    pub centered: bool,
    pub pair_file: String,
    pub plan_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub format_version: u32,
    pub method: Method,
    pub beta: f64,
    pub front_offset: f64,
    pub mass: f64,
    pub rescale_factor: f64,
    pub dropped_source: usize,
    pub dropped_target: usize,
    pub source_points: usize,
    pub target_points: usize,
    pub cost_a: Option<f64>,
    pub cost_b: Option<f64>,
    pub designs: Vec<DesignSummary>,
}

/// A solution directory read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredSolution {
    pub problem: LoadedProblem,
    pub summary: SolveSummary,
    pub designs: Vec<(ReflectorPair, TransportPlan)>,
}

/// Writes the validated problem, every pair and plan, meshes (see
/// [`mesh_grids`] for `mesh_nodes`), and a summary into `dir`.
pub fn write_solution(
    dir: &Path,
    problem: &LoadedProblem,
    designs: &[Design],
    mesh_nodes: Option<usize>,
) -> Result<SolveSummary> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let spec = &problem.spec;
    let mut file = ProblemFile::from_spec(spec, Some(problem.d), problem.file.solver);
    file.model = problem.model.clone();
    write_json(&dir.join(PROBLEM_FILE), &file)?;

    let mut summary = SolveSummary {
        format_version: super::problem_file::PROBLEM_FORMAT_VERSION,
        method: problem.file.solver.method,
        beta: spec.beta,
        front_offset: problem.d,
        mass: spec.mass(),
        rescale_factor: problem.norm.rescale_factor,
        dropped_source: problem.norm.dropped_source,
        dropped_target: problem.norm.dropped_target,
        source_points: spec.source.len(),
        target_points: spec.target.len(),
        cost_a: None,
        cost_b: None,
        designs: Vec::new(),
    };
    for d in designs {
        let label = d.kind.label().to_ascii_lowercase();
        let pair_file = format!("pair_{label}.json");
        let plan_file = format!("plan_{label}.json");
        write_json(&dir.join(&pair_file), &d.pair)?;
        write_json(&dir.join(&plan_file), &d.solve.plan)?;
        if spec.dim() <= 2 {
            let (g1, g2) = mesh_grids(&d.pair, mesh_nodes);
            export_meshes(&d.pair, problem.d, (&g1, &g2), dir, &format!("reflector_{label}"))?;
        }
        let cost = d.solve.plan.cost;
        match d.kind {
            Kind::TypeA => summary.cost_a = Some(cost),
            Kind::TypeB => summary.cost_b = Some(cost),
        }
        summary.designs.push(DesignSummary {
            kind: d.kind,
            cost,
            functional_f: functional_f(&d.pair, spec),
            expected_f: spec.beta / 2.0 * spec.mass() - cost / spec.beta,
            iterations: d.solve.iterations,
            duality_gap: d.solve.duality_gap,
            marginal_error: d.solve.plan.marginal_error(spec),
            converged: d.solve.converged,
            centered: d.solve.centered,
            pair_file,
            plan_file,
        });
    }
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Reads a directory written by [`write_solution`]. Pairs or plans that do
/// not fit the stored problem are reported as parse errors.
pub fn read_solution(dir: &Path) -> Result<StoredSolution> {
    let summary: SolveSummary = read_json(&dir.join(SUMMARY_FILE))?;
    let problem = load_problem_file(&dir.join(PROBLEM_FILE))?;
    let mut designs = Vec::new();
    for ds in &summary.designs {
        let pair_path: PathBuf = dir.join(&ds.pair_file);
        let plan_path: PathBuf = dir.join(&ds.plan_file);
        let pair: ReflectorPair = read_json(&pair_path)?;
        let plan: TransportPlan = read_json(&plan_path)?;
        let corrupt = |path: &Path, msg: &str| Error::Parse {
            path: path.to_path_buf(),
            message: msg.to_string(),
        };
        if !pair.matches(&problem.spec)
            || pair.zeta.len() != pair.n_source()
            || pair.omega.len() != pair.n_target()
            || pair.kind != ds.kind
        {
            return Err(corrupt(&pair_path, "pair does not match the stored problem"));
        }
        if pair.zeta.iter().chain(&pair.omega).any(|v| !v.is_finite()) || !(pair.beta > 0.0) {
            return Err(corrupt(&pair_path, "non-finite heights or beta"));
        }
        let (m, n) = (problem.spec.source.len(), problem.spec.target.len());
        if plan
            .entries
            .iter()
            .any(|e| e.source >= m || e.target >= n || !e.mass.is_finite())
        {
            return Err(corrupt(&plan_path, "plan indices out of range"));
        }
        designs.push((pair, plan));
    }
    Ok(StoredSolution {
        problem,
        summary,
        designs,
    })
}
