use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{write_json, write_text};
use crate::error::{Error, Result};
use crate::pair::{Gauge, ReflectorPair};
use crate::par::Exec;
use crate::reflector::{export_sampling, GridSpec, HeightField};

/// Sidecar describing a mesh pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshMetadata {
    pub kind: String,
    pub beta: f64,
    pub front_offset: f64,
    pub gauge: Gauge,
    pub first_mesh: String,
    pub second_mesh: String,
    pub first_grid: GridSpec,
    pub second_grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshFiles {
    pub first: PathBuf,
    pub second: PathBuf,
    pub metadata: PathBuf,
}

/// Nodes per axis used when a support is not an evenly spaced tensor grid.
pub const DEFAULT_MESH_NODES: usize = 65;

/// Sampling grids over the source and target supports. With `nodes` given,
/// each grid has that many nodes per axis over the bounding box; otherwise
/// a support that is an evenly spaced tensor grid is sampled exactly at its
/// points and any other support gets [`DEFAULT_MESH_NODES`] per axis.
pub fn mesh_grids(pair: &ReflectorPair, nodes: Option<usize>) -> (GridSpec, GridSpec) {
    let grid = |coords: &[f64]| {
        let d = pair.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in coords.chunks(d) {
            for k in 0..d {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        match nodes {
            Some(c) => GridSpec::covering(lo, hi, c),
            None => match tensor_counts(coords, d) {
                Some(counts) => GridSpec { lo, hi, counts },
                None => GridSpec::covering(lo, hi, DEFAULT_MESH_NODES),
            },
        }
    };
    (grid(&pair.source_coords), grid(&pair.target_coords))
}

/// Per-axis point counts when `coords` is an evenly spaced tensor grid.
fn tensor_counts(coords: &[f64], d: usize) -> Option<Vec<usize>> {
    let n = coords.len() / d;
    let mut counts = Vec::with_capacity(d);
    for k in 0..d {
        let mut v: Vec<f64> = coords.iter().skip(k).step_by(d).copied().collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        if v.len() > 1 {
            let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
            let even = v.iter().enumerate().all(|(i, x)| (x - (v[0] + i as f64 * h)).abs() <= 1e-9 * h);
            if !even {
                return None;
            }
        }
        counts.push(v.len());
    }
    (counts.iter().product::<usize>() == n).then_some(counts)
}

/// Writes both reflectors of `pair` into `dir` as `<stem>_first` and
/// `<stem>_second` plus a `<stem>_mesh.json` sidecar. Two-dimensional pairs
/// become triangulated height fields (`v x1 x2 height`, 1-based
/// `f a b c`); one-dimensional pairs become `x,height` CSV polylines.
pub fn export_meshes(
    pair: &ReflectorPair,
    front_offset: f64,
    grids: (&GridSpec, &GridSpec),
    dir: &Path,
    stem: &str,
) -> Result<MeshFiles> {
    if pair.dim > 2 {
        return Err(Error::invalid("mesh export supports dimension 1 or 2"));
    }
    let (first, second) = export_sampling(pair, grids.0, grids.1, Exec::Sequential)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let ext = if pair.dim == 1 { "csv" } else { "obj" };
    let first_name = format!("{stem}_first.{ext}");
    let second_name = format!("{stem}_second.{ext}");
    let render = if pair.dim == 1 { polyline } else { height_mesh };
    let files = MeshFiles {
        first: dir.join(&first_name),
        second: dir.join(&second_name),
        metadata: dir.join(format!("{stem}_mesh.json")),
    };
    write_text(&files.first, &render(&first))?;
    write_text(&files.second, &render(&second))?;
    let meta = MeshMetadata {
        kind: pair.kind.label().to_string(),
        beta: pair.beta,
        front_offset,
        gauge: pair.gauge,
        first_mesh: first_name,
        second_mesh: second_name,
        first_grid: grids.0.clone(),
        second_grid: grids.1.clone(),
    };
    write_json(&files.metadata, &meta)?;
    Ok(files)
}

fn polyline(field: &HeightField) -> String {
    let mut out = String::from("x,height\n");
    for (f, h) in field.heights.iter().enumerate() {
        let _ = writeln!(out, "{:e},{:e}", field.grid.node(f)[0], h);
    }
    out
}

fn height_mesh(field: &HeightField) -> String {
    let mut out = String::new();
    for (f, h) in field.heights.iter().enumerate() {
        let x = field.grid.node(f);
        let _ = writeln!(out, "v {:e} {:e} {:e}", x[0], x[1], h);
    }
    let (cx, cy) = (field.grid.counts[0], field.grid.counts[1]);
    let id = |i: usize, j: usize| i + j * cx + 1;
    for j in 0..cy.saturating_sub(1) {
        for i in 0..cx.saturating_sub(1) {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        }
    }
    out
}
