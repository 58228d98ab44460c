//! Machine-readable run outputs.
//!
//! Floats are written with 17 significant digits so that identical runs give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::adapt::{RunLog, RunOutcome};
use crate::error::{Error, Result};
use crate::mesh::{FemFunction, HpMesh};

use super::svg::{mesh_svg, residual_svg};
use super::RunConfig;

/// Sample points per element in `solution.csv`, both endpoints included.
pub const SAMPLES_PER_ELEMENT: usize = 10;

/// Paths of the files written by [`emit_outputs`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputFiles {
    pub config: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub mesh: Option<PathBuf>,
    pub solution: Option<PathBuf>,
    pub estimator: Option<PathBuf>,
    pub residual_svg: Option<PathBuf>,
    pub mesh_svg: Option<PathBuf>,
}

impl OutputFiles {
    pub fn written(&self) -> Vec<&PathBuf> {
        [
            &self.config,
            &self.log,
            &self.mesh,
            &self.solution,
            &self.estimator,
            &self.residual_svg,
            &self.mesh_svg,
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

/// `{:.16e}` formatting, valid as a JSON number; non-finite values become
/// `null`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn json_str<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("enum serializes to a string")
}

/// One JSON object per record. Wall-clock time is left out so the file is
/// reproducible.
pub fn write_run_jsonl(path: &Path, log: &RunLog) -> Result<()> {
    let mut s = String::new();
    for r in log.iter() {
        let _ = writeln!(
            s,
            "{{\"step\":{},\"newton\":{},\"action\":{},\"dt\":{},\"dt_rule\":{},\"n_dof\":{},\"delta\":{},\"sum_eta2\":{},\"total\":{},\"n_enrich\":{},\"n_bisect\":{}}}",
            r.step,
            r.newton,
            json_str(&r.action),
            format_float(r.dt),
            json_str(&r.dt_rule),
            r.n_dof,
            format_float(r.delta),
            format_float(r.sum_eta2),
            format_float(r.total),
            r.n_enrich,
            r.n_bisect,
        );
    }
    write_file(path, &s)
}

/// `j,x_left,x_right,p`, one row per element.
pub fn write_mesh_csv(path: &Path, mesh: &HpMesh) -> Result<()> {
    let mut s = String::from("j,x_left,x_right,p\n");
    for j in 0..mesh.num_elements() {
        let (xl, xr) = mesh.element(j);
        let _ = writeln!(s, "{j},{},{},{}", format_float(xl), format_float(xr), mesh.degree(j));
    }
    write_file(path, &s)
}

/// `x,u` at [`SAMPLES_PER_ELEMENT`] uniform points per element. Shared
/// element endpoints appear twice.
pub fn write_solution_csv(path: &Path, u: &FemFunction) -> Result<()> {
    let mesh = u.mesh();
    let mut s = String::from("x,u\n");
    let last = (SAMPLES_PER_ELEMENT - 1) as f64;
    for j in 0..mesh.num_elements() {
        let (xl, xr) = mesh.element(j);
        for i in 0..SAMPLES_PER_ELEMENT {
            let t = -1.0 + 2.0 * i as f64 / last;
            let x = match i {
                0 => xl,
                _ if i == SAMPLES_PER_ELEMENT - 1 => xr,
                _ => mesh.from_reference(j, t),
            };
            let (v, _) = u.eval_local(j, t);
            let _ = writeln!(s, "{},{}", format_float(x), format_float(v));
        }
    }
    write_file(path, &s)
}

/// `step,n_dof,delta2,sum_eta2,total`, one row per record.
pub fn write_estimator_csv(path: &Path, log: &RunLog) -> Result<()> {
    let mut s = String::from("step,n_dof,delta2,sum_eta2,total\n");
    for r in log.iter() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.step,
            r.n_dof,
            format_float(r.delta * r.delta),
            format_float(r.sum_eta2),
            format_float(r.total)
        );
    }
    write_file(path, &s)
}

/// Writes the configuration and the enabled outputs into `config.out`,
/// creating the directory if needed.
pub fn emit_outputs(outcome: &RunOutcome, config: &RunConfig) -> Result<OutputFiles> {
    let dir = &config.out;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = OutputFiles::default();
    let path = dir.join("config.json");
    config.save(&path)?;
    files.config = Some(path);
    if config.emit.log {
        let path = dir.join("run.jsonl");
        write_run_jsonl(&path, &outcome.log)?;
        files.log = Some(path);
    }
    if config.emit.mesh {
        let path = dir.join("mesh.csv");
        write_mesh_csv(&path, outcome.mesh())?;
        files.mesh = Some(path);
    }
    if config.emit.solution {
        let path = dir.join("solution.csv");
        write_solution_csv(&path, &outcome.solution)?;
        files.solution = Some(path);
    }
    if config.emit.estimator {
        let path = dir.join("estimator.csv");
        write_estimator_csv(&path, &outcome.log)?;
        files.estimator = Some(path);
    }
    if config.emit.svg {
        let path = dir.join("residual.svg");
        write_file(&path, &residual_svg(&outcome.log))?;
        files.residual_svg = Some(path);
        let path = dir.join("mesh.svg");
        write_file(&path, &mesh_svg(outcome.mesh()))?;
        files.mesh_svg = Some(path);
    }
    Ok(files)
}
