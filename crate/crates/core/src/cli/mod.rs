//! Command-line front end: run configuration, initial guesses and output
//! files.
//!
//! A run is described by a [`RunConfig`], either assembled from flags by
//! [`parse_cli`] or read from a JSON file. [`execute`] performs the run and
//! writes the requested files into the output directory.

mod output;
mod svg;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::Parser;

use crate::adapt::{run, NewtonConfig, RunOutcome};
use crate::error::{Error, Result};
use crate::mesh::{uniform_mesh, FemFunction, HpMesh};
use crate::problem::{Builtin, SemilinearProblem};

pub use output::{
    emit_outputs, format_float, write_estimator_csv, write_mesh_csv, write_run_jsonl,
    write_solution_csv, OutputFiles, SAMPLES_PER_ELEMENT,
};
pub use svg::{mesh_svg, residual_points, residual_svg};

/// Starting function for a run, always evaluated on the initial mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialGuessSpec {
    /// The affine function through the boundary values.
    Zero,
    /// Nodal interpolant of `10 x (1 - x)` on top of the boundary lift.
    Bump,
    /// `-1` on the left half, `+1` on the right half, `0` at the midpoint.
    Shock,
    /// `k` evenly spaced interior nodes set to 1, all others on the boundary
    /// lift.
    Spikes(usize),
    /// Explicit values at all nodes of the initial mesh.
    Nodes(Vec<f64>),
    /// Node values read from a file, separated by whitespace or commas.
    File(PathBuf),
}

impl InitialGuessSpec {
    /// Node values on `mesh` for a problem with the given boundary values.
    pub fn node_values(&self, mesh: &HpMesh, boundary: (f64, f64)) -> Result<Vec<f64>> {
        let nodes = mesh.nodes();
        let n = nodes.len();
        let (a, b) = (mesh.a(), mesh.b());
        let lift = |x: f64| boundary.0 + (boundary.1 - boundary.0) * (x - a) / (b - a);
        let mut values: Vec<f64> = match self {
            InitialGuessSpec::Zero => nodes.iter().map(|&x| lift(x)).collect(),
            InitialGuessSpec::Bump => nodes
                .iter()
                .map(|&x| {
                    let t = (x - a) / (b - a);
                    10.0 * t * (1.0 - t) + lift(x)
                })
                .collect(),
            InitialGuessSpec::Shock => {
                let mid = 0.5 * (a + b);
                nodes
                    .iter()
                    .map(|&x| match x.partial_cmp(&mid) {
                        Some(std::cmp::Ordering::Less) => -1.0,
                        Some(std::cmp::Ordering::Greater) => 1.0,
                        _ => 0.0,
                    })
                    .collect()
            }
            InitialGuessSpec::Spikes(k) => {
                let interior = n.saturating_sub(2);
                if *k == 0 || *k > interior {
                    return Err(Error::invalid(format!(
                        "cannot place {k} spikes on a mesh with {interior} interior nodes"
                    )));
                }
                let mut v: Vec<f64> = nodes.iter().map(|&x| lift(x)).collect();
                let elements = (n - 1) as f64;
                for i in 1..=*k {
                    let idx = (elements * i as f64 / (*k + 1) as f64).round() as usize;
                    v[idx.clamp(1, n - 2)] = 1.0;
                }
                v
            }
            InitialGuessSpec::Nodes(v) => v.clone(),
            InitialGuessSpec::File(path) => read_node_values(path)?,
        };
        if values.len() != n {
            return Err(Error::invalid(format!(
                "initial guess has {} node values, the initial mesh has {n} nodes",
                values.len()
            )));
        }
        values[0] = boundary.0;
        values[n - 1] = boundary.1;
        Ok(values)
    }

    pub fn build(&self, mesh: Arc<HpMesh>, problem: &SemilinearProblem) -> Result<FemFunction> {
        let values = self.node_values(&mesh, problem.boundary_values())?;
        FemFunction::piecewise_linear(mesh, &values)
    }
}

fn read_node_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                message: format!("`{s}` is not a number"),
            })
        })
        .collect()
}

impl fmt::Display for InitialGuessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialGuessSpec::Zero => write!(f, "zero"),
            InitialGuessSpec::Bump => write!(f, "bump"),
            InitialGuessSpec::Shock => write!(f, "shock"),
            InitialGuessSpec::Spikes(k) => write!(f, "spikes:{k}"),
            InitialGuessSpec::Nodes(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "nodes:{}", parts.join(","))
            }
            InitialGuessSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for InitialGuessSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown initial guess `{s}`"));
        match s.split_once(':') {
            None => match s {
                "zero" => Ok(InitialGuessSpec::Zero),
                "bump" => Ok(InitialGuessSpec::Bump),
                "shock" => Ok(InitialGuessSpec::Shock),
                _ => Err(bad()),
            },
            Some(("spikes", k)) => k.parse().map(InitialGuessSpec::Spikes).map_err(|_| bad()),
            Some(("nodes", list)) => list
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(InitialGuessSpec::Nodes),
            Some(("file", path)) if !path.is_empty() => Ok(InitialGuessSpec::File(path.into())),
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for InitialGuessSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for InitialGuessSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitFlags {
    pub log: bool,
    pub mesh: bool,
    pub solution: bool,
    pub estimator: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags {
            log: true,
            mesh: true,
            solution: true,
            estimator: true,
            svg: false,
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Builtin,
    pub epsilon: f64,
    pub newton: NewtonConfig,
    pub elements: usize,
    pub degree: usize,
    pub guess: InitialGuessSpec,
    pub out: PathBuf,
    pub emit: EmitFlags,
}

impl RunConfig {
    pub fn new(problem: Builtin, epsilon: f64) -> Self {
        RunConfig {
            problem,
            epsilon,
            newton: NewtonConfig::default(),
            elements: 10,
            degree: 1,
            guess: InitialGuessSpec::Zero,
            out: PathBuf::from("out"),
            emit: EmitFlags::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad run config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn problem(&self) -> Result<SemilinearProblem> {
        self.problem.problem(self.epsilon)
    }

    pub fn initial_mesh(&self) -> Result<Arc<HpMesh>> {
        let (a, b) = self.problem()?.domain();
        Ok(Arc::new(uniform_mesh(a, b, self.elements, self.degree)?))
    }

    pub fn initial_guess(&self) -> Result<FemFunction> {
        let problem = self.problem()?;
        self.guess.build(self.initial_mesh()?, &problem)
    }
}

fn parse_builtin(s: &str) -> std::result::Result<Builtin, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_guess(s: &str) -> std::result::Result<InitialGuessSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Solve `-eps u'' = f(x, u)` with the hp-adaptive Newton-Galerkin method.
#[derive(Debug, Parser)]
#[command(name = "hpnewton", version)]
struct Cli {
    /// Problem: bratu, gl or fisher:ALPHA:BETA.
    #[arg(long, value_parser = parse_builtin, required_unless_present = "config")]
    problem: Option<Builtin>,
    /// Read the run configuration from a JSON file; other flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Singular perturbation parameter.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    dorfler: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    /// Number of elements of the uniform initial mesh.
    #[arg(long)]
    elements: Option<usize>,
    /// Polynomial degree on the initial mesh.
    #[arg(long)]
    degree: Option<usize>,
    /// zero, bump, shock, spikes:K, nodes:V0,V1,... or file:PATH.
    #[arg(long, value_parser = parse_guess)]
    guess: Option<InitialGuessSpec>,
    #[arg(long)]
    max_dof: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Stop once the total estimate reaches this value.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also write residual.svg and mesh.svg.
    #[arg(long)]
    svg: bool,
}

/// Builds a run configuration from command-line arguments (program name
/// first).
pub fn parse_cli<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| {
            clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
        })?,
        None => RunConfig::new(cli.problem.expect("required by clap"), 1.0),
    };
    if let Some(problem) = cli.problem {
        config.problem = problem;
    }
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut config.epsilon, cli.epsilon);
    set(&mut config.newton.tau, cli.tau);
    set(&mut config.newton.gamma, cli.gamma);
    set(&mut config.newton.theta, cli.theta);
    set(&mut config.newton.dorfler, cli.dorfler);
    set(&mut config.newton.zeta, cli.zeta);
    set(&mut config.newton.residual_tol, cli.tol);
    if let Some(v) = cli.elements {
        config.elements = v;
    }
    if let Some(v) = cli.degree {
        config.degree = v;
    }
    if let Some(v) = cli.max_dof {
        config.newton.max_dof = v;
    }
    if let Some(v) = cli.max_steps {
        config.newton.max_steps = v;
    }
    if let Some(v) = cli.guess {
        config.guess = v;
    }
    if let Some(v) = cli.out {
        config.out = v;
    }
    config.emit.svg |= cli.svg;
    Ok(config)
}

/// Runs the configuration and writes its outputs.
pub fn execute(config: &RunConfig) -> Result<(RunOutcome, OutputFiles)> {
    config.newton.validate()?;
    let problem = config.problem()?;
    let u0 = config.initial_guess()?;
    let outcome = run(&problem, &config.newton, u0)?;
    let files = emit_outputs(&outcome, config)?;
    Ok((outcome, files))
}

/// Entry point of the `hpnewton` binary.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_cli(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&config) {
        Ok((outcome, files)) => {
            let last = outcome.log.last();
            println!(
                "{}: {:?} after {} steps, n_dof = {}, estimate = {:.3e}",
                config.problem.id(),
                outcome.status,
                outcome.log.len(),
                last.map_or(0, |r| r.n_dof),
                outcome.report.total
            );
            for path in files.written() {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
