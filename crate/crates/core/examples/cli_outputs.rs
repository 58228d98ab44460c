//! Running a configuration programmatically, as the `hpnewton` binary does,
//! and writing the log, mesh, solution, estimator history and SVG plots.
//!
//! Run with `cargo run --release --example cli_outputs [OUT_DIR]`.

use hpnewton::cli::{execute, InitialGuessSpec, RunConfig};
use hpnewton::problem::Builtin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("hpnewton-gl"));
    let mut config = RunConfig::new(Builtin::GinzburgLandau, 1e-4);
    config.guess = InitialGuessSpec::Shock;
    config.newton.residual_tol = 1e-6;
    config.emit.svg = true;
    config.out = out;
    println!("{}", config.to_json());
    let (outcome, files) = execute(&config)?;
    println!("{:?}, estimate {:.2e}", outcome.status, outcome.report.total);
    for path in files.written() {
        println!("wrote {}", path.display());
    }
    Ok(())
}
