//! Fully hp-adaptive Newton-Galerkin solver for one-dimensional semilinear
//! two-point boundary value problems `-eps u'' = f(x, u)` on `(a, b)` with
//! Dirichlet data, aimed at the singularly perturbed regime `eps << 1`.
//!
//! Each iteration takes a damped Newton step with an adaptively predicted
//! step size, discretized by a conforming hp-finite element method. A
//! residual-based a posteriori estimate, robust in `eps`, splits the error
//! into a linearization part and per-element discretization indicators. When
//! the discretization part dominates, the space is refined: elements are
//! marked by Dörfler marking and either enriched or bisected according to a
//! local smoothness test.
//!
//! - [`polybasis`]: Legendre polynomials, Gauss rules, hierarchical shape functions.
//! - [`mesh`]: hp-meshes, finite element functions, refinement and transfer.
//! - [`problem`]: problem definitions and the built-in benchmarks.
//! - [`linearized`]: assembly and banded solution of the linearized problems.
//! - [`estimator`]: a posteriori error indicators.
//! - [`adapt`]: step-size control, marking and the adaptive driver.
//! - [`cli`]: run configurations and output files for the `hpnewton` binary.
//!
//! ```
//! use std::sync::Arc;
//! use hpnewton::adapt::{run, NewtonConfig};
//! use hpnewton::mesh::{uniform_mesh, FemFunction};
//! use hpnewton::problem::Builtin;
//!
//! let problem = Builtin::Bratu.problem(1.0).unwrap();
//! let mesh = Arc::new(uniform_mesh(0.0, 1.0, 10, 1).unwrap());
//! let out = run(&problem, &NewtonConfig::default(), FemFunction::zeros(mesh)).unwrap();
//! assert!(out.converged());
//! assert!(out.report.total <= 1e-8);
//! ```

pub mod adapt;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod linearized;
pub mod mesh;
pub mod polybasis;
pub mod problem;
