//! Reference-element machinery: Gauss-Legendre quadrature, hierarchical
//! shape functions and local Legendre expansions.

pub mod expansion;
pub mod legendre;
pub mod quadrature;
pub mod shape;

pub use expansion::{legendre_derivative, local_norms, to_legendre, LocalExpansion, LocalNorms};
pub use quadrature::{gauss_rule, QuadRule};
pub use shape::{eval_shape, ShapeEval};
