//! Semilinear two-point problems `-eps u'' = f(x, u)` on `(a, b)` with
//! Dirichlet data, and the built-in benchmark problems.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `-eps u'' = f(x, u)` on `(a, b)`, `u(a) = bc_left`, `u(b) = bc_right`.
///
/// `df` must be the partial derivative of `f` with respect to `u`.
#[derive(Clone)]
pub struct SemilinearProblem {
    epsilon: f64,
    a: f64,
    b: f64,
    bc_left: f64,
    bc_right: f64,
    f: ScalarField,
    df: ScalarField,
}

impl fmt::Debug for SemilinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemilinearProblem")
            .field("epsilon", &self.epsilon)
            .field("domain", &(self.a, self.b))
            .field("bc", &(self.bc_left, self.bc_right))
            .finish_non_exhaustive()
    }
}

impl SemilinearProblem {
    pub fn new<F, DF>(epsilon: f64, a: f64, b: f64, f: F, df: DF) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        DF: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(a < b) {
            return Err(Error::invalid(format!("need a < b, got a={a}, b={b}")));
        }
        Ok(SemilinearProblem {
            epsilon,
            a,
            b,
            bc_left: 0.0,
            bc_right: 0.0,
            f: Arc::new(f),
            df: Arc::new(df),
        })
    }

    pub fn with_boundary_values(mut self, left: f64, right: f64) -> Self {
        self.bc_left = left;
        self.bc_right = right;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn boundary_values(&self) -> (f64, f64) {
        (self.bc_left, self.bc_right)
    }

    #[inline]
    pub fn f(&self, x: f64, u: f64) -> f64 {
        (self.f)(x, u)
    }

    #[inline]
    pub fn df(&self, x: f64, u: f64) -> f64 {
        (self.df)(x, u)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.bc_left == 0.0 && self.bc_right == 0.0
    }
}

/// The affine function matching the Dirichlet data at both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLift {
    pub a: f64,
    pub b: f64,
    pub left: f64,
    pub right: f64,
}

impl BoundaryLift {
    pub fn slope(&self) -> f64 {
        (self.right - self.left) / (self.b - self.a)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.left + self.slope() * (x - self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.left == 0.0 && self.right == 0.0
    }
}

/// Splits `u = w + l` with `l` the affine lift, returning the problem for
/// `w` (zero boundary values) and `l`.
///
/// Since `l'' = 0`, the transformed data are `f~(x, w) = f(x, w + l(x))` and
/// `df~(x, w) = df(x, w + l(x))`.
pub fn homogenize(p: &SemilinearProblem) -> (SemilinearProblem, BoundaryLift) {
    let lift = BoundaryLift {
        a: p.a,
        b: p.b,
        left: p.bc_left,
        right: p.bc_right,
    };
    if lift.is_zero() {
        return (p.clone(), lift);
    }
    let f = Arc::clone(&p.f);
    let df = Arc::clone(&p.df);
    let hom = SemilinearProblem {
        epsilon: p.epsilon,
        a: p.a,
        b: p.b,
        bc_left: 0.0,
        bc_right: 0.0,
        f: Arc::new(move |x, w| f(x, w + lift.value(x))),
        df: Arc::new(move |x, w| df(x, w + lift.value(x))),
    };
    (hom, lift)
}

/// Built-in benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    /// `-u'' = exp(u + 1)` on (0, 1), zero boundary values. Always `eps = 1`.
    Bratu,
    /// `-eps u'' = u - u^3` on (0, 1), zero boundary values.
    GinzburgLandau,
    /// `-eps u'' = u - u^2` on (0, 1), `u(0) = alpha`, `u(1) = beta`.
    Fisher { alpha: f64, beta: f64 },
}

impl Builtin {
    /// Instantiates the problem. `epsilon` is validated for every problem
    /// but only used by Ginzburg-Landau and Fisher.
    pub fn problem(self, epsilon: f64) -> Result<SemilinearProblem> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        match self {
            Builtin::Bratu => {
                SemilinearProblem::new(1.0, 0.0, 1.0, |_, u| (u + 1.0).exp(), |_, u| (u + 1.0).exp())
            }
            Builtin::GinzburgLandau => SemilinearProblem::new(
                epsilon,
                0.0,
                1.0,
                |_, u| u - u * u * u,
                |_, u| 1.0 - 3.0 * u * u,
            ),
            Builtin::Fisher { alpha, beta } => Ok(SemilinearProblem::new(
                epsilon,
                0.0,
                1.0,
                |_, u| u - u * u,
                |_, u| 1.0 - 2.0 * u,
            )?
            .with_boundary_values(alpha, beta)),
        }
    }

    /// Short identifier as accepted by [`FromStr`].
    pub fn id(&self) -> String {
        match self {
            Builtin::Bratu => "bratu".into(),
            Builtin::GinzburgLandau => "gl".into(),
            Builtin::Fisher { alpha, beta } => format!("fisher:{alpha}:{beta}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match (head, rest.as_slice()) {
            ("bratu", []) => Ok(Builtin::Bratu),
            ("gl" | "ginzburg_landau", []) => Ok(Builtin::GinzburgLandau),
            ("fisher", [alpha, beta]) => {
                let parse = |v: &str| {
                    v.parse::<f64>()
                        .map_err(|_| Error::UnknownProblem(s.to_string()))
                };
                Ok(Builtin::Fisher {
                    alpha: parse(alpha)?,
                    beta: parse(beta)?,
                })
            }
            _ => Err(Error::UnknownProblem(s.to_string())),
        }
    }
}

/// Convenience wrapper: `builtin("gl".parse()?, 1e-5)`.
pub fn builtin(name: Builtin, epsilon: f64) -> Result<SemilinearProblem> {
    name.problem(epsilon)
}
