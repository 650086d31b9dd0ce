//! Exact solver for constrained affine problems over finite mixtures.
//!
//! An instance lists atoms with performance vectors in `[0, inf]`-extended
//! rationals; the goal is a mixture minimizing `W_0` subject to `W_j <= d_j`.
//! Solutions use at most `J + 1` atoms and carry a checkable certificate.

pub mod caratheodory;
pub mod cmdp;
pub mod error;
pub mod exact_lp;
pub mod gen;
pub mod hull;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod pareto_face;
pub mod solver;

pub use error::{Error, LpError, Result};
pub use exact_lp::Rational;
pub use instance::{Atom, ExtReal, Instance, Mixture, PerfVec};
pub use pareto_face::{Certificate, Hyperplane, ProblemValue};
pub use solver::{check_solution, solve, Branch, Check, Solution, SolveOutcome};
