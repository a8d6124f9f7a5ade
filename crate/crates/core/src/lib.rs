//! Multi-robot task allocation where each task may be achieved through one of
//! several alternative capability requirements ("variants").
//!
//! The pipeline is: build or [`generate`] a [`Problem`], compile it with
//! [`flatten`] into a [`FlatProblem`] whose candidates are
//! `(coalition, task, variant)` triples, then run one of the [`solvers`].
//!
//! ```
//! use mrta_core::{flatten, motivating_example, solvers};
//!
//! let flat = flatten(&motivating_example());
//! let greedy = solvers::solve_flat_max_util(&flat);
//! let rc = solvers::solve_flat_rc(&flat);
//! assert!(rc.utility() > greedy.utility());
//! assert!(flat.base().validate_solution(&rc.solution).is_ok());
//! ```

pub mod error;
pub mod flatten;
pub mod generate;
mod json;
pub mod model;
pub mod solvers;

pub use error::{Error, Result};
pub use flatten::{flatten, CandidateSet, ConflictGraph, FlatProblem, FlatTask};
pub use generate::{generate, motivating_example, GenParams};
pub use model::{
    Assignment, CapabilityVector, Coalition, CostModel, Problem, Robot, Solution,
    SolutionViolation, Task, TaskConfiguration,
};
pub use solvers::{solve, SolveOptions, SolverKind, SolverResult};
