//! Allocation methods over a [`FlatProblem`].
//!
//! The three greedy heuristics share one loop: score every live candidate,
//! take the best (lowest canonical index among ties), drop it and everything
//! conflicting with it, repeat until nothing is left. They differ only in the
//! score:
//!
//! * [`flat_max_util`]: the candidate's utility;
//! * [`flat_rc`]: utility minus the utility each conflicting candidate would
//!   lose, shared out over that candidate's own conflicts;
//! * [`flat_rca`]: utility minus a per-(robot, flat task) expected loss.
//!
//! [`random_config`] samples one configuration per task and runs the
//! max-utility greedy on what is left. [`exact`] is a branch-and-bound oracle
//! and [`bound`] holds the conflict-free upper bound used for ratios.

pub mod bound;
pub mod exact;
pub mod flat_max_util;
pub mod flat_rc;
pub mod flat_rca;
pub mod random_config;
pub mod reference;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flatten::FlatProblem;
use crate::model::Solution;

pub use bound::{upper_bound, BoundReport};
pub use exact::{solve_exact, DEFAULT_NODE_BUDGET};
pub use flat_max_util::solve_flat_max_util;
pub use flat_rc::solve_flat_rc;
pub use flat_rca::{solve_flat_rca, solve_flat_rca_with, RcaAveraging};
pub use random_config::solve_random_config;

/// Relative slack under which two greedy scores count as tied. Scores of the
/// resource-centric heuristics are assembled from sums and differences, so
/// mathematically equal scores can differ in the last few bits.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Index of the highest score; an earlier entry wins unless a later one beats
/// it by more than `tolerance` (relative, floored at 1).
pub fn argmax(scores: &[f64], tolerance: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) => {
                let slack = tolerance * scores[b].abs().max(1.0);
                if s > scores[b] + slack {
                    best = Some(i);
                }
            }
        }
    }
    best
}

/// One greedy pick.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    /// Greedy step, counted from 1.
    pub step: usize,
    /// Candidate index into [`FlatProblem::assignments`].
    pub candidate: usize,
    /// The solver's score for the pick.
    pub criterion: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub solver: SolverKind,
    pub solution: Solution,
    /// Candidate indices of the chosen assignments, in pick order.
    pub picks: Vec<usize>,
    /// Greedy trace; empty for the exact oracle.
    pub steps: Vec<Step>,
    pub elapsed: Duration,
}

impl SolverResult {
    pub fn utility(&self) -> f64 {
        self.solution.total_utility
    }

    fn from_picks(
        flat: &FlatProblem,
        solver: SolverKind,
        picks: Vec<usize>,
        steps: Vec<Step>,
        elapsed: Duration,
    ) -> Self {
        let assignments = picks.iter().map(|&i| flat.assignments()[i].clone()).collect();
        SolverResult {
            solver,
            solution: Solution::new(assignments),
            picks,
            steps,
            elapsed,
        }
    }

    /// Serializable form. `elapsed_s` is the only field that varies between
    /// identical runs.
    pub fn to_doc(&self, flat: &FlatProblem) -> SolverResultDoc {
        let entry = |i: usize| {
            let a = &flat.assignments()[i];
            (a.task_id, a.config_index, a.coalition.members().to_vec(), a.utility)
        };
        SolverResultDoc {
            solver: self.solver.name().to_string(),
            utility: self.utility(),
            assignments: self
                .picks
                .iter()
                .map(|&i| {
                    let (task, config, coalition, _) = entry(i);
                    AssignmentDoc {
                        task,
                        config,
                        coalition,
                    }
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let (task, config, coalition, utility) = entry(s.candidate);
                    StepDoc {
                        step: s.step,
                        task,
                        config,
                        coalition,
                        utility,
                        criterion: s.criterion,
                    }
                })
                .collect(),
            elapsed_s: self.elapsed.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResultDoc {
    pub solver: String,
    pub utility: f64,
    pub assignments: Vec<AssignmentDoc>,
    pub steps: Vec<StepDoc>,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentDoc {
    pub task: usize,
    pub config: usize,
    pub coalition: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepDoc {
    pub step: usize,
    pub task: usize,
    pub config: usize,
    pub coalition: Vec<usize>,
    pub utility: f64,
    pub criterion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    FlatMaxUtil,
    FlatRc,
    FlatRca,
    RandomConfig,
    Exact,
}

impl SolverKind {
    pub const HEURISTICS: [SolverKind; 4] = [
        SolverKind::FlatMaxUtil,
        SolverKind::FlatRc,
        SolverKind::FlatRca,
        SolverKind::RandomConfig,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::FlatMaxUtil => "flat_max_util",
            SolverKind::FlatRc => "flat_rc",
            SolverKind::FlatRca => "flat_rca",
            SolverKind::RandomConfig => "random_config",
            SolverKind::Exact => "exact",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat_max_util" => Ok(SolverKind::FlatMaxUtil),
            "flat_rc" => Ok(SolverKind::FlatRc),
            "flat_rca" => Ok(SolverKind::FlatRca),
            "random_config" => Ok(SolverKind::RandomConfig),
            "exact" => Ok(SolverKind::Exact),
            other => Err(Error::invalid(
                "/solver",
                format!(
                    "unknown solver `{other}`; expected one of flat_max_util, flat_rc, \
                     flat_rca, random_config, exact"
                ),
            )),
        }
    }
}

impl<'de> Deserialize<'de> for SolverKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for SolverKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Knobs for [`solve`] that only some solvers read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Seed for [`SolverKind::RandomConfig`].
    pub seed: u64,
    /// Node budget for [`SolverKind::Exact`].
    pub node_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Runs the named solver. Only the exact oracle can fail.
pub fn solve(flat: &FlatProblem, kind: SolverKind, options: &SolveOptions) -> Result<SolverResult> {
    Ok(match kind {
        SolverKind::FlatMaxUtil => solve_flat_max_util(flat),
        SolverKind::FlatRc => solve_flat_rc(flat),
        SolverKind::FlatRca => solve_flat_rca(flat),
        SolverKind::RandomConfig => solve_random_config(flat, options.seed),
        SolverKind::Exact => solve_exact(flat, options.node_budget)?,
    })
}

/// Greedy driver shared by the heuristics. `live` must be in ascending
/// candidate order; `score` fills one value per live candidate.
pub(crate) fn run_greedy<F>(
    flat: &FlatProblem,
    kind: SolverKind,
    mut live: Vec<usize>,
    tolerance: f64,
    mut score: F,
) -> SolverResult
where
    F: FnMut(&FlatProblem, &[usize], &mut Vec<f64>),
{
    let start = Instant::now();
    let mut picks = Vec::new();
    let mut steps = Vec::new();
    let mut scores = Vec::new();
    while !live.is_empty() {
        scores.clear();
        score(flat, &live, &mut scores);
        debug_assert_eq!(scores.len(), live.len());
        let best = argmax(&scores, tolerance).expect("live set is non-empty");
        let chosen = live[best];
        picks.push(chosen);
        steps.push(Step {
            step: steps.len() + 1,
            candidate: chosen,
            criterion: scores[best],
        });
        live.retain(|&j| j != chosen && !flat.conflicts(chosen, j));
    }
    let elapsed = start.elapsed();
    SolverResult::from_picks(flat, kind, picks, steps, elapsed)
}
