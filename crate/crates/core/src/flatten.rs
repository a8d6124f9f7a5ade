//! Flattening: every task configuration becomes an independent flat task.
//!
//! Sibling configurations of one task must stay mutually exclusive, so the
//! conflict relation between candidate assignments is extended: two
//! assignments conflict when their coalitions share a robot, when they target
//! the same flat task, or when their flat tasks come from the same original
//! task. Any pairwise conflict-free subset of candidates is then a valid
//! [`Solution`](crate::model::Solution) of the original problem.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{Assignment, CapabilityVector, Problem};

/// A set of candidate assignment indices into [`FlatProblem::assignments`].
pub type CandidateSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq)]
pub struct FlatTask {
    pub flat_id: usize,
    pub origin_task: usize,
    pub origin_config: usize,
    pub reward: f64,
    pub requirements: CapabilityVector,
}

/// The compiled problem: flat tasks plus the candidate assignment list, in the
/// canonical order of [`Problem::enumerate_assignments`].
#[derive(Debug, Clone)]
pub struct FlatProblem {
    base: Problem,
    flat_tasks: Vec<FlatTask>,
    assignments: Vec<Assignment>,
    flat_of: Vec<usize>,
    origin_of: Vec<usize>,
    mask_of: Vec<u64>,
}

impl FlatProblem {
    pub fn new(problem: Problem) -> Self {
        let mut flat_tasks = Vec::with_capacity(problem.num_flat_tasks());
        for task in problem.tasks() {
            for (l, config) in task.configurations.iter().enumerate() {
                flat_tasks.push(FlatTask {
                    flat_id: flat_tasks.len(),
                    origin_task: task.id,
                    origin_config: l,
                    reward: task.reward,
                    requirements: config.requirements.clone(),
                });
            }
        }
        let assignments = problem.enumerate_assignments();
        let flat_of: Vec<usize> = assignments
            .iter()
            .map(|a| {
                problem
                    .flat_index(a.task_id, a.config_index)
                    .expect("enumerated assignments reference valid configurations")
            })
            .collect();
        let origin_of = flat_of.iter().map(|&f| flat_tasks[f].origin_task).collect();
        let mask_of = assignments.iter().map(|a| a.coalition.mask()).collect();
        FlatProblem {
            base: problem,
            flat_tasks,
            assignments,
            flat_of,
            origin_of,
            mask_of,
        }
    }

    pub fn base(&self) -> &Problem {
        &self.base
    }

    pub fn flat_tasks(&self) -> &[FlatTask] {
        &self.flat_tasks
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Flat task targeted by candidate `i`.
    pub fn flat_task_of(&self, i: usize) -> usize {
        self.flat_of[i]
    }

    /// Original task targeted by candidate `i`.
    pub fn origin_of(&self, i: usize) -> usize {
        self.origin_of[i]
    }

    pub fn mask_of(&self, i: usize) -> u64 {
        self.mask_of[i]
    }

    pub fn utility_of(&self, i: usize) -> f64 {
        self.assignments[i].utility
    }

    /// Every candidate index.
    pub fn all_candidates(&self) -> CandidateSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        set.insert_range(..);
        set
    }

    /// Conflict predicate on candidate indices. Irreflexive and symmetric.
    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        a != b
            && (self.mask_of[a] & self.mask_of[b] != 0
                || self.flat_of[a] == self.flat_of[b]
                || self.origin_of[a] == self.origin_of[b])
    }

    /// Members of `remaining` that conflict with `a` (never `a` itself).
    pub fn conflict_set(&self, a: usize, remaining: &CandidateSet) -> CandidateSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for j in remaining.ones() {
            if self.conflicts(a, j) {
                out.insert(j);
            }
        }
        out
    }

    /// Removes `chosen` and everything conflicting with it from `remaining`.
    pub fn prune(&self, remaining: &CandidateSet, chosen: usize) -> Result<CandidateSet> {
        if chosen >= self.len() || !remaining.contains(chosen) {
            return Err(Error::invalid(
                format!("/assignments/{chosen}"),
                "chosen assignment is not among the remaining candidates",
            ));
        }
        let mut out = remaining.clone();
        out.set(chosen, false);
        out.difference_with(&self.conflict_set(chosen, remaining));
        Ok(out)
    }

    /// Whether no two of `picks` conflict.
    pub fn is_conflict_free(&self, picks: &[usize]) -> bool {
        picks
            .iter()
            .enumerate()
            .all(|(n, &a)| picks[n + 1..].iter().all(|&b| !self.conflicts(a, b)))
    }
}

/// Compiles `problem` into its flat form.
pub fn flatten(problem: &Problem) -> FlatProblem {
    FlatProblem::new(problem.clone())
}

/// Precomputed conflict adjacency, one bit row per candidate. Needs
/// `|M|^2 / 8` bytes, so roughly 50 MB at 20,000 candidates.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    rows: Vec<FixedBitSet>,
}

impl ConflictGraph {
    pub fn build(flat: &FlatProblem) -> Self {
        let n = flat.len();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if flat.conflicts(a, b) {
                    rows[a].insert(b);
                    rows[b].insert(a);
                }
            }
        }
        ConflictGraph { rows }
    }

    pub fn neighbors(&self, a: usize) -> &FixedBitSet {
        &self.rows[a]
    }

    /// Size of `a`'s conflict set within `remaining`.
    pub fn degree_within(&self, a: usize, remaining: &CandidateSet) -> usize {
        self.rows[a].intersection_count(remaining)
    }
}
