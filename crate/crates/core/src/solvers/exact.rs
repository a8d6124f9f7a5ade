//! Exact oracle: depth-first branch and bound.
//!
//! Decisions are made one original task at a time. A node either commits one
//! candidate of the current task whose coalition avoids every robot used so
//! far, or leaves the task uncovered. Candidates of a task are tried in
//! decreasing utility so good incumbents appear early. A node is cut when its
//! value plus, for every undecided task, the best candidate still
//! robot-compatible with the partial solution cannot beat the incumbent.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::flatten::FlatProblem;

use super::{SolverKind, SolverResult};

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Provably optimal solution, or [`Error::OracleBudgetExceeded`] once more
/// than `node_budget` nodes have been expanded.
pub fn solve_exact(flat: &FlatProblem, node_budget: u64) -> Result<SolverResult> {
    let start = Instant::now();
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); flat.base().tasks().len()];
    for i in 0..flat.len() {
        lists[flat.origin_of(i)].push(i);
    }
    lists.retain(|l| !l.is_empty());
    for list in &mut lists {
        // stable: equal utilities keep canonical order
        list.sort_by(|&a, &b| flat.utility_of(b).total_cmp(&flat.utility_of(a)));
    }
    let mut search = Search {
        flat,
        lists,
        budget: node_budget,
        nodes: 0,
        current: Vec::new(),
        best_value: 0.0,
        best: Vec::new(),
    };
    search.descend(0, 0, 0.0)?;
    let mut picks = search.best;
    picks.sort_unstable();
    Ok(SolverResult::from_picks(
        flat,
        SolverKind::Exact,
        picks,
        Vec::new(),
        start.elapsed(),
    ))
}

struct Search<'a> {
    flat: &'a FlatProblem,
    lists: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
    current: Vec<usize>,
    best_value: f64,
    best: Vec<usize>,
}

impl Search<'_> {
    fn optimistic(&self, from: usize, used: u64) -> f64 {
        self.lists[from..]
            .iter()
            .map(|list| {
                list.iter()
                    .find(|&&c| self.flat.mask_of(c) & used == 0)
                    .map_or(0.0, |&c| self.flat.utility_of(c))
            })
            .sum()
    }

    fn descend(&mut self, task: usize, used: u64, value: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::OracleBudgetExceeded { nodes: self.nodes - 1 });
        }
        if value > self.best_value {
            self.best_value = value;
            self.best = self.current.clone();
        }
        if task == self.lists.len() || value + self.optimistic(task, used) <= self.best_value {
            return Ok(());
        }
        for n in 0..self.lists[task].len() {
            let c = self.lists[task][n];
            let mask = self.flat.mask_of(c);
            if mask & used != 0 {
                continue;
            }
            self.current.push(c);
            let r = self.descend(task + 1, used | mask, value + self.flat.utility_of(c));
            self.current.pop();
            r?;
        }
        self.descend(task + 1, used, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, motivating_example, GenParams};
    use crate::model::{CapabilityVector, CostModel, Problem, Robot, Task, TaskConfiguration};

    /// Every conflict-free subset, no pruning.
    fn brute_force(flat: &FlatProblem) -> f64 {
        fn go(flat: &FlatProblem, from: usize, chosen: &mut Vec<usize>, best: &mut f64) {
            let value: f64 = chosen.iter().map(|&c| flat.utility_of(c)).sum();
            if value > *best {
                *best = value;
            }
            for c in from..flat.len() {
                if chosen.iter().all(|&p| !flat.conflicts(p, c)) {
                    chosen.push(c);
                    go(flat, c + 1, chosen, best);
                    chosen.pop();
                }
            }
        }
        let mut best = 0.0;
        go(flat, 0, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn empty_candidate_set() {
        let caps = |v: f64| CapabilityVector::new(vec![v]).unwrap();
        let p = Problem::new(
            1,
            vec![Robot::new(0, caps(0.0))],
            vec![Task::new(0, 5.0, vec![TaskConfiguration::new(caps(1.0))])],
            caps(0.0),
            CostModel::Zero,
            1,
        )
        .unwrap();
        let r = solve_exact(&FlatProblem::new(p), 10).unwrap();
        assert!(r.solution.is_empty());
        assert_eq!(r.utility(), 0.0);
    }

    #[test]
    fn motivating_example_optimum() {
        let flat = FlatProblem::new(motivating_example());
        let r = solve_exact(&flat, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.utility(), 194.0);
        assert_eq!(brute_force(&flat), 194.0);
        let t1 = r.solution.assignments.iter().find(|a| a.task_id == 0).unwrap();
        assert_eq!(t1.config_index, 1);
        assert!(r.solution.covers(1));
        assert!(flat.base().validate_solution(&r.solution).is_ok());
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..60 {
            let params = GenParams {
                num_robots: 5,
                num_tasks: 3,
                max_configs_per_task: 2,
                k: 2,
                seed,
                ..GenParams::default()
            };
            let flat = FlatProblem::new(generate(&params).unwrap());
            let r = solve_exact(&flat, DEFAULT_NODE_BUDGET).unwrap();
            let expected = brute_force(&flat);
            assert!((r.utility() - expected).abs() < 1e-9, "seed {seed}");
            assert!(flat.base().validate_solution(&r.solution).is_ok());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let params = GenParams {
            num_robots: 8,
            num_tasks: 6,
            max_configs_per_task: 3,
            k: 3,
            seed: 1,
            ..GenParams::default()
        };
        let flat = FlatProblem::new(generate(&params).unwrap());
        assert_eq!(
            solve_exact(&flat, 3).unwrap_err(),
            Error::OracleBudgetExceeded { nodes: 3 }
        );
    }
}
