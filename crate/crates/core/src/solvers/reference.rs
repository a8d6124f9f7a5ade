//! Quadratic reference implementations of the greedy heuristics.
//!
//! These evaluate every score straight from its definition with explicit
//! conflict lists. They are slow and exist to cross-check the fast solvers,
//! and to run the prior single-variant heuristics on an unflattened problem
//! where conflicts are only "shares a robot" or "same task".

use std::time::Instant;

use crate::flatten::FlatProblem;
use crate::model::{Assignment, Problem};

use super::{argmax, RcaAveraging, SolverKind, SolverResult, Step, TIE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MaxUtil,
    ResourceCentric,
}

/// Runs the greedy over candidates `0..utilities.len()` with an arbitrary
/// conflict predicate. Returns `(candidate, criterion)` per pick.
pub fn greedy_pairwise<F>(utilities: &[f64], conflicts: F, metric: Metric) -> Vec<(usize, f64)>
where
    F: Fn(usize, usize) -> bool,
{
    let n = utilities.len();
    let mut adjacency = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            if conflicts(a, b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    let mut alive = vec![true; n];
    let mut picks = Vec::new();
    loop {
        let live: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if live.is_empty() {
            break;
        }
        let scores: Vec<f64> = match metric {
            Metric::MaxUtil => live.iter().map(|&i| utilities[i]).collect(),
            Metric::ResourceCentric => {
                let degree: Vec<usize> = (0..n)
                    .map(|j| adjacency[j].iter().filter(|&&b| alive[b]).count())
                    .collect();
                live.iter()
                    .map(|&x| {
                        let penalty: f64 = adjacency[x]
                            .iter()
                            .filter(|&&j| alive[j])
                            .map(|&j| {
                                // j conflicts with x, so x is in its conflict set
                                assert!(degree[j] >= 1);
                                utilities[j] / degree[j] as f64
                            })
                            .sum();
                        utilities[x] - penalty
                    })
                    .collect()
            }
        };
        let tolerance = match metric {
            Metric::MaxUtil => 0.0,
            Metric::ResourceCentric => TIE_TOLERANCE,
        };
        let best = argmax(&scores, tolerance).unwrap();
        let chosen = live[best];
        picks.push((chosen, scores[best]));
        alive[chosen] = false;
        for &j in &adjacency[chosen] {
            alive[j] = false;
        }
    }
    picks
}

fn into_result(
    flat: &FlatProblem,
    kind: SolverKind,
    trace: Vec<(usize, f64)>,
    start: Instant,
) -> SolverResult {
    let steps = trace
        .iter()
        .enumerate()
        .map(|(n, &(candidate, criterion))| Step {
            step: n + 1,
            candidate,
            criterion,
        })
        .collect();
    let picks = trace.iter().map(|&(c, _)| c).collect();
    SolverResult::from_picks(flat, kind, picks, steps, start.elapsed())
}

fn flat_utilities(flat: &FlatProblem) -> Vec<f64> {
    (0..flat.len()).map(|i| flat.utility_of(i)).collect()
}

pub fn flat_max_util_pairwise(flat: &FlatProblem) -> SolverResult {
    let start = Instant::now();
    let trace = greedy_pairwise(&flat_utilities(flat), |a, b| flat.conflicts(a, b), Metric::MaxUtil);
    into_result(flat, SolverKind::FlatMaxUtil, trace, start)
}

pub fn flat_rc_pairwise(flat: &FlatProblem) -> SolverResult {
    let start = Instant::now();
    let trace = greedy_pairwise(
        &flat_utilities(flat),
        |a, b| flat.conflicts(a, b),
        Metric::ResourceCentric,
    );
    into_result(flat, SolverKind::FlatRc, trace, start)
}

/// The single-variant heuristic on the original problem: candidates are
/// [`Problem::enumerate_assignments`] and two candidates conflict when they
/// share a robot or target the same task id.
pub fn task_level_greedy(problem: &Problem, metric: Metric) -> Vec<(Assignment, f64)> {
    let candidates = problem.enumerate_assignments();
    let utilities: Vec<f64> = candidates.iter().map(|a| a.utility).collect();
    let trace = greedy_pairwise(
        &utilities,
        |a, b| {
            candidates[a].coalition.overlaps(&candidates[b].coalition)
                || candidates[a].task_id == candidates[b].task_id
        },
        metric,
    );
    trace
        .into_iter()
        .map(|(i, c)| (candidates[i].clone(), c))
        .collect()
}

/// Approximate resource-centric greedy with every quantity evaluated by
/// scanning the live set.
pub fn flat_rca_direct(flat: &FlatProblem, averaging: RcaAveraging) -> SolverResult {
    let start = Instant::now();
    let n = flat.len();
    let robots = flat.base().robots().len();
    let flats = flat.flat_tasks().len();
    let mut alive = vec![true; n];
    let mut trace = Vec::new();
    loop {
        let live: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if live.is_empty() {
            break;
        }
        let contains = |j: usize, i: usize| flat.assignments()[j].coalition.contains(i);
        let mut phi = vec![vec![0.0; flats]; robots];
        for (i, row) in phi.iter_mut().enumerate() {
            for (l, cell) in row.iter_mut().enumerate() {
                let to_l: Vec<usize> = live
                    .iter()
                    .copied()
                    .filter(|&j| flat.flat_task_of(j) == l)
                    .collect();
                let with_i: Vec<usize> = to_l.iter().copied().filter(|&j| contains(j, i)).collect();
                if with_i.is_empty() {
                    continue;
                }
                let beta = with_i.len() as f64 / to_l.len() as f64;
                let domain: Vec<usize> = match averaging {
                    RcaAveraging::PerTask => with_i,
                    RcaAveraging::PerRobot => {
                        live.iter().copied().filter(|&j| contains(j, i)).collect()
                    }
                };
                *cell = domain
                    .iter()
                    .map(|&j| beta * flat.utility_of(j))
                    .sum::<f64>()
                    / domain.len() as f64;
            }
        }
        let scores: Vec<f64> = live
            .iter()
            .map(|&x| {
                let mut penalty = 0.0;
                for &i in flat.assignments()[x].coalition.members() {
                    for (l, task) in flat.flat_tasks().iter().enumerate() {
                        if task.origin_task != flat.origin_of(x) {
                            penalty += phi[i][l];
                        }
                    }
                }
                flat.utility_of(x) - penalty
            })
            .collect();
        let best = argmax(&scores, TIE_TOLERANCE).unwrap();
        let chosen = live[best];
        trace.push((chosen, scores[best]));
        for &j in &live {
            if j == chosen || flat.conflicts(chosen, j) {
                alive[j] = false;
            }
        }
    }
    into_result(flat, SolverKind::FlatRca, trace, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::motivating_example;
    use crate::solvers::solve_flat_max_util;

    #[test]
    fn pairwise_max_util_agrees_with_driver() {
        let flat = FlatProblem::new(motivating_example());
        assert_eq!(flat_max_util_pairwise(&flat).picks, solve_flat_max_util(&flat).picks);
    }

    #[test]
    fn without_conflicts_rc_equals_max_util() {
        let utilities = [3.0, 5.0, 4.0];
        let none = |_: usize, _: usize| false;
        assert_eq!(
            greedy_pairwise(&utilities, none, Metric::MaxUtil),
            greedy_pairwise(&utilities, none, Metric::ResourceCentric)
        );
    }
}
