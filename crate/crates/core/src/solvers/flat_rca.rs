//! Approximate resource-centric greedy.
//!
//! Rather than looking at conflicting candidate pairs, the score aggregates
//! per (robot `i`, flat task `l`) over the live candidates:
//!
//! ```text
//! beta(i, l) = |live to l containing i| / |live to l|
//! phi(i, l)  = mean of beta(i, l) * U(j) over the averaging domain
//! rho(x)     = U(x) - sum_{i in c_x} sum_{l : origin(l) != origin(x)} phi(i, l)
//! ```
//!
//! With [`RcaAveraging::PerTask`] the averaging domain is the live candidates
//! to `l` that contain `i`; with [`RcaAveraging::PerRobot`] it is every live
//! candidate containing `i`. Flat tasks without live candidates contribute 0.

use crate::flatten::FlatProblem;

use super::{run_greedy, SolverKind, SolverResult, TIE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RcaAveraging {
    #[default]
    PerTask,
    PerRobot,
}

pub fn solve_flat_rca(flat: &FlatProblem) -> SolverResult {
    solve_flat_rca_with(flat, RcaAveraging::PerTask)
}

pub fn solve_flat_rca_with(flat: &FlatProblem, averaging: RcaAveraging) -> SolverResult {
    let robots = flat.base().robots().len();
    let tasks = flat.base().tasks().len();
    let flats = flat.flat_tasks().len();
    let mut per_task = vec![0usize; flats];
    let mut count = vec![0usize; robots * flats];
    let mut utility = vec![0.0f64; robots * flats];
    let mut robot_count = vec![0usize; robots];
    let mut robot_utility = vec![0.0f64; robots];
    // loss[i * tasks + t]: sum of phi(i, l) over flat tasks l of original task t
    let mut loss = vec![0.0f64; robots * tasks];
    let mut loss_total = vec![0.0f64; robots];

    run_greedy(
        flat,
        SolverKind::FlatRca,
        (0..flat.len()).collect(),
        TIE_TOLERANCE,
        |flat, live, scores| {
            per_task.fill(0);
            count.fill(0);
            utility.fill(0.0);
            robot_count.fill(0);
            robot_utility.fill(0.0);
            for &j in live {
                let l = flat.flat_task_of(j);
                let u = flat.utility_of(j);
                per_task[l] += 1;
                for &i in flat.assignments()[j].coalition.members() {
                    count[i * flats + l] += 1;
                    utility[i * flats + l] += u;
                    robot_count[i] += 1;
                    robot_utility[i] += u;
                }
            }

            loss.fill(0.0);
            loss_total.fill(0.0);
            for i in 0..robots {
                for (l, task) in flat.flat_tasks().iter().enumerate() {
                    let c = count[i * flats + l];
                    if c == 0 {
                        continue;
                    }
                    let beta = c as f64 / per_task[l] as f64;
                    let mean = match averaging {
                        RcaAveraging::PerTask => utility[i * flats + l] / c as f64,
                        RcaAveraging::PerRobot => robot_utility[i] / robot_count[i] as f64,
                    };
                    let phi = beta * mean;
                    loss[i * tasks + task.origin_task] += phi;
                    loss_total[i] += phi;
                }
            }

            for &x in live {
                let origin = flat.origin_of(x);
                let penalty: f64 = flat.assignments()[x]
                    .coalition
                    .members()
                    .iter()
                    .map(|&i| loss_total[i] - loss[i * tasks + origin])
                    .sum();
                scores.push(flat.utility_of(x) - penalty);
            }
        },
    )
}
