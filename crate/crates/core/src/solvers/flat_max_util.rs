use crate::flatten::FlatProblem;

use super::{run_greedy, SolverKind, SolverResult};

/// Greedy on raw utility: at every step take the live candidate with the
/// highest utility, then remove it together with its robot-sharing and
/// same-task (including sibling-variant) candidates.
pub fn solve_flat_max_util(flat: &FlatProblem) -> SolverResult {
    max_util_over(flat, SolverKind::FlatMaxUtil, (0..flat.len()).collect())
}

/// Max-utility greedy restricted to `live` (ascending candidate indices).
pub(crate) fn max_util_over(flat: &FlatProblem, kind: SolverKind, live: Vec<usize>) -> SolverResult {
    run_greedy(flat, kind, live, 0.0, |flat, live, scores| {
        scores.extend(live.iter().map(|&i| flat.utility_of(i)));
    })
}
