use crate::flatten::FlatProblem;

use super::SolverKind;

/// Sum over original tasks of the best candidate utility for any of the
/// task's configurations, ignoring conflicts between tasks. Tasks without a
/// candidate contribute 0. Never below the optimum.
pub fn upper_bound(flat: &FlatProblem) -> f64 {
    let mut best = vec![0.0f64; flat.base().tasks().len()];
    for i in 0..flat.len() {
        let t = flat.origin_of(i);
        best[t] = best[t].max(flat.utility_of(i));
    }
    best.iter().sum()
}

/// `utility / upper_bound`, with an empty bound scored as 1.
pub fn performance_ratio(utility: f64, upper_bound: f64) -> f64 {
    if upper_bound > 0.0 {
        utility / upper_bound
    } else {
        1.0
    }
}

/// Worst-case ratio of the max-utility greedy under coalition cap `k`.
pub fn max_util_worst_ratio(k: usize) -> f64 {
    (k + 2) as f64
}

/// Worst-case ratio of the resource-centric greedy: `min(2k + 4, d)` where `d`
/// is the largest initial conflict-set size among the optimal picks. Floored
/// at 1 since a ratio below 1 is meaningless.
pub fn resource_centric_worst_ratio(flat: &FlatProblem, optimal_picks: &[usize]) -> f64 {
    let k = flat.base().max_coalition_size();
    let all = flat.all_candidates();
    let degree = optimal_picks
        .iter()
        .map(|&m| flat.conflict_set(m, &all).count_ones(..))
        .max()
        .unwrap_or(0);
    ((2 * k + 4).min(degree).max(1)) as f64
}

/// Upper bound, optional optimum and per-solver ratios for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub upper_bound: f64,
    pub optimal: Option<f64>,
    pub ratios: Vec<(SolverKind, f64)>,
}

impl BoundReport {
    pub fn new(flat: &FlatProblem, optimal: Option<f64>, utilities: &[(SolverKind, f64)]) -> Self {
        let upper_bound = upper_bound(flat);
        BoundReport {
            upper_bound,
            optimal,
            ratios: utilities
                .iter()
                .map(|&(k, u)| (k, performance_ratio(u, upper_bound)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::motivating_example;
    use crate::solvers::{solve_exact, solve_flat_max_util, DEFAULT_NODE_BUDGET};

    #[test]
    fn motivating_example_bound() {
        let flat = FlatProblem::new(motivating_example());
        assert_eq!(upper_bound(&flat), 195.0);
        let opt = solve_exact(&flat, DEFAULT_NODE_BUDGET).unwrap();
        let greedy = solve_flat_max_util(&flat);
        let report = BoundReport::new(
            &flat,
            Some(opt.utility()),
            &[(SolverKind::FlatMaxUtil, greedy.utility())],
        );
        assert!(report.optimal.unwrap() <= report.upper_bound);
        assert_eq!(report.ratios, vec![(SolverKind::FlatMaxUtil, 98.0 / 195.0)]);
        assert!(resource_centric_worst_ratio(&flat, &opt.picks) <= 14.0);
    }

    #[test]
    fn empty_bound_scores_one() {
        assert_eq!(performance_ratio(0.0, 0.0), 1.0);
        assert_eq!(performance_ratio(5.0, 10.0), 0.5);
        assert_eq!(max_util_worst_ratio(3), 5.0);
    }
}
