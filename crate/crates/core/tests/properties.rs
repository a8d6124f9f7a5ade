use mrta_core::solvers::{reference, solve_exact, upper_bound, DEFAULT_NODE_BUDGET};
use mrta_core::{
    generate, solve, Assignment, CapabilityVector, Coalition, FlatProblem, GenParams, Problem,
    Solution, SolveOptions, SolverKind,
};
use proptest::prelude::*;

fn small_params() -> impl Strategy<Value = GenParams> {
    (1usize..=6, 1usize..=4, 1usize..=3, 1usize..=3, 1u32..=9, any::<u64>()).prop_map(
        |(num_robots, num_tasks, max_configs_per_task, k, p, seed)| GenParams {
            num_robots,
            num_tasks,
            max_configs_per_task,
            k,
            capability_presence_prob: p as f64 / 10.0,
            seed,
            ..GenParams::default()
        },
    )
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn with_costs(p: &Problem, costs: Vec<f64>) -> Problem {
    Problem::new(
        p.num_capabilities(),
        p.robots().to_vec(),
        p.tasks().to_vec(),
        CapabilityVector::new(costs).unwrap(),
        p.cost_model().clone(),
        p.max_coalition_size(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn utility_is_zero_when_infeasible(params in small_params()) {
        let p = generate(&params).unwrap();
        for c in p.enumerate_coalitions() {
            for t in p.tasks() {
                for (l, cfg) in t.configurations.iter().enumerate() {
                    if !p.satisfies(&c, cfg).unwrap() {
                        prop_assert_eq!(p.assignment_utility(&c, t.id, l).unwrap(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn utility_monotone_in_costs_and_reward(params in small_params(), h in 0usize..7, bump in 0.01f64..5.0) {
        let p = generate(&params).unwrap();
        let mut costs = p.capability_costs().values().to_vec();
        costs[h] += bump;
        let dearer = with_costs(&p, costs);
        let mut tasks = p.tasks().to_vec();
        tasks[0].reward += bump;
        let richer = Problem::new(
            p.num_capabilities(), p.robots().to_vec(), tasks,
            p.capability_costs().clone(), p.cost_model().clone(), p.max_coalition_size(),
        ).unwrap();
        for c in p.enumerate_coalitions() {
            for (l, cfg) in p.tasks()[0].configurations.iter().enumerate() {
                let u = p.assignment_utility(&c, 0, l).unwrap();
                prop_assert!(dearer.assignment_utility(&c, 0, l).unwrap() <= u);
                if p.satisfies(&c, cfg).unwrap() {
                    prop_assert!(richer.assignment_utility(&c, 0, l).unwrap() > u);
                }
            }
        }
    }

    #[test]
    fn coalition_count_and_uniqueness(params in small_params()) {
        let p = generate(&params).unwrap();
        let coalitions = p.enumerate_coalitions();
        let n = p.robots().len();
        let expected: usize = (1..=p.max_coalition_size()).map(|i| binomial(n, i)).sum();
        prop_assert_eq!(coalitions.len(), expected);
        let mut masks: Vec<u64> = coalitions.iter().map(Coalition::mask).collect();
        masks.sort_unstable();
        masks.dedup();
        prop_assert_eq!(masks.len(), expected);
    }

    #[test]
    fn enumerated_assignments_are_feasible_and_positive(params in small_params()) {
        let p = generate(&params).unwrap();
        for a in p.enumerate_assignments() {
            let cfg = &p.tasks()[a.task_id].configurations[a.config_index];
            prop_assert!(p.satisfies(&a.coalition, cfg).unwrap());
            prop_assert!(a.utility > 0.0);
            prop_assert_eq!(a.utility, p.assignment_utility(&a.coalition, a.task_id, a.config_index).unwrap());
        }
    }

    #[test]
    fn conflicts_symmetric_and_flatten_preserves_count(params in small_params()) {
        let p = generate(&params).unwrap();
        let flat = FlatProblem::new(p.clone());
        prop_assert_eq!(flat.len(), p.enumerate_assignments().len());
        let total: usize = p.tasks().iter().map(|t| t.configurations.len()).sum();
        prop_assert_eq!(flat.flat_tasks().len(), total);
        for a in 0..flat.len() {
            prop_assert!(!flat.conflicts(a, a));
            for b in 0..flat.len() {
                prop_assert_eq!(flat.conflicts(a, b), flat.conflicts(b, a));
            }
        }
    }

    /// A candidate subset is pairwise conflict-free exactly when it is a
    /// valid solution of the original problem.
    #[test]
    fn conflict_freedom_equals_validity(params in small_params(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..5)) {
        let flat = FlatProblem::new(generate(&params).unwrap());
        if flat.is_empty() {
            return Ok(());
        }
        let mut idx: Vec<usize> = picks.iter().map(|i| i.index(flat.len())).collect();
        idx.sort_unstable();
        idx.dedup();
        let solution = Solution::new(idx.iter().map(|&i| flat.assignments()[i].clone()).collect::<Vec<Assignment>>());
        prop_assert_eq!(flat.is_conflict_free(&idx), flat.base().validate_solution(&solution).is_ok());
    }

    #[test]
    fn prune_commutes_for_compatible_picks(params in small_params(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let flat = FlatProblem::new(generate(&params).unwrap());
        if flat.is_empty() {
            return Ok(());
        }
        let a = a.index(flat.len());
        let compatible: Vec<usize> = (0..flat.len()).filter(|&j| j != a && !flat.conflicts(a, j)).collect();
        if compatible.is_empty() {
            return Ok(());
        }
        let b = compatible[b.index(compatible.len())];
        let all = flat.all_candidates();
        let ab = flat.prune(&flat.prune(&all, a).unwrap(), b).unwrap();
        let ba = flat.prune(&flat.prune(&all, b).unwrap(), a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn every_solver_valid_and_below_optimum(params in small_params()) {
        let flat = FlatProblem::new(generate(&params).unwrap());
        let opt = solve_exact(&flat, DEFAULT_NODE_BUDGET).unwrap();
        let ub = upper_bound(&flat);
        prop_assert!(flat.base().validate_solution(&opt.solution).is_ok());
        prop_assert!(opt.utility() <= ub + 1e-9);
        for kind in SolverKind::HEURISTICS {
            let r = solve(&flat, kind, &SolveOptions { seed: params.seed, ..SolveOptions::default() }).unwrap();
            prop_assert!(flat.base().validate_solution(&r.solution).is_ok());
            prop_assert!(r.utility() <= opt.utility() + 1e-9);
            // every pick has positive utility, so totals rise step by step
            prop_assert!(r.solution.assignments.iter().all(|a| a.utility > 0.0));
        }
    }

    #[test]
    fn solver_output_is_deterministic(params in small_params()) {
        let flat = FlatProblem::new(generate(&params).unwrap());
        for kind in SolverKind::HEURISTICS {
            let options = SolveOptions { seed: 9, ..SolveOptions::default() };
            let mut a = solve(&flat, kind, &options).unwrap().to_doc(&flat);
            let mut b = solve(&flat, kind, &options).unwrap().to_doc(&flat);
            a.elapsed_s = 0.0;
            b.elapsed_s = 0.0;
            prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }

    #[test]
    fn fast_rc_matches_reference(params in small_params()) {
        let flat = FlatProblem::new(generate(&params).unwrap());
        prop_assert_eq!(
            solve(&flat, SolverKind::FlatRc, &SolveOptions::default()).unwrap().picks,
            reference::flat_rc_pairwise(&flat).picks
        );
    }
}
