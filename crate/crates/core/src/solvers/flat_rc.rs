//! Resource-centric greedy over the flattened candidate set.
//!
//! The score of a live candidate `x` is
//!
//! ```text
//! rho(x) = U(x) - sum_{j in N(x)} U(j) / |N(j)|
//! ```
//!
//! where `N(.)` is the conflict set within the live candidates. Both sizes
//! and sums are recomputed at every step.
//!
//! Summing over `N(x)` directly costs `O(|M|^2)` per step. Instead, the
//! complement of `N(x) + {x}` is "coalition disjoint from `x` and a different
//! original task", so every neighbourhood sum is a total minus two
//! disjoint-coalition sums, and disjoint-coalition sums for all candidates at
//! once are a subset-sum (zeta) transform over robot masks. For rosters too
//! large for a dense `2^|R|` table the sums fall back to pairwise scans.

use crate::flatten::FlatProblem;

use super::{run_greedy, SolverKind, SolverResult, TIE_TOLERANCE};

/// Dense subset-sum tables are used up to this many robots.
const MAX_DENSE_ROBOTS: usize = 22;

pub fn solve_flat_rc(flat: &FlatProblem) -> SolverResult {
    let mut sums = DisjointSums::new(flat.base().robots().len());
    let mut ones = Vec::new();
    let mut masks = Vec::new();
    let mut weights = Vec::new();
    let mut d_all = Vec::new();
    let mut d_same = Vec::new();
    run_greedy(
        flat,
        SolverKind::FlatRc,
        (0..flat.len()).collect(),
        TIE_TOLERANCE,
        |flat, live, scores| {
            let n = live.len();
            masks.clear();
            masks.extend(live.iter().map(|&i| flat.mask_of(i)));
            ones.clear();
            ones.resize(n, 1.0);

            // conflict-set sizes
            sums.over_all(&masks, &ones, &mut d_all);
            sums.within_origins(flat, live, &masks, &ones, &mut d_same);
            weights.clear();
            for (k, &i) in live.iter().enumerate() {
                let degree = (n - 1) as f64 - (d_all[k] - d_same[k]);
                weights.push(if degree > 0.0 {
                    flat.utility_of(i) / degree
                } else {
                    0.0
                });
            }

            // weighted neighbourhood sums
            let total: f64 = weights.iter().sum();
            sums.over_all(&masks, &weights, &mut d_all);
            sums.within_origins(flat, live, &masks, &weights, &mut d_same);
            for (k, &i) in live.iter().enumerate() {
                let penalty = (total - weights[k]) - (d_all[k] - d_same[k]);
                scores.push(flat.utility_of(i) - penalty);
            }
        },
    )
}

/// Computes `out[a] = sum of values[b] over b with masks[a] & masks[b] == 0`.
struct DisjointSums {
    robots: usize,
    table: Vec<f64>,
}

impl DisjointSums {
    fn new(robots: usize) -> Self {
        DisjointSums {
            robots,
            table: Vec::new(),
        }
    }

    fn over_all(&mut self, masks: &[u64], values: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.resize(masks.len(), 0.0);
        self.compute(masks, values, out);
    }

    /// Same as [`over_all`](Self::over_all) but only pairs with the same
    /// original task contribute. Live candidates of one task are contiguous.
    fn within_origins(
        &mut self,
        flat: &FlatProblem,
        live: &[usize],
        masks: &[u64],
        values: &[f64],
        out: &mut Vec<f64>,
    ) {
        out.clear();
        out.resize(masks.len(), 0.0);
        let mut start = 0;
        while start < live.len() {
            let origin = flat.origin_of(live[start]);
            let mut end = start + 1;
            while end < live.len() && flat.origin_of(live[end]) == origin {
                end += 1;
            }
            self.compute(&masks[start..end], &values[start..end], &mut out[start..end]);
            start = end;
        }
    }

    fn compute(&mut self, masks: &[u64], values: &[f64], out: &mut [f64]) {
        let n = masks.len();
        let r = self.robots;
        let dense_cost = r.saturating_mul(1usize << r.min(MAX_DENSE_ROBOTS));
        if r > MAX_DENSE_ROBOTS || n.saturating_mul(n) <= dense_cost {
            for (a, &ma) in masks.iter().enumerate() {
                out[a] = masks
                    .iter()
                    .zip(values)
                    .filter(|(&mb, _)| ma & mb == 0)
                    .map(|(_, v)| v)
                    .sum();
            }
            return;
        }
        let size = 1usize << r;
        let full = (size - 1) as u64;
        self.table.clear();
        self.table.resize(size, 0.0);
        for (&m, &v) in masks.iter().zip(values) {
            self.table[m as usize] += v;
        }
        // table[s] <- sum over submasks of s
        for bit in 0..r {
            let b = 1usize << bit;
            for s in 0..size {
                if s & b != 0 {
                    self.table[s] += self.table[s ^ b];
                }
            }
        }
        for (a, &m) in masks.iter().enumerate() {
            out[a] = self.table[(full & !m) as usize];
        }
    }
}
