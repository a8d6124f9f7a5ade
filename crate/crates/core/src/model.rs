//! Problem model for multi-robot task allocation with task variants.
//!
//! A [`Problem`] holds robots with capability vectors, tasks that can each be
//! achieved through any one of several [`TaskConfiguration`]s, per-unit
//! capability costs, a coordination [`CostModel`] and a coalition size cap.
//! An [`Assignment`] pairs a [`Coalition`] with one configuration of one task;
//! a [`Solution`] is a set of assignments that share no robot and cover each
//! task at most once.
//!
//! Feasibility uses exact `>=` on summed capabilities. Inputs computed from
//! arithmetic that may carry rounding error should be rounded beforehand.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Robot ids are packed into a `u64` mask, which bounds the roster size.
pub const MAX_ROBOTS: usize = 64;

/// Non-negative capability amounts, one entry per capability index.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityVector(Vec<f64>);

impl CapabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (h, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid(
                    format!("/{h}"),
                    format!("capability entries must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(CapabilityVector(values))
    }

    pub fn zeros(len: usize) -> Self {
        CapabilityVector(vec![0.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &CapabilityVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Component-wise `self >= other`.
    pub fn dominates(&self, other: &CapabilityVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Robot {
    pub id: usize,
    pub capabilities: CapabilityVector,
}

impl Robot {
    pub fn new(id: usize, capabilities: CapabilityVector) -> Self {
        Robot { id, capabilities }
    }
}

/// One way of achieving a task, expressed as a capability requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskConfiguration {
    pub requirements: CapabilityVector,
}

impl TaskConfiguration {
    pub fn new(requirements: CapabilityVector) -> Self {
        TaskConfiguration { requirements }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: usize,
    pub reward: f64,
    pub configurations: Vec<TaskConfiguration>,
}

impl Task {
    pub fn new(id: usize, reward: f64, configurations: Vec<TaskConfiguration>) -> Self {
        Task {
            id,
            reward,
            configurations,
        }
    }
}

/// Communication and coordination cost of an assignment.
#[derive(Debug, Clone, PartialEq)]
pub enum CostModel {
    Zero,
    /// `coefficient * |coalition|`.
    Linear { coefficient: f64 },
    /// Explicit costs keyed by `(coalition size, flat task id)`; missing keys cost 0.
    Table(BTreeMap<(usize, usize), f64>),
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::Linear { coefficient: 4.0 }
    }
}

impl CostModel {
    pub fn cost(&self, coalition_size: usize, flat_task: usize) -> f64 {
        match self {
            CostModel::Zero => 0.0,
            CostModel::Linear { coefficient } => coefficient * coalition_size as f64,
            CostModel::Table(table) => table
                .get(&(coalition_size, flat_task))
                .copied()
                .unwrap_or(0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CostModel::Zero => Ok(()),
            CostModel::Linear { coefficient } => {
                if coefficient.is_finite() && *coefficient >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(
                        "/cost_model/coefficient",
                        "cost coefficient must be finite and >= 0",
                    ))
                }
            }
            CostModel::Table(table) => {
                for (i, cost) in table.values().enumerate() {
                    if !cost.is_finite() || *cost < 0.0 {
                        return Err(Error::invalid(
                            format!("/cost_model/entries/{i}/cost"),
                            "table costs must be finite and >= 0",
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

/// A non-empty set of robots, kept as a sorted member list plus a bit mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coalition {
    members: Vec<usize>,
    mask: u64,
}

impl Coalition {
    /// Builds a coalition from robot ids in any order. Rejects empty input,
    /// duplicates and ids at or above [`MAX_ROBOTS`].
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::invalid("", "coalition must be non-empty"));
        }
        members.sort_unstable();
        let mut mask = 0u64;
        for &m in &members {
            if m >= MAX_ROBOTS {
                return Err(Error::invalid("", format!("robot id {m} exceeds {MAX_ROBOTS}")));
            }
            if mask & (1 << m) != 0 {
                return Err(Error::invalid("", format!("duplicate robot {m} in coalition")));
            }
            mask |= 1 << m;
        }
        Ok(Coalition { members, mask })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, robot: usize) -> bool {
        robot < MAX_ROBOTS && self.mask & (1 << robot) != 0
    }

    pub fn overlaps(&self, other: &Coalition) -> bool {
        self.mask & other.mask != 0
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// A coalition assigned to configuration `config_index` of task `task_id`,
/// with its utility cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub coalition: Coalition,
    pub task_id: usize,
    pub config_index: usize,
    pub utility: f64,
}

/// The immutable problem tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    num_capabilities: usize,
    robots: Vec<Robot>,
    tasks: Vec<Task>,
    capability_costs: CapabilityVector,
    cost_model: CostModel,
    max_coalition_size: usize,
    flat_offsets: Vec<usize>,
}

impl Problem {
    pub fn new(
        num_capabilities: usize,
        robots: Vec<Robot>,
        tasks: Vec<Task>,
        capability_costs: CapabilityVector,
        cost_model: CostModel,
        max_coalition_size: usize,
    ) -> Result<Self> {
        let h = num_capabilities;
        if h == 0 {
            return Err(Error::invalid("/H", "at least one capability is required"));
        }
        if robots.is_empty() {
            return Err(Error::invalid("/robots", "at least one robot is required"));
        }
        if robots.len() > MAX_ROBOTS {
            return Err(Error::invalid(
                "/robots",
                format!("at most {MAX_ROBOTS} robots are supported"),
            ));
        }
        if max_coalition_size == 0 || max_coalition_size > robots.len() {
            return Err(Error::invalid(
                "/k",
                format!(
                    "coalition size cap must be in 1..={}, got {max_coalition_size}",
                    robots.len()
                ),
            ));
        }
        if capability_costs.len() != h {
            return Err(Error::invalid(
                "/capability_costs",
                format!("expected {h} entries, got {}", capability_costs.len()),
            ));
        }
        for (i, r) in robots.iter().enumerate() {
            if r.id != i {
                return Err(Error::invalid(
                    format!("/robots/{i}/id"),
                    format!("robot ids must be contiguous from 0, expected {i}, got {}", r.id),
                ));
            }
            if r.capabilities.len() != h {
                return Err(Error::invalid(
                    format!("/robots/{i}/capabilities"),
                    format!("expected {h} entries, got {}", r.capabilities.len()),
                ));
            }
        }
        let mut flat_offsets = Vec::with_capacity(tasks.len() + 1);
        flat_offsets.push(0);
        for (k, t) in tasks.iter().enumerate() {
            if t.id != k {
                return Err(Error::invalid(
                    format!("/tasks/{k}/id"),
                    format!("task ids must be contiguous from 0, expected {k}, got {}", t.id),
                ));
            }
            if !(t.reward.is_finite() && t.reward > 0.0) {
                return Err(Error::invalid(
                    format!("/tasks/{k}/reward"),
                    format!("reward must be finite and > 0, got {}", t.reward),
                ));
            }
            if t.configurations.is_empty() {
                return Err(Error::invalid(
                    format!("/tasks/{k}/configurations"),
                    "a task needs at least one configuration",
                ));
            }
            for (l, c) in t.configurations.iter().enumerate() {
                if c.requirements.len() != h {
                    return Err(Error::invalid(
                        format!("/tasks/{k}/configurations/{l}"),
                        format!("expected {h} entries, got {}", c.requirements.len()),
                    ));
                }
            }
            flat_offsets.push(flat_offsets[k] + t.configurations.len());
        }
        cost_model.validate()?;
        Ok(Problem {
            num_capabilities: h,
            robots,
            tasks,
            capability_costs,
            cost_model,
            max_coalition_size,
            flat_offsets,
        })
    }

    pub fn num_capabilities(&self) -> usize {
        self.num_capabilities
    }

    pub fn robots(&self) -> &[Robot] {
        &self.robots
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn capability_costs(&self) -> &CapabilityVector {
        &self.capability_costs
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost_model
    }

    pub fn max_coalition_size(&self) -> usize {
        self.max_coalition_size
    }

    /// Total number of configuration slots across all tasks.
    pub fn num_flat_tasks(&self) -> usize {
        *self.flat_offsets.last().unwrap()
    }

    /// Dense index of `(task, config)` in task-then-config order.
    pub fn flat_index(&self, task_id: usize, config_index: usize) -> Result<usize> {
        let task = self.task(task_id)?;
        if config_index >= task.configurations.len() {
            return Err(Error::invalid(
                format!("/tasks/{task_id}/configurations/{config_index}"),
                "configuration index out of range",
            ));
        }
        Ok(self.flat_offsets[task_id] + config_index)
    }

    fn task(&self, task_id: usize) -> Result<&Task> {
        self.tasks
            .get(task_id)
            .ok_or_else(|| Error::invalid(format!("/tasks/{task_id}"), "task id out of range"))
    }

    fn coalition_capabilities(&self, coalition: &Coalition) -> Result<Vec<f64>> {
        let mut sum = vec![0.0; self.num_capabilities];
        for &m in coalition.members() {
            let robot = self.robots.get(m).ok_or_else(|| {
                Error::invalid(format!("/robots/{m}"), "robot id out of range")
            })?;
            for (s, v) in sum.iter_mut().zip(robot.capabilities.values()) {
                *s += v;
            }
        }
        Ok(sum)
    }

    /// Whether the coalition's summed capabilities meet `config` in every index.
    pub fn satisfies(&self, coalition: &Coalition, config: &TaskConfiguration) -> Result<bool> {
        let sum = self.coalition_capabilities(coalition)?;
        Ok(sum
            .iter()
            .zip(config.requirements.values())
            .all(|(have, need)| have >= need))
    }

    /// Reward minus capability and coordination cost, ignoring feasibility.
    fn raw_utility(&self, coalition_size: usize, task_id: usize, config_index: usize) -> f64 {
        let task = &self.tasks[task_id];
        let config = &task.configurations[config_index];
        let flat = self.flat_offsets[task_id] + config_index;
        task.reward
            - config.requirements.dot(&self.capability_costs)
            - self.cost_model.cost(coalition_size, flat)
    }

    /// Utility of assigning `coalition` to the given configuration: zero when
    /// infeasible, otherwise reward minus capability and coordination cost
    /// (possibly negative).
    pub fn assignment_utility(
        &self,
        coalition: &Coalition,
        task_id: usize,
        config_index: usize,
    ) -> Result<f64> {
        self.flat_index(task_id, config_index)?;
        let config = &self.tasks[task_id].configurations[config_index];
        if !self.satisfies(coalition, config)? {
            return Ok(0.0);
        }
        Ok(self.raw_utility(coalition.len(), task_id, config_index))
    }

    pub fn assignment(
        &self,
        coalition: Coalition,
        task_id: usize,
        config_index: usize,
    ) -> Result<Assignment> {
        let utility = self.assignment_utility(&coalition, task_id, config_index)?;
        Ok(Assignment {
            coalition,
            task_id,
            config_index,
            utility,
        })
    }

    /// All non-empty robot subsets of size at most `k`, ordered by size and
    /// then lexicographically by sorted member list.
    pub fn enumerate_coalitions(&self) -> Vec<Coalition> {
        let n = self.robots.len();
        let mut out = Vec::new();
        let mut combo = Vec::with_capacity(self.max_coalition_size);
        for size in 1..=self.max_coalition_size {
            combo.clear();
            combo.extend(0..size);
            loop {
                out.push(Coalition {
                    members: combo.clone(),
                    mask: combo.iter().fold(0u64, |m, &r| m | (1 << r)),
                });
                // advance to the next size-combination in lexicographic order
                let mut i = size;
                while i > 0 && combo[i - 1] == n - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                combo[i - 1] += 1;
                for j in i..size {
                    combo[j] = combo[j - 1] + 1;
                }
            }
        }
        out
    }

    /// Every feasible `(coalition, task, configuration)` triple with strictly
    /// positive utility, ordered by task, configuration, then coalition order.
    pub fn enumerate_assignments(&self) -> Vec<Assignment> {
        let coalitions = self.enumerate_coalitions();
        let sums: Vec<Vec<f64>> = coalitions
            .iter()
            .map(|c| self.coalition_capabilities(c).expect("enumerated ids are valid"))
            .collect();
        let mut out = Vec::new();
        for (k, task) in self.tasks.iter().enumerate() {
            for (l, config) in task.configurations.iter().enumerate() {
                let need = config.requirements.values();
                for (c, sum) in coalitions.iter().zip(&sums) {
                    if !sum.iter().zip(need).all(|(have, req)| have >= req) {
                        continue;
                    }
                    let utility = self.raw_utility(c.len(), k, l);
                    if utility > 0.0 {
                        out.push(Assignment {
                            coalition: c.clone(),
                            task_id: k,
                            config_index: l,
                            utility,
                        });
                    }
                }
            }
        }
        out
    }

    /// Checks robot-disjointness, one configuration per task, feasibility of
    /// every member and consistency of cached and total utilities.
    pub fn validate_solution(&self, solution: &Solution) -> Result<(), SolutionViolation> {
        let mut used = 0u64;
        let mut owner: Vec<Option<usize>> = vec![None; MAX_ROBOTS];
        let mut covered: BTreeMap<usize, usize> = BTreeMap::new();
        let mut total = 0.0;
        for (i, a) in solution.assignments.iter().enumerate() {
            let expected = self
                .assignment_utility(&a.coalition, a.task_id, a.config_index)
                .map_err(|e| SolutionViolation::InvalidReference {
                    index: i,
                    reason: e.to_string(),
                })?;
            let config = &self.tasks[a.task_id].configurations[a.config_index];
            if !self.satisfies(&a.coalition, config).unwrap_or(false) {
                return Err(SolutionViolation::Infeasible { index: i });
            }
            if !close(expected, a.utility) {
                return Err(SolutionViolation::UtilityMismatch {
                    index: i,
                    cached: a.utility,
                    expected,
                });
            }
            if used & a.coalition.mask() != 0 {
                let robot = (used & a.coalition.mask()).trailing_zeros() as usize;
                return Err(SolutionViolation::OverlappingRobots {
                    robot,
                    first: owner[robot].unwrap_or(0),
                    second: i,
                });
            }
            for &m in a.coalition.members() {
                owner[m] = Some(i);
            }
            used |= a.coalition.mask();
            if let Some(&first) = covered.get(&a.task_id) {
                return Err(SolutionViolation::DuplicateTask {
                    task: a.task_id,
                    first,
                    second: i,
                });
            }
            covered.insert(a.task_id, i);
            total += a.utility;
        }
        if !close(total, solution.total_utility) {
            return Err(SolutionViolation::TotalMismatch {
                reported: solution.total_utility,
                expected: total,
            });
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// The first constraint a candidate solution breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionViolation {
    OverlappingRobots { robot: usize, first: usize, second: usize },
    DuplicateTask { task: usize, first: usize, second: usize },
    Infeasible { index: usize },
    UtilityMismatch { index: usize, cached: f64, expected: f64 },
    TotalMismatch { reported: f64, expected: f64 },
    InvalidReference { index: usize, reason: String },
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionViolation::OverlappingRobots {
                robot,
                first,
                second,
            } => write!(
                f,
                "overlapping robots: robot {robot} used by assignments {first} and {second}"
            ),
            SolutionViolation::DuplicateTask {
                task,
                first,
                second,
            } => write!(
                f,
                "duplicate task: task {task} covered by assignments {first} and {second}"
            ),
            SolutionViolation::Infeasible { index } => {
                write!(f, "infeasible assignment: {index} does not meet its requirements")
            }
            SolutionViolation::UtilityMismatch {
                index,
                cached,
                expected,
            } => write!(
                f,
                "utility mismatch: assignment {index} caches {cached}, expected {expected}"
            ),
            SolutionViolation::TotalMismatch { reported, expected } => {
                write!(f, "total mismatch: reported {reported}, expected {expected}")
            }
            SolutionViolation::InvalidReference { index, reason } => {
                write!(f, "invalid reference in assignment {index}: {reason}")
            }
        }
    }
}

impl std::error::Error for SolutionViolation {}

/// A set of assignments together with their summed utility.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Solution {
    pub assignments: Vec<Assignment>,
    pub total_utility: f64,
}

impl Solution {
    pub fn new(assignments: Vec<Assignment>) -> Self {
        let total_utility = assignments.iter().map(|a| a.utility).sum();
        Solution {
            assignments,
            total_utility,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Whether any assignment targets `task_id`.
    pub fn covers(&self, task_id: usize) -> bool {
        self.assignments.iter().any(|a| a.task_id == task_id)
    }
}
