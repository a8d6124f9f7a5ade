//! Parameter sweeps: generate instances, run solvers, aggregate ratios.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use mrta_core::solvers::bound::performance_ratio;
use mrta_core::solvers::{solve_exact, upper_bound};
use mrta_core::{generate, solve, Error as CoreError, FlatProblem, GenParams, SolveOptions, SolverKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{child_seed, mix};

/// Instances with more candidates than this never reach the exact oracle.
pub const ORACLE_MAX_CANDIDATES: usize = 2000;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{solver} broke an invariant at value {value}, run {run}: {detail}")]
    Invariant {
        solver: SolverKind,
        value: usize,
        run: usize,
        detail: String,
    },
    #[error("could not write `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    NumRobots,
    NumTasks,
    MaxConfigsPerTask,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::NumRobots => "num_robots",
            SweptParameter::NumTasks => "num_tasks",
            SweptParameter::MaxConfigsPerTask => "max_configs_per_task",
        }
    }

    fn apply(self, base: &GenParams, value: usize) -> GenParams {
        let mut p = base.clone();
        match self {
            SweptParameter::NumRobots => p.num_robots = value,
            SweptParameter::NumTasks => p.num_tasks = value,
            SweptParameter::MaxConfigsPerTask => p.max_configs_per_task = value,
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub swept_parameter: SweptParameter,
    pub values: Vec<usize>,
    #[serde(default = "default_runs")]
    pub runs_per_point: usize,
    #[serde(default)]
    pub base: GenParams,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    /// Also solve exactly when the instance is small enough.
    #[serde(default)]
    pub oracle: bool,
    #[serde(default = "default_oracle_budget")]
    pub oracle_budget: u64,
    /// When false, `mean_time_s` is left empty so the CSV is reproducible.
    #[serde(default = "default_true")]
    pub timing: bool,
}

fn default_runs() -> usize {
    1000
}

fn default_solvers() -> Vec<SolverKind> {
    SolverKind::HEURISTICS.to_vec()
}

fn default_oracle_budget() -> u64 {
    1_000_000
}

fn default_true() -> bool {
    true
}

impl SweepSpec {
    fn with(swept_parameter: SweptParameter, values: Vec<usize>, base: GenParams) -> Self {
        SweepSpec {
            swept_parameter,
            values,
            runs_per_point: default_runs(),
            base,
            solvers: default_solvers(),
            oracle: false,
            oracle_budget: default_oracle_budget(),
            timing: true,
        }
    }

    /// Robots in {4, 6, 8, 10, 12}; 10 tasks with at most 5 variants.
    pub fn vary_robots() -> Self {
        Self::with(
            SweptParameter::NumRobots,
            vec![4, 6, 8, 10, 12],
            GenParams {
                num_tasks: 10,
                max_configs_per_task: 5,
                ..GenParams::default()
            },
        )
    }

    /// Tasks in {4, 8, 12, 16, 20}; 8 robots, at most 5 variants.
    pub fn vary_tasks() -> Self {
        Self::with(
            SweptParameter::NumTasks,
            vec![4, 8, 12, 16, 20],
            GenParams {
                num_robots: 8,
                max_configs_per_task: 5,
                ..GenParams::default()
            },
        )
    }

    /// At most 1..=5 variants per task; 8 robots, 10 tasks.
    pub fn vary_variants() -> Self {
        Self::with(
            SweptParameter::MaxConfigsPerTask,
            vec![1, 2, 3, 4, 5],
            GenParams {
                num_robots: 8,
                num_tasks: 10,
                ..GenParams::default()
            },
        )
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "robots" => Some(Self::vary_robots()),
            "tasks" => Some(Self::vary_tasks()),
            "variants" => Some(Self::vary_variants()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::Spec("values must be non-empty".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::Spec("values must be strictly ascending".into()));
        }
        if self.runs_per_point == 0 {
            return Err(SweepError::Spec("runs_per_point must be at least 1".into()));
        }
        if self.solvers.is_empty() || self.solvers.contains(&SolverKind::Exact) {
            return Err(SweepError::Spec(
                "solvers must list heuristics only; use `oracle` for the exact solver".into(),
            ));
        }
        for &v in &self.values {
            self.swept_parameter.apply(&self.base, v).validate()?;
        }
        Ok(())
    }
}

/// Outcome of one solver on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRun {
    pub solver: SolverKind,
    pub utility: f64,
    pub ratio: f64,
    pub seconds: f64,
}

/// Everything recorded for one generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRecord {
    pub value: usize,
    pub run: usize,
    pub seed: u64,
    pub candidates: usize,
    pub upper_bound: f64,
    /// `None` when the oracle was not requested; `Some(None)` when skipped.
    pub optimal: Option<Option<f64>>,
    /// Generation plus flattening time, excluded from solver times.
    pub prep_seconds: f64,
    pub runs: Vec<SolverRun>,
}

impl InstanceRecord {
    pub fn is_empty(&self) -> bool {
        self.upper_bound == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub swept_param: SweptParameter,
    pub value: usize,
    pub solver: SolverKind,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_utility: f64,
    pub mean_time_s: Option<f64>,
    pub empty_count: usize,
    /// Mean of utility / optimum over instances the oracle solved.
    pub mean_optimal_ratio: Option<f64>,
    pub oracle_skipped: usize,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub records: Vec<InstanceRecord>,
}

impl SweepOutcome {
    pub fn row(&self, value: usize, solver: SolverKind) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.solver == solver)
    }

    /// CSV with one row per (value, solver). The oracle columns appear only
    /// when the spec requested the oracle.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SweepError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "swept_param",
            "value",
            "solver",
            "mean_ratio",
            "std_ratio",
            "mean_utility",
            "mean_time_s",
            "empty_count",
        ];
        if self.spec.oracle {
            header.extend(["mean_optimal_ratio", "oracle_skipped"]);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.swept_param.name().to_string(),
                r.value.to_string(),
                r.solver.name().to_string(),
                r.mean_ratio.to_string(),
                r.std_ratio.to_string(),
                r.mean_utility.to_string(),
                r.mean_time_s.map(|t| t.to_string()).unwrap_or_default(),
                r.empty_count.to_string(),
            ];
            if self.spec.oracle {
                rec.push(r.mean_optimal_ratio.map(|t| t.to_string()).unwrap_or_default());
                rec.push(r.oracle_skipped.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| SweepError::Csv(e.into()))?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<(), SweepError> {
        let io = |source| SweepError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = std::fs::File::create(path).map_err(io)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Seed used by the random-configuration baseline on an instance.
pub fn baseline_seed(instance_seed: u64) -> u64 {
    mix(instance_seed ^ 0x5eed_ba5e_11e5_0001)
}

fn run_instance(spec: &SweepSpec, value: usize, run: usize) -> Result<InstanceRecord, SweepError> {
    let seed = child_seed(spec.base.seed, value as u64, run as u64);
    let mut params = spec.swept_parameter.apply(&spec.base, value);
    params.seed = seed;
    let prep = Instant::now();
    let flat = FlatProblem::new(generate(&params)?);
    let prep_seconds = prep.elapsed().as_secs_f64();
    let bound = upper_bound(&flat);
    let options = SolveOptions {
        seed: baseline_seed(seed),
        ..SolveOptions::default()
    };

    let optimal = if spec.oracle {
        if flat.len() <= ORACLE_MAX_CANDIDATES {
            match solve_exact(&flat, spec.oracle_budget) {
                Ok(r) => Some(Some(r.utility())),
                Err(CoreError::OracleBudgetExceeded { .. }) => Some(None),
                Err(e) => return Err(e.into()),
            }
        } else {
            Some(None)
        }
    } else {
        None
    };

    let mut runs = Vec::with_capacity(spec.solvers.len());
    for &solver in &spec.solvers {
        let start = Instant::now();
        let result = solve(&flat, solver, &options)?;
        let seconds = start.elapsed().as_secs_f64();
        let violation = |detail: String| SweepError::Invariant {
            solver,
            value,
            run,
            detail,
        };
        flat.base()
            .validate_solution(&result.solution)
            .map_err(|v| violation(v.to_string()))?;
        let utility = result.utility();
        let ceiling = optimal.flatten().unwrap_or(bound);
        if utility > ceiling + 1e-9 * ceiling.max(1.0) {
            return Err(violation(format!("utility {utility} exceeds {ceiling}")));
        }
        runs.push(SolverRun {
            solver,
            utility,
            ratio: performance_ratio(utility, bound),
            seconds,
        });
    }
    if let Some(Some(opt)) = optimal {
        if opt > bound + 1e-9 * bound.max(1.0) {
            return Err(SweepError::Invariant {
                solver: SolverKind::Exact,
                value,
                run,
                detail: format!("optimum {opt} exceeds upper bound {bound}"),
            });
        }
    }
    Ok(InstanceRecord {
        value,
        run,
        seed,
        candidates: flat.len(),
        upper_bound: bound,
        optimal,
        prep_seconds,
        runs,
    })
}

/// Runs the sweep on `workers` threads (1 = on the calling thread). Rows do
/// not depend on the worker count: records are aggregated in run order.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepOutcome, SweepError> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = spec
        .values
        .iter()
        .flat_map(|&v| (0..spec.runs_per_point).map(move |r| (v, r)))
        .collect();
    let records: Vec<InstanceRecord> = if workers <= 1 {
        jobs.iter()
            .map(|&(v, r)| run_instance(spec, v, r))
            .collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SweepError::Spec(format!("thread pool: {e}")))?;
        pool.install(|| {
            jobs.par_iter()
                .map(|&(v, r)| run_instance(spec, v, r))
                .collect::<Result<_, _>>()
        })?
    };

    let mut rows = Vec::new();
    for &value in &spec.values {
        let at: Vec<&InstanceRecord> = records.iter().filter(|r| r.value == value).collect();
        let n = at.len() as f64;
        let empty_count = at.iter().filter(|r| r.is_empty()).count();
        for (s, &solver) in spec.solvers.iter().enumerate() {
            let (mut sum, mut sum_sq, mut utility, mut time) = (0.0, 0.0, 0.0, 0.0);
            let (mut opt_sum, mut opt_n, mut skipped) = (0.0, 0usize, 0usize);
            for rec in &at {
                let run = &rec.runs[s];
                sum += run.ratio;
                sum_sq += run.ratio * run.ratio;
                utility += run.utility;
                time += run.seconds;
                match rec.optimal {
                    Some(Some(opt)) => {
                        opt_sum += performance_ratio(run.utility, opt);
                        opt_n += 1;
                    }
                    Some(None) => skipped += 1,
                    None => {}
                }
            }
            let mean = sum / n;
            rows.push(SweepRow {
                swept_param: spec.swept_parameter,
                value,
                solver,
                mean_ratio: mean,
                std_ratio: (sum_sq / n - mean * mean).max(0.0).sqrt(),
                mean_utility: utility / n,
                mean_time_s: spec.timing.then_some(time / n),
                empty_count,
                mean_optimal_ratio: (opt_n > 0).then(|| opt_sum / opt_n as f64),
                oracle_skipped: skipped,
            });
        }
    }
    Ok(SweepOutcome {
        spec: spec.clone(),
        rows,
        records,
    })
}
