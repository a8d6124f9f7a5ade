use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mrta_core::{generate, motivating_example, solve, FlatProblem, GenParams, Problem, SolveOptions, SolverKind};
use mrta_bench::{run_sweep, SweepSpec};

#[derive(Parser)]
#[command(name = "mrta-bench", about = "Task allocation with task variants: instances, solvers, sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance as JSON.
    Gen {
        #[command(flatten)]
        params: GenArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and print the result as JSON.
    Solve {
        /// Instance JSON file; without it an instance is generated from the flags.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        params: GenArgs,
        /// flat_max_util, flat_rc, flat_rca, random_config or exact.
        #[arg(long, value_parser = parse_solver)]
        solver: SolverKind,
        /// Seed of the random-configuration baseline.
        #[arg(long, default_value_t = 0)]
        solver_seed: u64,
        /// Node budget of the exact solver.
        #[arg(long, default_value_t = mrta_core::solvers::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Run a sweep and write the aggregated CSV.
    Sweep {
        /// Sweep spec JSON file.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        spec: Option<PathBuf>,
        /// Built-in sweep: robots, tasks or variants.
        #[arg(long)]
        preset: Option<String>,
        /// Override runs_per_point.
        #[arg(long)]
        runs: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Request the exact oracle where tractable.
        #[arg(long)]
        oracle: bool,
        /// Leave mean_time_s empty for reproducible output.
        #[arg(long)]
        no_timing: bool,
        /// Worker threads; 1 runs sequentially.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a built-in instance (`motivating`).
    Fixture { name: String },
}

/// Flags mirror the generator parameter names.
#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 8)]
    num_robots: usize,
    #[arg(long, default_value_t = 10)]
    num_tasks: usize,
    #[arg(long, default_value_t = 5)]
    max_configs_per_task: usize,
    #[arg(long = "H", default_value_t = 7)]
    h: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    capability_presence_prob: f64,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.0, 8.0])]
    capability_range: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.0, 1.0])]
    cost_range: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [100.0, 200.0])]
    reward_range: Vec<f64>,
    #[arg(long, default_value_t = 4.0)]
    cost_coefficient: f64,
    #[arg(long)]
    integer_capabilities: bool,
    #[arg(long)]
    fixed_config_count: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        let pair = |v: &[f64]| [v[0], v[1]];
        GenParams {
            num_robots: self.num_robots,
            num_tasks: self.num_tasks,
            max_configs_per_task: self.max_configs_per_task,
            h: self.h,
            k: self.k,
            capability_presence_prob: self.capability_presence_prob,
            capability_range: pair(&self.capability_range),
            cost_range: pair(&self.cost_range),
            reward_range: pair(&self.reward_range),
            cost_coefficient: self.cost_coefficient,
            integer_capabilities: self.integer_capabilities,
            fixed_config_count: self.fixed_config_count,
            seed: self.seed,
        }
    }
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: mrta_core::Error| e.to_string())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                // a closed downstream pipe (`| head`) is not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { params, out } => {
            let problem = generate(&params.params())?;
            emit(&problem.to_json_string(), out.as_ref())
        }
        Command::Solve {
            instance,
            params,
            solver,
            solver_seed,
            node_budget,
        } => {
            let problem = match instance {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    Problem::from_json_str(&text)
                        .with_context(|| format!("loading {}", path.display()))?
                }
                None => generate(&params.params())?,
            };
            let flat = FlatProblem::new(problem);
            let options = SolveOptions {
                seed: solver_seed,
                node_budget,
            };
            let result = solve(&flat, solver, &options)?;
            emit(&serde_json::to_string_pretty(&result.to_doc(&flat))?, None)
        }
        Command::Sweep {
            spec,
            preset,
            runs,
            seed,
            oracle,
            no_timing,
            workers,
            out,
        } => {
            let mut spec = match (spec, preset) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<SweepSpec>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(name)) => match SweepSpec::preset(&name) {
                    Some(s) => s,
                    None => bail!("unknown preset `{name}`; expected robots, tasks or variants"),
                },
                (None, None) => unreachable!("clap requires --spec or --preset"),
            };
            if let Some(r) = runs {
                spec.runs_per_point = r;
            }
            if let Some(s) = seed {
                spec.base.seed = s;
            }
            spec.oracle |= oracle;
            spec.timing &= !no_timing;
            let outcome = run_sweep(&spec, workers)?;
            outcome.write_csv_file(&out)?;
            eprintln!("wrote {} rows to {}", outcome.rows.len(), out.display());
            Ok(())
        }
        Command::Fixture { name } => match name.as_str() {
            "motivating" => emit(&motivating_example().to_json_string(), None),
            other => bail!("unknown fixture `{other}`; available: motivating"),
        },
    }
}
