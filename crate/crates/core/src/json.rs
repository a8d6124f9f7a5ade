//! JSON encoding of [`Problem`].
//!
//! ```json
//! { "H": 4, "k": 2, "capability_costs": [1, 1, 1, 1],
//!   "robots": [{"id": 0, "capabilities": [1, 0, 0, 0]}],
//!   "tasks": [{"id": 0, "reward": 100, "configurations": [[1, 0, 0, 0]]}],
//!   "cost_model": {"kind": "linear", "coefficient": 4} }
//! ```
//!
//! `cost_model` may also be `{"kind": "zero"}` or
//! `{"kind": "table", "entries": [{"size": 2, "flat_task": 0, "cost": 1.5}]}`.
//! Errors carry a JSON pointer to the offending value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CapabilityVector, CostModel, Problem, Robot, Task, TaskConfiguration};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    #[serde(rename = "H")]
    h: usize,
    k: usize,
    capability_costs: Vec<f64>,
    robots: Vec<RobotDoc>,
    tasks: Vec<TaskDoc>,
    cost_model: CostModelDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotDoc {
    id: usize,
    capabilities: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskDoc {
    id: usize,
    reward: f64,
    configurations: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum CostModelDoc {
    Zero,
    Linear { coefficient: f64 },
    Table { entries: Vec<CostEntryDoc> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostEntryDoc {
    size: usize,
    flat_task: usize,
    cost: f64,
}

fn vector(values: Vec<f64>, pointer: String) -> Result<CapabilityVector> {
    for (h, v) in values.iter().enumerate() {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::invalid(
                format!("{pointer}/{h}"),
                format!("entries must be finite and >= 0, got {v}"),
            ));
        }
    }
    CapabilityVector::new(values)
}

impl ProblemDoc {
    fn into_problem(self) -> Result<Problem> {
        let capability_costs = vector(self.capability_costs, "/capability_costs".into())?;
        let robots = self
            .robots
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(Robot::new(
                    r.id,
                    vector(r.capabilities, format!("/robots/{i}/capabilities"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let tasks = self
            .tasks
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                let configs = t
                    .configurations
                    .into_iter()
                    .enumerate()
                    .map(|(l, c)| {
                        vector(c, format!("/tasks/{k}/configurations/{l}"))
                            .map(TaskConfiguration::new)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Task::new(t.id, t.reward, configs))
            })
            .collect::<Result<Vec<_>>>()?;
        let cost_model = match self.cost_model {
            CostModelDoc::Zero => CostModel::Zero,
            CostModelDoc::Linear { coefficient } => CostModel::Linear { coefficient },
            CostModelDoc::Table { entries } => {
                let mut table = BTreeMap::new();
                for (i, e) in entries.into_iter().enumerate() {
                    if table.insert((e.size, e.flat_task), e.cost).is_some() {
                        return Err(Error::invalid(
                            format!("/cost_model/entries/{i}"),
                            "duplicate (size, flat_task) key",
                        ));
                    }
                }
                CostModel::Table(table)
            }
        };
        Problem::new(self.h, robots, tasks, capability_costs, cost_model, self.k)
    }

    fn from_problem(p: &Problem) -> Self {
        ProblemDoc {
            h: p.num_capabilities(),
            k: p.max_coalition_size(),
            capability_costs: p.capability_costs().values().to_vec(),
            robots: p
                .robots()
                .iter()
                .map(|r| RobotDoc {
                    id: r.id,
                    capabilities: r.capabilities.values().to_vec(),
                })
                .collect(),
            tasks: p
                .tasks()
                .iter()
                .map(|t| TaskDoc {
                    id: t.id,
                    reward: t.reward,
                    configurations: t
                        .configurations
                        .iter()
                        .map(|c| c.requirements.values().to_vec())
                        .collect(),
                })
                .collect(),
            cost_model: match p.cost_model() {
                CostModel::Zero => CostModelDoc::Zero,
                CostModel::Linear { coefficient } => CostModelDoc::Linear {
                    coefficient: *coefficient,
                },
                CostModel::Table(table) => CostModelDoc::Table {
                    entries: table
                        .iter()
                        .map(|(&(size, flat_task), &cost)| CostEntryDoc {
                            size,
                            flat_task,
                            cost,
                        })
                        .collect(),
                },
            },
        }
    }
}

/// Converts a serde path (`tasks[0].reward`) to a JSON pointer (`/tasks/0/reward`).
fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

impl Problem {
    pub fn from_json_str(s: &str) -> Result<Problem> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let doc: ProblemDoc = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            pointer: pointer_of(e.path()),
            message: e.inner().to_string(),
        })?;
        doc.into_problem()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ProblemDoc::from_problem(self))
            .expect("problem documents always serialize")
    }
}
