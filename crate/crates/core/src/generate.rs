//! Seeded random instances and the built-in resource-contention fixture.
//!
//! Draw order for [`generate`], all from one `ChaCha8Rng` seeded with
//! `params.seed`:
//!
//! 1. capability costs, one uniform draw per index;
//! 2. robots in id order, each capability index drawing presence then value;
//! 3. tasks in id order: reward, configuration count, then every
//!    configuration's requirements as for robots.
//!
//! Absent capabilities consume no value draw.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CapabilityVector, CostModel, Problem, Robot, Task, TaskConfiguration};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub num_robots: usize,
    pub num_tasks: usize,
    pub max_configs_per_task: usize,
    #[serde(rename = "H")]
    pub h: usize,
    /// Coalition size cap; clamped to `num_robots`.
    pub k: usize,
    pub capability_presence_prob: f64,
    pub capability_range: [f64; 2],
    pub cost_range: [f64; 2],
    pub reward_range: [f64; 2],
    pub cost_coefficient: f64,
    /// Draw capability values as integers in the range instead of reals.
    pub integer_capabilities: bool,
    /// Give every task exactly `max_configs_per_task` configurations.
    pub fixed_config_count: bool,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            num_robots: 8,
            num_tasks: 10,
            max_configs_per_task: 5,
            h: 7,
            k: 5,
            capability_presence_prob: 0.5,
            capability_range: [0.0, 8.0],
            cost_range: [0.0, 1.0],
            reward_range: [100.0, 200.0],
            cost_coefficient: 4.0,
            integer_capabilities: false,
            fixed_config_count: false,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let count = |name: &str, v: usize| {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::invalid(format!("/{name}"), "must be at least 1"))
            }
        };
        count("num_robots", self.num_robots)?;
        count("num_tasks", self.num_tasks)?;
        count("max_configs_per_task", self.max_configs_per_task)?;
        count("H", self.h)?;
        count("k", self.k)?;
        if self.num_robots > crate::model::MAX_ROBOTS {
            return Err(Error::invalid("/num_robots", "too many robots"));
        }
        let p = self.capability_presence_prob;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(
                "/capability_presence_prob",
                "probability must be in [0, 1]",
            ));
        }
        let ranges = [
            ("capability_range", self.capability_range, 0.0),
            ("cost_range", self.cost_range, 0.0),
            ("reward_range", self.reward_range, f64::MIN_POSITIVE),
        ];
        for (name, [lo, hi], floor) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= floor) {
                return Err(Error::invalid(
                    format!("/{name}"),
                    format!("need finite lo <= hi with lo >= {floor}, got [{lo}, {hi}]"),
                ));
            }
        }
        if self.integer_capabilities
            && self.capability_range[0].ceil() > self.capability_range[1].floor()
        {
            return Err(Error::invalid(
                "/capability_range",
                "range holds no integer for integer_capabilities",
            ));
        }
        if !(self.cost_coefficient.is_finite() && self.cost_coefficient >= 0.0) {
            return Err(Error::invalid("/cost_coefficient", "must be finite and >= 0"));
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

fn capability_vector(rng: &mut ChaCha8Rng, params: &GenParams) -> CapabilityVector {
    let values = (0..params.h)
        .map(|_| {
            if !rng.gen_bool(params.capability_presence_prob) {
                return 0.0;
            }
            if params.integer_capabilities {
                let [lo, hi] = params.capability_range;
                rng.gen_range(lo.ceil() as i64..=hi.floor() as i64) as f64
            } else {
                uniform(rng, params.capability_range)
            }
        })
        .collect();
    CapabilityVector::new(values).expect("validated ranges are non-negative")
}

/// Random problem following `params`; identical params give identical problems.
pub fn generate(params: &GenParams) -> Result<Problem> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let costs = (0..params.h)
        .map(|_| uniform(&mut rng, params.cost_range))
        .collect();
    let costs = CapabilityVector::new(costs)?;
    let robots = (0..params.num_robots)
        .map(|id| Robot::new(id, capability_vector(&mut rng, params)))
        .collect();
    let tasks = (0..params.num_tasks)
        .map(|id| {
            let reward = uniform(&mut rng, params.reward_range);
            let count = if params.fixed_config_count {
                params.max_configs_per_task
            } else {
                rng.gen_range(1..=params.max_configs_per_task)
            };
            let configs = (0..count)
                .map(|_| TaskConfiguration::new(capability_vector(&mut rng, params)))
                .collect();
            Task::new(id, reward, configs)
        })
        .collect();
    Problem::new(
        params.h,
        robots,
        tasks,
        costs,
        CostModel::Linear {
            coefficient: params.cost_coefficient,
        },
        params.k.min(params.num_robots),
    )
}

/// Two tasks with two variants each where the highest-utility first pick
/// blocks the second task.
///
/// Requirements (4 capabilities): task 0 needs `(2,0,0,0)` or `(1,1,0,1)`,
/// task 1 needs `(1,1,1,0)` or `(1,1,0,1)`. Robots 0 and 1 carry only
/// `(1,0,0,0)`; robots 2 to 4 carry `(0,1,1,1)`. Both rewards are 100, every
/// capability costs 1 per unit, coordination is free and `k = 5`.
pub fn motivating_example() -> Problem {
    let caps = |v: [f64; 4]| CapabilityVector::new(v.to_vec()).expect("fixture is non-negative");
    let robots = vec![
        Robot::new(0, caps([1.0, 0.0, 0.0, 0.0])),
        Robot::new(1, caps([1.0, 0.0, 0.0, 0.0])),
        Robot::new(2, caps([0.0, 1.0, 1.0, 1.0])),
        Robot::new(3, caps([0.0, 1.0, 1.0, 1.0])),
        Robot::new(4, caps([0.0, 1.0, 1.0, 1.0])),
    ];
    let config = |v| TaskConfiguration::new(caps(v));
    let tasks = vec![
        Task::new(
            0,
            100.0,
            vec![config([2.0, 0.0, 0.0, 0.0]), config([1.0, 1.0, 0.0, 1.0])],
        ),
        Task::new(
            1,
            100.0,
            vec![config([1.0, 1.0, 1.0, 0.0]), config([1.0, 1.0, 0.0, 1.0])],
        ),
    ];
    Problem::new(4, robots, tasks, caps([1.0; 4]), CostModel::Zero, 5)
        .expect("fixture satisfies problem invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_protocol() {
        let p = generate(&GenParams {
            seed: 3,
            ..GenParams::default()
        })
        .unwrap();
        assert_eq!(p.num_capabilities(), 7);
        assert_eq!(p.max_coalition_size(), 5);
        assert_eq!(p.robots().len(), 8);
        assert_eq!(p.tasks().len(), 10);
        assert_eq!(p.cost_model(), &CostModel::Linear { coefficient: 4.0 });
        for t in p.tasks() {
            assert!((100.0..=200.0).contains(&t.reward));
            assert!((1..=5).contains(&t.configurations.len()));
        }
        assert!(p
            .capability_costs()
            .values()
            .iter()
            .all(|w| (0.0..=1.0).contains(w)));
    }

    #[test]
    fn zero_presence_gives_zero_vectors() {
        let p = generate(&GenParams {
            capability_presence_prob: 0.0,
            num_robots: 3,
            num_tasks: 3,
            k: 2,
            ..GenParams::default()
        })
        .unwrap();
        assert!(p
            .robots()
            .iter()
            .all(|r| r.capabilities.values().iter().all(|&v| v == 0.0)));
        for c in p.enumerate_coalitions() {
            for t in p.tasks() {
                for cfg in &t.configurations {
                    assert!(p.satisfies(&c, cfg).unwrap());
                }
            }
        }
    }

    #[test]
    fn same_seed_same_json() {
        let params = GenParams {
            seed: 42,
            ..GenParams::default()
        };
        let a = generate(&params).unwrap().to_json_string();
        let b = generate(&params).unwrap().to_json_string();
        assert_eq!(a, b);
        let c = generate(&GenParams { seed: 43, ..params }).unwrap().to_json_string();
        assert_ne!(a, c);
    }

    #[test]
    fn k_is_clamped_to_roster() {
        let p = generate(&GenParams {
            num_robots: 4,
            ..GenParams::default()
        })
        .unwrap();
        assert_eq!(p.max_coalition_size(), 4);
    }

    #[test]
    fn integer_and_fixed_count_modes() {
        let p = generate(&GenParams {
            integer_capabilities: true,
            fixed_config_count: true,
            max_configs_per_task: 3,
            ..GenParams::default()
        })
        .unwrap();
        assert!(p.tasks().iter().all(|t| t.configurations.len() == 3));
        assert!(p
            .robots()
            .iter()
            .flat_map(|r| r.capabilities.values())
            .all(|v| v.fract() == 0.0 && (0.0..=8.0).contains(v)));
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            GenParams {
                num_robots: 0,
                ..GenParams::default()
            },
            GenParams {
                capability_presence_prob: 1.5,
                ..GenParams::default()
            },
            GenParams {
                reward_range: [200.0, 100.0],
                ..GenParams::default()
            },
            GenParams {
                reward_range: [0.0, 100.0],
                ..GenParams::default()
            },
        ];
        for p in bad {
            assert!(matches!(generate(&p), Err(Error::InvalidInput { .. })));
        }
    }

    #[test]
    fn fixture_shape() {
        let p = motivating_example();
        assert_eq!(p.num_capabilities(), 4);
        assert_eq!(p.tasks().len(), 2);
        assert_eq!(p.num_flat_tasks(), 4);
        assert_eq!(p.max_coalition_size(), 5);
    }
}
