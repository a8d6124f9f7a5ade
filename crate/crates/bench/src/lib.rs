//! Benchmark harness: seeded sweeps over generated instances with CSV output.

pub mod seed;
pub mod sweep;

pub use sweep::{run_sweep, InstanceRecord, SweepError, SweepOutcome, SweepRow, SweepSpec, SweptParameter};
