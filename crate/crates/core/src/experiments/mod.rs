//! File formats, training entry point, bound checks and scaling sweeps.

pub mod io;
pub mod sweep;
pub mod train;
pub mod verify;

pub use io::{read_dataset, spec_path, write_dataset, SpecFile};
pub use sweep::{log_log_slope, resolve_jobs, run_sweep, SweepFamily, SweepRow, SweepSpec};
pub use train::{train, SolverKind, TrainConfig, TrainReport};
pub use verify::{all_mandatory_pass, run_check, Check, CheckRow};
