//! Configuration, sweeps and reports on top of `rpif-core`.

pub mod compare;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, Config, ConfigError, Diagnostic};
pub use sweep::{run_sweep, ResultRow, RunOptions, SweepOutcome};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const MODE_DISAGREEMENT: i32 = 3;
}
