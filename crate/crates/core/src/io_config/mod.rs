//! Configuration files, initial data and binary snapshots.

mod config;
mod initial;
mod snapshot;

pub use config::{
    parse_config, parse_config_bytes, ConfigError, ConfigErrors, DiagnosticsConfig, InitialConfig,
    RunConfig, SimulationConfig, StressKind, VelocityKind,
};
pub use initial::{build_initial, random_smooth};
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, snapshot_len, write_snapshot, SnapshotError,
    SNAPSHOT_VERSION,
};
