//! Run configuration, orchestration and byte-stable output.

mod config;
pub mod format;
mod run;

pub use config::{
    config_hash, parse_config, ConfigErrors, DosParams, ExperimentKind, Lemma2Params, MartingaleParams,
    PositivityParams, RunConfig,
};
pub use run::{rerun, resolve_out_dir, run, write_atomic, OutputFile, RowFailure, RunManifest, MANIFEST_NAME};
