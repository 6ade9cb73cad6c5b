//! Experiment harness around `thors-core`: CSV ingestion, synthetic
//! benchmark profiles, the repeated split/train/threshold protocol,
//! validation-size curves and Monte-Carlo checks of the cost guarantees.

pub mod config;
pub mod curve;
mod error;
pub mod experiment;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod split;
pub mod synthetic;
pub mod verify;

pub use config::{ExperimentConfig, Method, Overrides};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, run_round, ExperimentOutput, RoundResult, SummaryTable};
pub use thors_core as core;
