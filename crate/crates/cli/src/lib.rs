//! Job parsing, dispatch and report rendering for the `qf2` binary.

pub mod error;
pub mod job;
pub mod render;
pub mod run;

pub use error::CliError;
pub use job::{parse_job, parse_job_with, Command, FieldSpec, FormSpec, JobSpec, Overrides};
pub use render::render_text;
pub use run::{error_report, run_job, Report, RunOptions};
