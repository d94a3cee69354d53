//! Job files in, tables and JSON out.

pub mod job;
pub mod report;
pub mod run;

pub use job::{parse_job, Command, JobSpec};
pub use report::{error_json, exit_code, Report};
pub use run::{run, SUPPORTED_PRIMES};
