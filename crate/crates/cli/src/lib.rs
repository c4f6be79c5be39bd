//! Job files, mesh export and the command-line front end for `simplex-core`.
//!
//! A job is a small JSON document naming a command and its payload;
//! [`run_job`] dispatches it and returns a [`JobResult`] whose status maps to
//! the process exit code (0 ok, 2 infeasible, 1 error).

pub mod job;
pub mod off;
pub mod run;

pub use job::{parse_job, parse_job_value, Command, Format, JobError, JobSpec, UnitTag};
pub use off::{export_off, parse_off, OffError, OffMesh};
pub use run::{run_job, Diagnostics, JobResult, Payload, Status};
pub use simplex_core::random_loop;

/// Renders a finished job in its requested format.
pub fn render(job: &JobSpec, result: &JobResult) -> Result<String, OffError> {
    match (job.format(), &result.realization) {
        (Format::Off, Some(r)) if result.status == Status::Ok => export_off(r),
        _ => Ok(result.to_json()),
    }
}
