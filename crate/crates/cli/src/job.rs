//! Job documents.
//!
//! A job is a JSON object such as `{"command":"check","lengths":[3,4,5,6]}`.
//! Unknown fields are rejected. After parsing, `dimension`, `unit`,
//! `angles` and `format` are filled in where the command uses them, so
//! re-serializing a parsed job and parsing it again yields the same job.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use simplex_core::linalg::{MAX_DIM, MIN_DIM};
use simplex_core::Unit;

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid job field `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl JobError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        JobError::Validation {
            field: field.to_owned(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for JobError {
    fn from(e: serde_json::Error) -> Self {
        JobError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Check,
    Realize,
    Normals,
    Invert,
    Iterate,
    Random,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Realize => "realize",
            Command::Normals => "normals",
            Command::Invert => "invert",
            Command::Iterate => "iterate",
            Command::Random => "random",
        }
    }

    fn takes_lengths(self) -> bool {
        matches!(self, Command::Check | Command::Realize)
    }

    fn takes_loop(self) -> bool {
        matches!(self, Command::Normals | Command::Invert | Command::Iterate)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitTag {
    #[default]
    Normal,
    Facet,
}

impl From<UnitTag> for Unit {
    fn from(u: UnitTag) -> Unit {
        match u {
            UnitTag::Normal => Unit::Normal,
            UnitTag::Facet => Unit::Facet,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(default, rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_vectors: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, alias = "output_format", skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl JobSpec {
    /// Dimension n; always set on a parsed job.
    pub fn dim(&self) -> usize {
        self.dimension.unwrap_or(0)
    }

    pub fn unit(&self) -> Unit {
        self.unit.unwrap_or_default().into()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

pub fn parse_job(text: &str) -> Result<JobSpec, JobError> {
    let value: Value = serde_json::from_str(text)?;
    parse_job_value(value)
}

pub fn parse_job_value(value: Value) -> Result<JobSpec, JobError> {
    let job: JobSpec = serde_json::from_value(value)?;
    validate(job)
}

fn forbid<T>(field: &str, v: &Option<T>, cmd: Command) -> Result<(), JobError> {
    if v.is_some() {
        Err(JobError::invalid(
            field,
            format!("not accepted by `{}`", cmd.as_str()),
        ))
    } else {
        Ok(())
    }
}

fn validate(mut job: JobSpec) -> Result<JobSpec, JobError> {
    let cmd = job.command;
    let inferred = if cmd.takes_lengths() {
        forbid("loop", &job.loop_vectors, cmd)?;
        let lengths = job
            .lengths
            .as_ref()
            .ok_or_else(|| JobError::invalid("lengths", "required"))?;
        if let Some((i, z)) = lengths
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.is_finite() && **z > 0.0))
        {
            return Err(JobError::invalid(
                "lengths",
                format!("entry {i} must be positive and finite, got {z}"),
            ));
        }
        Some(lengths.len().saturating_sub(1))
    } else if cmd.takes_loop() {
        forbid("lengths", &job.lengths, cmd)?;
        let vectors = job
            .loop_vectors
            .as_ref()
            .ok_or_else(|| JobError::invalid("loop", "required"))?;
        let n = vectors.len().saturating_sub(1);
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(JobError::invalid(
                "loop",
                format!("vector {i} has {} coordinates, expected {n}", v.len()),
            ));
        }
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(JobError::invalid("loop", "coordinates must be finite"));
        }
        Some(n)
    } else {
        forbid("lengths", &job.lengths, cmd)?;
        forbid("loop", &job.loop_vectors, cmd)?;
        None
    };

    let n = match (job.dimension, inferred) {
        (Some(d), Some(i)) if d != i => {
            return Err(JobError::invalid(
                "dimension",
                format!("{d} does not match payload dimension {i}"),
            ))
        }
        (Some(d), _) => d,
        (None, Some(i)) => i,
        (None, None) => return Err(JobError::invalid("dimension", "required")),
    };
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(JobError::invalid(
            "dimension",
            format!("{n} outside supported range {MIN_DIM}..={MAX_DIM}"),
        ));
    }
    job.dimension = Some(n);

    match cmd {
        Command::Realize => {
            let angles = job
                .angles
                .get_or_insert_with(|| vec![std::f64::consts::FRAC_PI_2; n - 2]);
            if angles.len() != n - 2 {
                return Err(JobError::invalid(
                    "angles",
                    format!("expected {} values, got {}", n - 2, angles.len()),
                ));
            }
        }
        _ => forbid("angles", &job.angles, cmd)?,
    }
    if matches!(cmd, Command::Check | Command::Realize) {
        job.unit.get_or_insert_default();
    } else {
        forbid("unit", &job.unit, cmd)?;
    }
    match cmd {
        Command::Random => {
            job.seed.get_or_insert(0);
        }
        Command::Realize => {}
        _ => forbid("seed", &job.seed, cmd)?,
    }
    let format = *job.format.get_or_insert_default();
    if format == Format::Off && cmd != Command::Realize {
        return Err(JobError::invalid("format", "off output is only produced by `realize`"));
    }
    Ok(job)
}
