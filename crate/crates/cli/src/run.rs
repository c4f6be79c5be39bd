//! Job dispatch and result documents.

use serde::Serialize;
use simplex_core::linalg::{VecN, REL_TOL};
use simplex_core::loops::facet_scale;
use simplex_core::{
    check_inequalities, classify, facet_normals, invert_facet_map, make_loop, random_loop,
    realize_simplex, similarity_iterate, Error, LoopN, RealizationResult, ReductionPolicy, Role,
    VolumeSpec,
};

use crate::job::{Command, JobSpec};

/// Length error above which a realization is reported as an error.
pub const LENGTH_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Infeasible,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
            Status::Error => 1,
        }
    }
}

type Vectors = Vec<Vec<f64>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Feasibility {
        feasible: bool,
        margin: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        violating_index: Option<usize>,
    },
    Realization {
        vertices: Vectors,
        facet_loop: Vectors,
        det_vertex: f64,
        facet_lengths: Vec<f64>,
    },
    Facets {
        facet_loop: Vectors,
        facet_lengths: Vec<f64>,
    },
    Vertices {
        vertices: Vectors,
    },
    Similarity {
        kappa: f64,
        residual: f64,
        similar: Vectors,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_vertex: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_facet: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round_trip_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobResult {
    pub status: Status,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    pub diagnostics: Diagnostics,
    /// Full realization, kept for mesh export.
    #[serde(skip)]
    pub realization: Option<RealizationResult>,
}

impl JobResult {
    fn ok(command: Command, payload: Payload, diagnostics: Diagnostics) -> Self {
        JobResult {
            status: Status::Ok,
            command,
            message: None,
            payload: Some(payload),
            diagnostics,
            realization: None,
        }
    }

    pub fn error(command: Command, message: impl Into<String>) -> Self {
        JobResult {
            status: Status::Error,
            command,
            message: Some(message.into()),
            payload: None,
            diagnostics: Diagnostics::default(),
            realization: None,
        }
    }

    fn from_core_error(command: Command, e: Error) -> Self {
        let mut r = Self::error(command, e.to_string());
        if let Error::InfeasibleInput { margin, .. } = e {
            r.status = Status::Infeasible;
            r.diagnostics.margin = Some(margin);
        }
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results always serialize");
        s.push('\n');
        s
    }
}

fn vectors_of(l: &LoopN) -> Vectors {
    l.vectors().iter().map(|v| v.coords().to_vec()).collect()
}

fn loop_from_job(job: &JobSpec, role: Role) -> Result<LoopN, Error> {
    let vs = job
        .loop_vectors
        .as_deref()
        .unwrap_or_default()
        .iter()
        .map(|c| VecN::new(c.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    make_loop(vs, role)
}

fn volume_spec(job: &JobSpec) -> VolumeSpec {
    let mut spec = VolumeSpec::new(job.lengths.clone().unwrap_or_default()).with_unit(job.unit());
    if let Some(angles) = &job.angles {
        spec = spec.with_angles(angles.clone());
    }
    if let Some(seed) = job.seed {
        spec = spec.with_reduction(ReductionPolicy::Uniform { seed });
    }
    spec
}

/// Runs a validated job. Library errors become `error` or `infeasible`
/// results rather than Rust errors.
pub fn run_job(job: &JobSpec) -> JobResult {
    let cmd = job.command;
    let out = match cmd {
        Command::Check => run_check(job),
        Command::Realize => run_realize(job),
        Command::Normals => run_normals(job),
        Command::Invert => run_invert(job),
        Command::Iterate => run_iterate(job),
        Command::Random => run_random(job),
    };
    out.unwrap_or_else(|e| JobResult::from_core_error(cmd, e))
}

fn run_check(job: &JobSpec) -> Result<JobResult, Error> {
    let report = check_inequalities(job.lengths.as_deref().unwrap_or_default())?;
    let mut r = JobResult::ok(
        Command::Check,
        Payload::Feasibility {
            feasible: report.feasible,
            margin: report.margin,
            violating_index: report.violating_index,
        },
        Diagnostics {
            margin: Some(report.margin),
            ..Diagnostics::default()
        },
    );
    if !report.feasible {
        r.status = Status::Infeasible;
    }
    Ok(r)
}

fn run_realize(job: &JobSpec) -> Result<JobResult, Error> {
    let spec = volume_spec(job);
    let report = check_inequalities(&spec.lengths)?;
    let margin = report.margin;
    if !report.feasible {
        return Err(Error::InfeasibleInput {
            margin,
            index: report.violating_index.unwrap_or(0),
        });
    }
    let result = realize_simplex(&spec)?;
    let res = result.residuals;
    let mut r = JobResult::ok(
        Command::Realize,
        Payload::Realization {
            vertices: vectors_of(&result.vertices),
            facet_loop: vectors_of(&result.facet_loop),
            det_vertex: result.det_vertex,
            facet_lengths: result.facet_lengths.clone(),
        },
        Diagnostics {
            margin: Some(margin),
            det_vertex: Some(result.det_vertex),
            det_facet: Some(result.facet_loop.det_main()),
            closure_defect: Some(res.closure_defect),
            max_length_error: Some(res.max_length_error),
            round_trip_error: Some(res.round_trip_error),
            ..Diagnostics::default()
        },
    );
    if !(res.max_length_error <= LENGTH_TOL && res.closure_defect <= REL_TOL) {
        r.status = Status::Error;
        r.message = Some(format!(
            "residuals above tolerance (length {:e}, closure {:e})",
            res.max_length_error, res.closure_defect
        ));
    }
    r.realization = Some(result);
    Ok(r)
}

fn run_normals(job: &JobSpec) -> Result<JobResult, Error> {
    let v = loop_from_job(job, Role::Vertex)?;
    let z = facet_normals(&v);
    let scale = facet_scale(&v);
    let mut r = JobResult::ok(
        Command::Normals,
        Payload::Facets {
            facet_loop: vectors_of(&z),
            facet_lengths: z.norms(),
        },
        Diagnostics {
            det_vertex: Some(v.det_main()),
            det_facet: Some(z.det_main()),
            closure_defect: Some(z.closure_defect()),
            scale: Some(scale),
            ..Diagnostics::default()
        },
    );
    if z.closure_defect() > REL_TOL * scale {
        r.status = Status::Error;
        r.message = Some("facet loop does not close within tolerance".into());
    }
    Ok(r)
}

fn run_invert(job: &JobSpec) -> Result<JobResult, Error> {
    let z = loop_from_job(job, Role::Facet)?;
    let v = invert_facet_map(&z)?;
    let round_trip = facet_normals(&v).max_abs_diff(&z) / z.max_abs();
    Ok(JobResult::ok(
        Command::Invert,
        Payload::Vertices {
            vertices: vectors_of(&v),
        },
        Diagnostics {
            det_vertex: Some(v.det_main()),
            det_facet: Some(z.det_main()),
            round_trip_error: Some(round_trip),
            ..Diagnostics::default()
        },
    ))
}

fn run_iterate(job: &JobSpec) -> Result<JobResult, Error> {
    let v = loop_from_job(job, Role::Vertex)?;
    let (similar, report) = similarity_iterate(&v);
    let mut r = JobResult::ok(
        Command::Iterate,
        Payload::Similarity {
            kappa: report.kappa,
            residual: report.residual,
            similar: vectors_of(&similar),
        },
        Diagnostics {
            det_vertex: Some(v.det_main()),
            scale: Some(report.scale),
            ..Diagnostics::default()
        },
    );
    if !report.within(REL_TOL) {
        r.status = Status::Error;
        r.message = Some("iteration residual above tolerance".into());
    }
    Ok(r)
}

fn run_random(job: &JobSpec) -> Result<JobResult, Error> {
    let v = random_loop(job.dim(), job.seed.unwrap_or(0))?;
    let class = classify(&v);
    Ok(JobResult::ok(
        Command::Random,
        Payload::Vertices {
            vertices: vectors_of(&v),
        },
        Diagnostics {
            det_vertex: Some(class.det_main),
            ..Diagnostics::default()
        },
    ))
}
