use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};
use simplex_forge::{parse_job_value, render, run_job, Command, JobResult};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Check,
    Realize,
    Normals,
    Invert,
    Iterate,
    Random,
}

impl Cmd {
    fn name(self) -> &'static str {
        command_of(self).as_str()
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnitArg {
    Normal,
    Facet,
}

/// Check, realize and invert simplex facet volumes.
///
/// Reads a JSON job from --input or stdin and writes the result to
/// --output or stdout. Flags override the corresponding job fields.
#[derive(Debug, Parser)]
#[command(name = "simplex-forge", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    unit: Option<UnitArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dihedral angles alpha_2,alpha_3,... in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    #[arg(long)]
    dimension: Option<usize>,
}

fn read_input(path: &Option<PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None if io::stdin().is_terminal() => Ok(String::new()),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn job_document(cli: &Cli, text: &str) -> Result<Value, String> {
    let mut doc: Map<String, Value> = if text.trim().is_empty() {
        Map::new()
    } else {
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err("job document must be a JSON object".into()),
            Err(e) => {
                return Err(format!(
                    "parse error at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ))
            }
        }
    };
    let name = cli.command.name();
    match doc.get("command") {
        Some(Value::String(c)) if c != name => {
            return Err(format!(
                "invalid job field `command`: document says `{c}` but `{name}` was requested"
            ))
        }
        _ => {
            doc.insert("command".into(), json!(name));
        }
    }
    if let Some(f) = cli.format {
        let v = match f {
            FormatArg::Json => "json",
            FormatArg::Off => "off",
        };
        doc.insert("format".into(), json!(v));
    }
    if let Some(u) = cli.unit {
        let v = match u {
            UnitArg::Normal => "normal",
            UnitArg::Facet => "facet",
        };
        doc.insert("unit".into(), json!(v));
    }
    if let Some(s) = cli.seed {
        doc.insert("seed".into(), json!(s));
    }
    if let Some(a) = &cli.angles {
        doc.insert("angles".into(), json!(a));
    }
    if let Some(d) = cli.dimension {
        doc.insert("dimension".into(), json!(d));
    }
    Ok(Value::Object(doc))
}

fn command_of(c: Cmd) -> Command {
    match c {
        Cmd::Check => Command::Check,
        Cmd::Realize => Command::Realize,
        Cmd::Normals => Command::Normals,
        Cmd::Invert => Command::Invert,
        Cmd::Iterate => Command::Iterate,
        Cmd::Random => Command::Random,
    }
}

fn execute(cli: &Cli) -> (String, i32) {
    let failed = |msg: String| {
        let r = JobResult::error(command_of(cli.command), msg);
        (r.to_json(), r.status.exit_code())
    };
    let text = match read_input(&cli.input) {
        Ok(t) => t,
        Err(e) => return failed(format!("cannot read input: {e}")),
    };
    let doc = match job_document(cli, &text) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let job = match parse_job_value(doc) {
        Ok(j) => j,
        Err(e) => return failed(e.to_string()),
    };
    let result = run_job(&job);
    match render(&job, &result) {
        Ok(out) => (out, result.status.exit_code()),
        Err(e) => failed(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = execute(&cli);
    let written = match &cli.output {
        Some(p) => fs::write(p, out.as_bytes()),
        None => io::stdout().write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("simplex-forge: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
