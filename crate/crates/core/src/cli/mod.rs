//! The `geomforge` command line: one JSON report per run on stdout, logs on
//! stderr, and the exit-code contract 0 ok, 2 check failed, 3 capacity or
//! overflow, 4 malformed input.

mod commands;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::build::BuildError;
use crate::cover::CoverError;
use crate::geom::GeomError;
use crate::local::LocalError;
use crate::natrep::NatRepError;
use crate::perm::PermError;

#[derive(Parser, Debug)]
#[command(name = "geomforge", version, about = "Diagram geometries over GF(2)")]
pub struct Cli {
    /// Worker threads for parallel kernels; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized procedures.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Require `PATH=VALUE` to hold in the results (dotted path, JSON value).
    #[arg(long = "expect", global = true, value_name = "PATH=VALUE")]
    pub expect: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Geometry JSON file.
    #[arg(long, conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Builtin construction: petersen, pg, sp, gq22, tilde, m22.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Parameter of pg and sp.
    #[arg(long)]
    pub n: Option<usize>,
    /// Group file acting on element indices, for `--input`.
    #[arg(long)]
    pub group: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a builtin geometry and optionally export it.
    Build {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The tilde geometry.
    Tilde {
        #[command(subcommand)]
        command: TildeCommand,
    },
    /// Check the geometry axioms.
    Verify(Source),
    /// Classify the rank-2 residues.
    Diagram(Source),
    /// Universal natural representations.
    Natrep {
        #[command(subcommand)]
        command: NatrepCommand,
    },
    /// Build a finite cover of a triangle complex.
    Cover {
        #[arg(long)]
        input: PathBuf,
        /// Words generating the subgroup of the fundamental group.
        #[arg(long)]
        subgroup: Vec<String>,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fundamental group and triangulability of a triangle complex.
    Pi1 {
        /// Triangle complex JSON; otherwise the collinearity complex of the source.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Todd-Coxeter coset enumeration.
    Tc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Local analysis of the derived graph.
    Local {
        #[command(subcommand)]
        command: LocalCommand,
    },
    /// The girth-5 local-action hypothesis on a derived graph.
    Hyp61 {
        #[command(flatten)]
        source: Source,
        /// Graph JSON file, instead of a geometry source.
        #[arg(long, requires = "group")]
        graph: Option<PathBuf>,
    },
    /// Time GF(2) rank on random square matrices.
    Bench {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TildeCommand {
    Build {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum NatrepCommand {
    Dim(Source),
}

#[derive(Subcommand, Debug)]
pub enum LocalCommand {
    /// Condition (*): |K_{n-1}| <= 2.
    Star(Source),
    /// Orders of the kernel series at a vertex.
    Kernels {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 2)]
        s_max: usize,
    },
    /// The projective space formed at a vertex.
    Space {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        vertex: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    CheckFailed,
    Capacity,
    BadInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 2,
            Status::Capacity => 3,
            Status::BadInput => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub path: String,
    pub expected: Value,
    pub actual: Option<Value>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<Value>,
    pub status: Status,
    pub elapsed_ms: u64,
    pub results: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expectations: Vec<Expectation>,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn bad_input(message: impl Into<String>) -> Self {
        CliError {
            status: Status::BadInput,
            message: message.into(),
        }
    }

    pub fn check_failed(message: impl Into<String>) -> Self {
        CliError {
            status: Status::CheckFailed,
            message: message.into(),
        }
    }

    pub fn capacity(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Capacity,
            message: message.into(),
        }
    }
}

impl From<PermError> for CliError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::Capacity { .. } => CliError::capacity(e.to_string()),
            PermError::OrderMismatch { .. } => CliError::check_failed(e.to_string()),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Capacity { .. } => CliError::capacity(e.to_string()),
            GeomError::Axiom(_) | GeomError::Precondition(_) => CliError::check_failed(e.to_string()),
            GeomError::Perm(p) => p.into(),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Capacity { .. } | BuildError::NotFound(_) => CliError::capacity(e.to_string()),
            BuildError::Construction(_) | BuildError::Precondition(_) | BuildError::Data(_) => {
                CliError::check_failed(e.to_string())
            }
            BuildError::Geom(g) => g.into(),
            BuildError::Perm(p) => p.into(),
            BuildError::Argument(_) => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<NatRepError> for CliError {
    fn from(e: NatRepError) -> Self {
        CliError::bad_input(e.to_string())
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Overflow(_) => CliError::capacity(e.to_string()),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<LocalError> for CliError {
    fn from(e: LocalError) -> Self {
        match e {
            LocalError::Geom(g) => g.into(),
            LocalError::Perm(p) => p.into(),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

/// What a command produced before expectations are applied.
pub struct Outcome {
    pub status: Status,
    pub results: Value,
}

impl Outcome {
    pub fn ok<T: Serialize>(results: T) -> Result<Self, CliError> {
        Ok(Outcome {
            status: Status::Ok,
            results: serde_json::to_value(results).expect("results serialize"),
        })
    }

    pub fn with_status<T: Serialize>(status: Status, results: T) -> Result<Self, CliError> {
        Ok(Outcome {
            status,
            results: serde_json::to_value(results).expect("results serialize"),
        })
    }
}

fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(value, |v, key| match v {
        Value::Object(map) => map.get(key),
        Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => None,
    })
}

fn check_expectations(specs: &[String], results: &Value) -> Result<Vec<Expectation>, CliError> {
    specs
        .iter()
        .map(|spec| {
            let (path, raw) = spec
                .split_once('=')
                .ok_or_else(|| CliError::bad_input(format!("--expect {spec:?} is not PATH=VALUE")))?;
            let expected = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            let actual = lookup(results, path).cloned();
            Ok(Expectation {
                path: path.to_string(),
                holds: actual.as_ref() == Some(&expected),
                expected,
                actual,
            })
        })
        .collect()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Tilde { .. } => "tilde build",
        Command::Verify(_) => "verify",
        Command::Diagram(_) => "diagram",
        Command::Natrep { .. } => "natrep dim",
        Command::Cover { .. } => "cover",
        Command::Pi1 { .. } => "pi1",
        Command::Tc { .. } => "tc",
        Command::Local { command } => match command {
            LocalCommand::Star(_) => "local star",
            LocalCommand::Kernels { .. } => "local kernels",
            LocalCommand::Space { .. } => "local space",
        },
        Command::Hyp61 { .. } => "hyp61",
        Command::Bench { .. } => "bench",
    }
}

pub fn render(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code with the report, or `None` when clap printed help or version.
pub fn run<I, T>(argv: I) -> (i32, Option<RunReport>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let start = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return (0, None);
            }
            eprint!("{}", e.render());
            let report = RunReport {
                command: String::new(),
                inputs: Vec::new(),
                status: Status::BadInput,
                elapsed_ms: start.elapsed().as_millis() as u64,
                results: serde_json::json!({ "error": e.kind().to_string() }),
                expectations: Vec::new(),
            };
            return (Status::BadInput.exit_code(), Some(report));
        }
    };
    let name = command_name(&cli.command).to_string();
    let mut inputs = Vec::new();
    let outcome = match cli.threads {
        Some(0) => Err(CliError::bad_input("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli, &mut inputs)),
            Err(e) => Err(CliError::bad_input(e.to_string())),
        },
        None => commands::dispatch(&cli, &mut inputs),
    };
    let (mut status, results) = match outcome {
        Ok(o) => (o.status, o.results),
        Err(e) => {
            eprintln!("geomforge {name}: {}", e.message);
            (e.status, serde_json::json!({ "error": e.message }))
        }
    };
    let expectations = if status == Status::Ok {
        match check_expectations(&cli.expect, &results) {
            Ok(list) => {
                if list.iter().any(|e| !e.holds) {
                    status = Status::CheckFailed;
                }
                list
            }
            Err(e) => {
                status = e.status;
                Vec::new()
            }
        }
    } else {
        Vec::new()
    };
    let report = RunReport {
        command: name,
        inputs,
        status,
        elapsed_ms: start.elapsed().as_millis() as u64,
        results,
        expectations,
    };
    (status.exit_code(), Some(report))
}
