//! Command-line front end: loads a scenario file, applies `--set`
//! overrides, validates, runs and writes every output document atomically.
//!
//! Exit codes: 0 success, 1 computation or I/O failure (names the stage),
//! 2 configuration failure (names the key path).

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use superres_core::scenario::{Mode, OutputFile, RunConfig, RunOutput};

pub use superres_core::scenario;

#[derive(Debug, Parser)]
#[command(name = "superres", version, about = "Two-photon phase super-resolution simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical pulse → Michelson → sum-frequency → bandpass → detector scans.
    SimulateClassical(RunArgs),
    /// Photon-pair coincidence scans.
    SimulateQuantum(RunArgs),
    /// Fringe metrics, envelope widths, ratios and calibration of CSV inputs.
    Analyze(RunArgs),
    /// Classical vs quantum comparison on a common phase axis.
    Compare(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file (TOML, or JSON by extension).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Override a key, e.g. `--set filter.bandwidth_nm=0.093` or
    /// `--set scan.window[1].step_nm=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory; defaults to `output.dir` of the scenario.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn mode(&self) -> Mode {
        match self {
            Command::SimulateClassical(_) => Mode::SimulateClassical,
            Command::SimulateQuantum(_) => Mode::SimulateQuantum,
            Command::Analyze(_) => Mode::Analyze,
            Command::Compare(_) => Mode::Compare,
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::SimulateClassical(a) | Command::SimulateQuantum(a) | Command::Analyze(a) | Command::Compare(a) => a,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable or invalid configuration.
    Config { path: String, message: String },
    /// A pipeline stage failed.
    Compute { stage: String, message: String },
}

impl CliError {
    fn config(path: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Config { path: path.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Compute { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { path, message } => write!(f, "invalid configuration at `{path}`: {message}"),
            CliError::Compute { stage, message } => write!(f, "stage `{stage}` failed: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

/// One step of a dotted override key: `name` or `name[index]`.
enum Segment<'a> {
    Key(&'a str),
    Index(usize),
}

fn parse_key(key: &str) -> Option<Vec<Segment<'_>>> {
    let mut out = Vec::new();
    for part in key.split('.') {
        let (name, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if name.is_empty() {
            return None;
        }
        out.push(Segment::Key(name));
        while !rest.is_empty() {
            let close = rest.find(']')?;
            if !rest.starts_with('[') {
                return None;
            }
            out.push(Segment::Index(rest[1..close].parse().ok()?));
            rest = &rest[close + 1..];
        }
    }
    Some(out)
}

/// Interprets an override value as a TOML value (`0.093`, `true`,
/// `"text"`, `[1, 2]`); anything else is taken as a bare string.
fn parse_value(raw: &str) -> Value {
    #[derive(serde::Deserialize)]
    struct Holder {
        v: toml::Value,
    }
    match toml::from_str::<Holder>(&format!("v = {raw}")) {
        Ok(h) => serde_json::to_value(h.v).unwrap_or_else(|_| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Applies one `key=value` override to a JSON document.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::config(assignment, "override must have the form key=value"))?;
    let key = key.trim();
    let segments = parse_key(key).ok_or_else(|| CliError::config(key, "malformed override key"))?;
    let mut node = doc;
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        node = match seg {
            Segment::Key(name) => {
                let map = match node {
                    Value::Object(map) => map,
                    Value::Null => {
                        *node = Value::Object(Default::default());
                        node.as_object_mut().expect("just created")
                    }
                    _ => return Err(CliError::config(key, format!("`{name}` is inside a non-table value"))),
                };
                if last {
                    map.insert(name.to_string(), parse_value(raw.trim()));
                    return Ok(());
                }
                map.entry(name.to_string()).or_insert(Value::Null)
            }
            Segment::Index(index) => {
                if node.is_null() {
                    *node = Value::Array(Vec::new());
                }
                let Value::Array(items) = node else {
                    return Err(CliError::config(key, "index applied to a non-array value"));
                };
                if *index > items.len() {
                    return Err(CliError::config(key, format!("index {index} skips entries (array has {})", items.len())));
                }
                if *index == items.len() {
                    items.push(Value::Null);
                }
                if last {
                    items[*index] = parse_value(raw.trim());
                    return Ok(());
                }
                &mut items[*index]
            }
        };
    }
    Ok(())
}

/// Reads a scenario document into JSON form (TOML unless the extension is
/// `.json`).
pub fn read_document(path: &Path) -> Result<Value, CliError> {
    let where_ = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(&where_, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::config(&where_, e))
    } else {
        let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::config(&where_, e))?;
        serde_json::to_value(table).map_err(|e| CliError::config(&where_, e))
    }
}

/// Deserializes a document, reporting the key path of the first problem.
pub fn parse_config(doc: Value) -> Result<RunConfig, CliError> {
    serde_path_to_error::deserialize::<_, RunConfig>(doc)
        .map_err(|err| CliError::config(err.path().to_string(), err.inner()))
}

/// Loads, overrides and deserializes a scenario file.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut doc = read_document(path)?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    parse_config(doc)
}

/// Writes all files or none: each is staged as a temporary file in `dir`
/// and renamed into place only after every one was written.
pub fn write_atomically(dir: &Path, files: &[OutputFile]) -> Result<Vec<PathBuf>, CliError> {
    let io = |stage: &str, e: &dyn fmt::Display| CliError::Compute { stage: stage.into(), message: e.to_string() };
    std::fs::create_dir_all(dir).map_err(|e| io("create output directory", &e))?;
    let mut staged = Vec::with_capacity(files.len());
    for file in files {
        let mut tmp = tempfile::Builder::new()
            .prefix(&format!(".{}.", file.name))
            .suffix(".tmp")
            .tempfile_in(dir)
            .map_err(|e| io("write output", &e))?;
        tmp.write_all(&file.contents).map_err(|e| io("write output", &e))?;
        tmp.as_file().sync_all().map_err(|e| io("write output", &e))?;
        staged.push((tmp, dir.join(&file.name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| io("write output", &e.error))?;
        written.push(target);
    }
    Ok(written)
}

/// Result of a successful run.
#[derive(Debug)]
pub struct Summary {
    pub output: RunOutput,
    pub written: Vec<PathBuf>,
}

/// Loads, validates and runs one command; nothing is written unless every
/// stage succeeded.
pub fn run(command: &Command) -> Result<Summary, CliError> {
    let args = command.args();
    let config = load_config(&args.config, &args.overrides)?;
    let base = args.config.parent().map(Path::to_path_buf).unwrap_or_default();
    let plan = config
        .plan(command.mode(), &base)
        .map_err(|e| CliError::Config { path: e.path, message: e.message })?;
    let output = plan
        .execute()
        .map_err(|e| CliError::Compute { stage: e.stage, message: e.error.to_string() })?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from(&plan.config().output.dir));
    let written = write_atomically(&dir, &output.files)?;
    Ok(Summary { output, written })
}
