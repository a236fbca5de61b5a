//! Library side of the `gcoh` binary: argument model, document loading,
//! command dispatch and report rendering.

mod args;
mod commands;
mod render;
mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gcoh_core::parser::{parse_document_with, parse_rational, Document, ParseOptions};
use gcoh_core::{AlgebraError, Field, ParseError};
use serde::Serialize;
use thiserror::Error;

pub use args::{Cli, CommandArgs};

pub const DEFAULT_MAX_DEGREE: u32 = 10;
pub const DEFAULT_HOM_BOUND: usize = 3;
pub const DEFAULT_VERIFY_PRIME: u32 = 2_147_483_629;
const DEFAULT_VERIFY_PRIME_STR: &str = "2147483629";
pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Nf,
    Basis,
    Hilbert,
    Ann,
    Syzygy,
    Betti,
    Extension,
    Criterion,
    Twist,
    VerifyPaper,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Nf => "nf",
            Command::Basis => "basis",
            Command::Hilbert => "hilbert",
            Command::Ann => "ann",
            Command::Syzygy => "syzygy",
            Command::Betti => "betti",
            Command::Extension => "extension",
            Command::Criterion => "criterion",
            Command::Twist => "twist",
            Command::VerifyPaper => "verify-paper",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// A fully parsed invocation. `None` bounds fall back to the job block of the
/// input, then to the crate defaults.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub max_degree: Option<u32>,
    pub homological_bound: Option<usize>,
    pub field: Option<Field>,
    pub format: Format,
    pub verify_prime: Option<u32>,
    pub exprs: Vec<String>,
    pub algebra: Option<String>,
    pub ideal: Option<String>,
    pub twist: Option<String>,
    pub job: Option<String>,
    pub side: gcoh_core::Side,
    pub params: BTreeMap<String, String>,
    pub fail_on_witness: bool,
    pub battery_limit: Option<usize>,
    pub strict_vanishing: bool,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            command,
            inputs: Vec::new(),
            max_degree: None,
            homological_bound: None,
            field: None,
            format: Format::Text,
            verify_prime: None,
            exprs: Vec::new(),
            algebra: None,
            ideal: None,
            twist: None,
            job: None,
            side: gcoh_core::Side::Left,
            params: BTreeMap::new(),
            fail_on_witness: false,
            battery_limit: None,
            strict_vanishing: false,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.max_degree {
            if d < 2 {
                return Err(CliError::Usage(format!("--max-degree must be at least 2, got {d}")));
            }
        }
        if self.homological_bound == Some(0) {
            return Err(CliError::Usage("--hom-bound must be positive".into()));
        }
        if self.battery_limit == Some(0) {
            return Err(CliError::Usage("--battery-limit must be positive".into()));
        }
        if let Some(p) = self.verify_prime {
            Field::prime(p).map_err(|e| CliError::Usage(format!("--verify-prime: {e}")))?;
        }
        let needs_input = self.command != Command::VerifyPaper;
        if needs_input && self.inputs.is_empty() {
            return Err(CliError::Usage(format!(
                "`{}` needs at least one input file",
                self.command.name()
            )));
        }
        if !needs_input && !self.inputs.is_empty() {
            return Err(CliError::Usage(
                "`verify-paper` uses built-in fixtures and takes no input".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{context}: {source}")]
    Algebra { context: String, source: AlgebraError },
}

impl CliError {
    fn algebra(context: impl Into<String>) -> impl FnOnce(AlgebraError) -> CliError {
        let context = context.into();
        move |source| CliError::Algebra { context, source }
    }
}

/// `QQ` or `GF(p)`.
pub fn parse_field(text: &str) -> Result<Field, String> {
    let t = text.trim();
    if t == "QQ" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("unknown field `{t}`; use QQ or GF(p)"))?;
    let p: u32 = p.trim().parse().map_err(|_| format!("`{p}` is not a modulus"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

/// `name=value` with a rational value.
pub fn parse_param(text: &str) -> Result<(String, String), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("`{text}` is not of the form name=value"))?;
    parse_rational(value.trim()).map_err(|e| format!("`{value}`: {}", e.message))?;
    Ok((name.trim().to_string(), value.trim().to_string()))
}

/// One loaded input file.
pub(crate) struct Input {
    pub path: PathBuf,
    pub text: String,
    pub doc: Document,
}

pub(crate) fn parse_options(config: &JobConfig, field: Option<Field>) -> ParseOptions {
    let mut opts = ParseOptions {
        field_override: field,
        ..ParseOptions::default()
    };
    for (k, v) in &config.params {
        opts.param_overrides
            .insert(k.clone(), parse_rational(v).expect("checked by parse_param"));
    }
    opts
}

pub(crate) fn load(config: &JobConfig, path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc = parse_document_with(&text, &parse_options(config, config.field)).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    for name in config.params.keys() {
        if !doc.twists().any(|t| t.params.iter().any(|(p, _)| p == name)) {
            return Err(CliError::Usage(format!(
                "{}: --param {name}: no twist declares this parameter",
                path.display()
            )));
        }
    }
    Ok(Input {
        path: path.to_path_buf(),
        text,
        doc,
    })
}

/// What a run produced: the rendered report and whether it contains a
/// result the caller asked to treat as failure.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

/// Runs the command on every input. Errors map to exit status 2.
pub fn run(config: &JobConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let mut results = Vec::new();
    if config.command == Command::VerifyPaper {
        results.push(("built-in".to_string(), verify::run(config)?));
    } else {
        for path in &config.inputs {
            let input = load(config, path)?;
            results.push((path.display().to_string(), commands::run(config, &input)?));
        }
    }
    let failed = results
        .iter()
        .any(|(_, r)| r.failure || (config.fail_on_witness && r.witness));
    let output = render::render(config, &results);
    Ok(Outcome {
        output,
        exit_code: i32::from(failed),
    })
}
