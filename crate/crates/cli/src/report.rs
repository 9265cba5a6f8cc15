use std::io::Write;
use std::process::ExitCode;

use gaussfock::Error;
use serde_json::{json, Map, Value};

/// Failures surfaced by the CLI, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Library(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    /// Mathematical failures exit 1; bad input exits 2.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(Error::Validation(_))
            | CliError::Library(Error::NumericalDegeneracy(_))
            | CliError::Library(Error::NoDensityMatrix(_))
            | CliError::Library(Error::NotPositiveDefinite { .. }) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Library(e) => match e {
                Error::InvalidDimension(_) => "invalid_dimension",
                Error::InvalidInput(_) => "invalid_input",
                Error::NotPositiveDefinite { .. } => "not_positive_definite",
                Error::NumericalDegeneracy(_) => "numerical_degeneracy",
                Error::InvalidIndex(_) => "invalid_index",
                Error::InfiniteParameter => "infinite_parameter",
                Error::InvalidParameter(_) => "invalid_parameter",
                Error::UnsupportedComposition(_) => "unsupported_composition",
                Error::UnsupportedDisplacement(_) => "unsupported_displacement",
                Error::NoDensityMatrix(_) => "no_density_matrix",
                Error::Validation(_) => "validation",
                Error::Capacity { .. } => "capacity",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) | CliError::Parse(m) => m.clone(),
            CliError::Library(e) => e.to_string(),
        }
    }
}

pub struct Report {
    body: Map<String, Value>,
    pub pass: bool,
    error: Option<CliError>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, result: Value, pass: bool) -> Self {
        let mut body = Map::new();
        body.insert("command".into(), json!(command));
        body.insert("inputs".into(), inputs);
        body.insert("result".into(), result);
        Report { body, pass, error: None }
    }

    pub fn failure(command: &str, err: CliError) -> Self {
        let mut body = Map::new();
        body.insert("command".into(), json!(command));
        body.insert("error".into(), json!({ "kind": err.kind(), "message": err.message() }));
        Report { body, pass: false, error: Some(err) }
    }

    /// Merges extra keys into `result`.
    pub fn extend(&mut self, extra: Value) {
        if let (Some(Value::Object(result)), Value::Object(extra)) = (self.body.get_mut("result"), extra) {
            result.extend(extra);
        }
    }

    pub fn emit(mut self) -> ExitCode {
        self.body.insert("pass".into(), json!(self.pass));
        let text = serde_json::to_string_pretty(&Value::Object(self.body)).expect("report serializes");
        // a closed pipe downstream is not our failure
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        match &self.error {
            Some(err) => {
                eprintln!("gaussfock: {}", err.message());
                ExitCode::from(err.exit_code())
            }
            None if self.pass => ExitCode::SUCCESS,
            None => ExitCode::from(1),
        }
    }
}
