//! Run configuration shared by all subcommands.

use std::path::{Path, PathBuf};

use discmean::{Domain64, Point64, QuadratureSpec, ScalarField64};
use thiserror::Error;

use crate::verify::Identity;

/// Exit code for a run whose checks all passed.
pub const EXIT_OK: i32 = 0;
/// Exit code for a verify/converge run with a residual out of tolerance.
pub const EXIT_TOLERANCE: i32 = 1;
/// Exit code for an invalid configuration, domain or hypothesis.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for a characterize run that certified a non-disc.
pub const EXIT_NOT_A_DISC: i32 = 3;
/// Exit code for a characterize run whose deviation could not be classified.
pub const EXIT_INCONCLUSIVE: i32 = 4;
/// Exit code for a recovery that hit its iteration cap.
pub const EXIT_NOT_CONVERGED: i32 = 5;

/// Seed for the randomized spot checks when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] discmean::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Every error maps to the configuration exit code.
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Converge,
    Characterize,
    Recover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Restricts `verify` to one identity, or picks the identity for `converge`.
    pub identity: Option<Identity>,
    /// Field descriptors; replace the built-in families when non-empty.
    pub fields: Vec<String>,
    pub domain: Option<PathBuf>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub r: Option<f64>,
    /// Take `r = sqrt(|Ω| / π)` in `characterize`.
    pub equal_area: bool,
    pub spec: QuadratureSpec,
    /// Overrides the per-identity tolerance in `verify`.
    pub tolerance: Option<f64>,
    pub init_center: Option<Point64>,
    pub init_radius: Option<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            identity: None,
            fields: Vec::new(),
            domain: None,
            mu: None,
            lambda: None,
            r: None,
            equal_area: false,
            spec: QuadratureSpec::default(),
            tolerance: None,
            init_center: None,
            init_radius: None,
            format: OutputFormat::Csv,
            out: None,
            seed: DEFAULT_SEED,
        }
    }

    /// Checks numeric flags and the quadrature spec.
    pub fn validate(&self) -> Result<(), CliError> {
        self.spec.validate()?;
        for (name, value) in [
            ("mu", self.mu),
            ("lambda", self.lambda),
            ("r", self.r),
            ("tolerance", self.tolerance),
            ("init radius", self.init_radius),
        ] {
            if let Some(x) = value {
                if !(x.is_finite() && x > 0.0) {
                    return Err(CliError::Config(format!(
                        "{name} must be a finite positive number, got {x}"
                    )));
                }
            }
        }
        if let Some(c) = self.init_center {
            if !c.is_finite() {
                return Err(CliError::Config("initial center must be finite".into()));
            }
        }
        if self.equal_area && self.r.is_some() {
            return Err(CliError::Config(
                "--r and --equal-area are exclusive".into(),
            ));
        }
        Ok(())
    }

    pub fn parsed_fields(&self) -> Result<Vec<ScalarField64>, CliError> {
        self.fields
            .iter()
            .map(|d| d.parse::<ScalarField64>().map_err(CliError::from))
            .collect()
    }

    pub fn load_domain(&self) -> Result<Domain64, CliError> {
        let path = self
            .domain
            .as_deref()
            .ok_or_else(|| CliError::Config("--domain is required".into()))?;
        read_domain(path)
    }
}

pub fn read_domain(path: &Path) -> Result<Domain64, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Domain64::from_json(&text)?)
}
