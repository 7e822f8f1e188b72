use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discmean::{Point64, QuadratureSpec};
use discmean_cli::config::{DEFAULT_SEED, EXIT_CONFIG};
use discmean_cli::{run, CliError, Command, Identity, OutputFormat, RunConfig};

/// Mean value identities on discs and disc characterization of planar domains.
#[derive(Parser)]
#[command(name = "discmean", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the identity suites; exit 1 if any row misses its tolerance.
    Verify(Common),
    /// Sweep quadrature resolution for one identity; exit 1 if the finest cell misses 1e-10.
    Converge(Common),
    /// Residuals and sign certificate for a domain; exit 0 disc, 3 not a disc, 4 inconclusive.
    Characterize(Common),
    /// Fit a disc to a domain; exit 5 if the search did not converge.
    Recover(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Domain file (JSON: disc, star or polygon).
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Identity to verify or sweep, e.g. weighted-mhh.
    #[arg(long)]
    identity: Option<String>,
    /// Field descriptor, e.g. plane-mhh:mu=2,theta=0.3 (repeatable).
    #[arg(long = "field")]
    fields: Vec<String>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Use r = sqrt(|Ω|/π).
    #[arg(long)]
    equal_area: bool,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    grading: Option<f64>,
    /// Override every identity's tolerance in verify.
    #[arg(long)]
    tol: Option<f64>,
    /// Initial center for recover, as x1,x2.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    init_center: Option<Point64>,
    /// Initial radius for recover.
    #[arg(long)]
    init_r: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn parse_point(text: &str) -> Result<Point64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let x1 = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let x2 = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok(Point64::new(x1, x2))
        }
        _ => Err(format!("expected x1,x2, got {text:?}")),
    }
}

fn config_from(command: Command, args: Common) -> Result<RunConfig, CliError> {
    let defaults = QuadratureSpec::default();
    let identity = args
        .identity
        .as_deref()
        .map(str::parse::<Identity>)
        .transpose()?;
    Ok(RunConfig {
        command,
        identity,
        fields: args.fields,
        domain: args.domain,
        mu: args.mu,
        lambda: args.lambda,
        r: args.r,
        equal_area: args.equal_area,
        spec: QuadratureSpec {
            n_theta: args.ntheta.unwrap_or(defaults.n_theta),
            n_radial_panels: args.panels.unwrap_or(defaults.n_radial_panels),
            radial_order: args.order.unwrap_or(defaults.radial_order),
            grading: args.grading.unwrap_or(defaults.grading),
        },
        tolerance: args.tol,
        init_center: args.init_center,
        init_radius: args.init_r,
        format: match args.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        out: args.out,
        seed: args.seed,
    })
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (command, args) = match cli.command {
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Converge(a) => (Command::Converge, a),
        Sub::Characterize(a) => (Command::Characterize, a),
        Sub::Recover(a) => (Command::Recover, a),
    };
    let config = config_from(command, args)?;
    let outcome = run(&config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &outcome.output).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{}", outcome.output),
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_CONFIG as u8))
}
