//! Quadrature convergence sweep for a single identity.

use discmean::{Point64, QuadratureSpec, ScalarField64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CliError, RunConfig, EXIT_OK, EXIT_TOLERANCE};
use crate::verify::{field_row, Identity};

/// Angular node counts of the sweep.
pub const N_THETA_SWEEP: [usize; 6] = [16, 32, 64, 128, 256, 512];
/// Radial Gauss–Legendre orders of the sweep.
pub const ORDER_SWEEP: [usize; 4] = [4, 8, 16, 32];
/// The finest cell of the sweep must reach this absolute residual.
pub const FINEST_TOLERANCE: f64 = 1e-10;
/// Evaluation center of the sweep.
pub const SWEEP_CENTER: (f64, f64) = (0.3, -0.2);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub identity: String,
    pub field: String,
    pub n_theta: usize,
    pub radial_order: usize,
    pub n_radial_panels: usize,
    pub grading: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub relative: f64,
}

fn default_field(identity: Identity, config: &RunConfig) -> Result<ScalarField64, CliError> {
    let text = match identity {
        Identity::WeightedHarm => "harm-poly:k=3,part=re".to_string(),
        Identity::WeightedHh => {
            format!("plane-hh:lambda={},theta=0.7", config.lambda.unwrap_or(2.0))
        }
        _ => format!("plane-mhh:mu={},theta=0.3", config.mu.unwrap_or(2.0)),
    };
    Ok(text.parse()?)
}

/// Sweeps `n_theta × radial_order` for the configured identity (default: the
/// log-weighted panharmonic identity at `μr = 2`). Fails when the finest cell
/// misses [`FINEST_TOLERANCE`].
pub fn run_converge(config: &RunConfig) -> Result<(i32, Vec<ConvergeRow>), CliError> {
    config.validate()?;
    let identity = config.identity.unwrap_or(Identity::WeightedMhh);
    if !matches!(
        identity,
        Identity::CircleMhh
            | Identity::DiscMhh
            | Identity::WeightedMhh
            | Identity::WeightedHarm
            | Identity::WeightedHh
    ) {
        return Err(CliError::Config(format!(
            "identity {identity} has no quadrature to sweep"
        )));
    }
    let mut fields = config.parsed_fields()?;
    if fields.is_empty() {
        fields.push(default_field(identity, config)?);
    }
    let x = Point64::new(SWEEP_CENTER.0, SWEEP_CENTER.1);
    let r = config.r.unwrap_or(1.0);
    let mut cells = Vec::new();
    for v in &fields {
        for &radial_order in &ORDER_SWEEP {
            for &n_theta in &N_THETA_SWEEP {
                let spec = QuadratureSpec {
                    n_theta,
                    radial_order,
                    ..config.spec
                };
                cells.push((v, spec));
            }
        }
    }
    let rows: Vec<ConvergeRow> = cells
        .par_iter()
        .map(|(v, spec)| {
            let row = field_row(identity, v, x, r, spec)?;
            Ok(ConvergeRow {
                identity: row.identity,
                field: row.field,
                n_theta: spec.n_theta,
                radial_order: spec.radial_order,
                n_radial_panels: spec.n_radial_panels,
                grading: spec.grading,
                lhs: row.lhs,
                rhs: row.rhs,
                residual: row.residual,
                relative: row.relative,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let finest_ok = rows
        .chunks(N_THETA_SWEEP.len() * ORDER_SWEEP.len())
        .all(|block| {
            block
                .last()
                .is_some_and(|r| r.residual.abs() <= FINEST_TOLERANCE)
        });
    Ok((if finest_ok { EXIT_OK } else { EXIT_TOLERANCE }, rows))
}
