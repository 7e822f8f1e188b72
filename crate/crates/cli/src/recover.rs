//! Disc recovery from a domain file.

use std::f64::consts::PI;

use discmean::characterize::default_recovery_fields;
use discmean::{recover_disc, Domain64, RecoveryOptions};
use serde::Serialize;

use crate::characterize::DEFAULT_MU;
use crate::config::{CliError, RunConfig, EXIT_NOT_CONVERGED, EXIT_OK};

/// Initial radius, as a fraction of `sqrt(|Ω|/π)`, when `--init-r` is absent.
pub const DEFAULT_INIT_RADIUS_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoverRow {
    pub mu: f64,
    pub center_x1: f64,
    pub center_x2: f64,
    pub radius: f64,
    pub final_residual: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Fits a disc to an in-memory domain. The initial center defaults to the
/// domain's pole; the field family defaults to the radial field about the pole
/// plus four plane waves.
pub fn recover_domain(config: &RunConfig, omega: &Domain64) -> Result<(i32, RecoverRow), CliError> {
    config.validate()?;
    let mu = config.mu.unwrap_or(DEFAULT_MU);
    let mut fields = config.parsed_fields()?;
    if fields.is_empty() {
        fields = default_recovery_fields(omega, mu);
    }
    let center = config.init_center.unwrap_or_else(|| omega.pole());
    let radius = config
        .init_radius
        .unwrap_or_else(|| DEFAULT_INIT_RADIUS_FRACTION * (omega.area() / PI).sqrt());
    let fit = recover_disc(
        omega,
        mu,
        &fields,
        &config.spec,
        (center, radius),
        &RecoveryOptions::default(),
    )?;
    let row = RecoverRow {
        mu,
        center_x1: fit.center.x1,
        center_x2: fit.center.x2,
        radius: fit.radius,
        final_residual: fit.final_residual,
        iterations: fit.iterations,
        evaluations: fit.evaluations,
        converged: fit.converged,
    };
    Ok((
        if fit.converged {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        },
        row,
    ))
}

/// Fits a disc to the domain file named in the config.
pub fn run_recover(config: &RunConfig) -> Result<(i32, RecoverRow), CliError> {
    config.validate()?;
    let omega = config.load_domain()?;
    recover_domain(config, &omega)
}
