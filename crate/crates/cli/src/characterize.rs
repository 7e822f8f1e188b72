//! Disc characterization of a domain file: residuals of the inverse identities
//! and the sign certificate.

use std::f64::consts::PI;

use discmean::characterize::{
    DEFAULT_CERTIFICATE_THRESHOLD, EQUAL_AREA_TOLERANCE, FLOOR_MULTIPLIER,
};
use discmean::{
    residual_t2, residual_t4, residual_t5, sign_certificate, Conclusion, Domain64,
    ResidualReport64, ScalarField64, SignCertificate64, Theorem, ThresholdPolicy,
};
use serde::Serialize;

use crate::config::{CliError, RunConfig, EXIT_INCONCLUSIVE, EXIT_NOT_A_DISC, EXIT_OK};

/// Frequency used when `--mu` is absent.
pub const DEFAULT_MU: f64 = 1.0;
/// Theorem tag of the certificate row.
pub const CERTIFICATE_TAG: &str = "T4-certificate";

/// One CSV/JSON record: a residual report or the certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizeRow {
    pub theorem: String,
    pub mu: Option<f64>,
    pub r: f64,
    pub area: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub relative: f64,
    pub floor: f64,
    pub conclusion: Conclusion,
}

fn classify(report: &ResidualReport64) -> Conclusion {
    let threshold = (FLOOR_MULTIPLIER * report.quadrature_floor).max(DEFAULT_CERTIFICATE_THRESHOLD);
    if report.residual.abs() <= threshold {
        Conclusion::ConsistentWithDisc
    } else if report.residual < 0.0 || report.theorem == Theorem::T2Unweighted {
        Conclusion::NotADisc
    } else {
        Conclusion::Inconclusive
    }
}

impl From<&ResidualReport64> for CharacterizeRow {
    fn from(report: &ResidualReport64) -> Self {
        Self {
            theorem: report.theorem.to_string(),
            mu: report.mu,
            r: report.r,
            area: report.area,
            lhs: report.lhs,
            rhs: report.rhs,
            residual: report.residual,
            relative: report.relative,
            floor: report.quadrature_floor,
            conclusion: classify(report),
        }
    }
}

impl From<&SignCertificate64> for CharacterizeRow {
    fn from(cert: &SignCertificate64) -> Self {
        Self {
            theorem: CERTIFICATE_TAG.to_string(),
            mu: Some(cert.mu),
            r: cert.r,
            area: cert.area,
            lhs: cert.disc_value,
            rhs: cert.domain_value,
            residual: cert.deviation,
            relative: cert.deviation.abs() / cert.disc_value.abs().max(1e-300),
            floor: cert.quadrature_floor,
            conclusion: cert.conclusion,
        }
    }
}

/// Comparison radius: `--r`, or `sqrt(|Ω|/π)` with `--equal-area`.
pub fn comparison_radius(config: &RunConfig, omega: &Domain64) -> Result<f64, CliError> {
    match (config.r, config.equal_area) {
        (Some(r), false) => Ok(r),
        (None, true) => Ok((omega.area() / PI).sqrt()),
        _ => Err(CliError::Config(
            "characterize needs --r or --equal-area".into(),
        )),
    }
}

/// Characterizes an in-memory domain; the exit code follows the certificate.
pub fn characterize_domain(
    config: &RunConfig,
    omega: &Domain64,
) -> Result<(i32, Vec<CharacterizeRow>), CliError> {
    config.validate()?;
    let x0 = omega.pole();
    let mu = config.mu.unwrap_or(DEFAULT_MU);
    let r = comparison_radius(config, omega)?;
    let spec = &config.spec;
    let mut fields = vec![ScalarField64::radial_panharmonic(mu, x0)];
    fields.extend(config.parsed_fields()?);

    let mut reports = Vec::new();
    for v in &fields {
        reports.push(residual_t4(omega, x0, r, mu, v, spec)?);
    }
    reports.push(residual_t5(omega, x0, r, spec)?);
    let disc_area = PI * r * r;
    if (omega.area() - disc_area).abs() <= EQUAL_AREA_TOLERANCE * disc_area {
        for v in &fields {
            reports.push(residual_t2(omega, x0, r, mu, v, spec)?);
        }
    }
    let cert = sign_certificate(omega, x0, r, mu, spec, &ThresholdPolicy::default())?;

    let mut rows: Vec<CharacterizeRow> = reports.iter().map(CharacterizeRow::from).collect();
    rows.push(CharacterizeRow::from(&cert));
    let code = match cert.conclusion {
        Conclusion::ConsistentWithDisc => EXIT_OK,
        Conclusion::NotADisc => EXIT_NOT_A_DISC,
        Conclusion::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok((code, rows))
}

/// Characterizes the domain file named in the config.
pub fn run_characterize(config: &RunConfig) -> Result<(i32, Vec<CharacterizeRow>), CliError> {
    config.validate()?;
    let omega = config.load_domain()?;
    characterize_domain(config, &omega)
}
