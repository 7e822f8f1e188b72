//! Disc characterization by weighted mean value identities.
//!
//! For a domain `Ω` of area at least `πr²` and a point `x0`, the identity
//! `a(μr) v(x0) = (1/|Ω|) ∫_Ω v(y) log(r/|x0 - y|) dy` holds for every
//! positive panharmonic `v` only when `Ω = D_r(x0)`. Taking `v = I0(μ|y - x0|)`
//! the signed deviation `∫_Ω V log(r/|x0 - y|) - πr² a(μr)` is zero for that
//! disc and strictly negative otherwise. This module computes those
//! residuals, classifies domains by the sign of the deviation relative to the
//! measured quadrature noise, and fits a disc to a domain by driving the
//! residuals to zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FieldKind, Point, ScalarField};
use crate::geometry::Domain;
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::quadrature::{
    domain_mean, weighted_domain_mean, with_error_estimate, NodeSet, QuadratureSpec,
};
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::{coeff_a, coeff_a_bullet};

/// Relative slack on `|Ω| >= πr²` that absorbs rounding in `r = sqrt(|Ω|/π)`.
pub const AREA_INEQUALITY_SLACK: f64 = 1e-12;
/// Relative tolerance on `|Ω| = πr²` for the unweighted inverse identity.
pub const EQUAL_AREA_TOLERANCE: f64 = 1e-10;
/// Default absolute floor of the sign-certificate threshold.
pub const DEFAULT_CERTIFICATE_THRESHOLD: f64 = 1e-8;
/// The certificate threshold is at least this multiple of the quadrature floor.
pub const FLOOR_MULTIPLIER: f64 = 10.0;
/// Base objective value for infeasible trial discs during recovery.
pub const RECOVERY_PENALTY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// `a•(μr) v(x0) = M(v, Ω)` with `|Ω| = πr²`.
    #[serde(rename = "T2-unweighted")]
    T2Unweighted,
    /// Weighted identity for positive panharmonic `v`.
    #[serde(rename = "T4-panharmonic")]
    T4Panharmonic,
    /// Weighted identity for `v ≡ 1`.
    #[serde(rename = "T5-harmonic")]
    T5Harmonic,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::T2Unweighted => "T2-unweighted",
            Self::T4Panharmonic => "T4-panharmonic",
            Self::T5Harmonic => "T5-harmonic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport<T> {
    pub theorem: Theorem,
    /// Frequency; `None` for the harmonic identity.
    pub mu: Option<T>,
    pub r: T,
    pub area: T,
    /// Coefficient times `v(x0)`.
    pub lhs: T,
    /// Mean over the domain.
    pub rhs: T,
    /// `rhs - lhs`.
    pub residual: T,
    /// `|residual| / max(|lhs|, 1e-300)`.
    pub relative: T,
    /// Change of `rhs` under one quadrature refinement.
    pub quadrature_floor: T,
}

impl<T: Real> ResidualReport<T> {
    fn new(theorem: Theorem, mu: Option<T>, r: T, area: T, lhs: T, rhs: T, floor: T) -> Self {
        let residual = rhs - lhs;
        let tiny = T::from_f64(1e-300).unwrap_or_else(T::min_positive_value);
        Self {
            theorem,
            mu,
            r,
            area,
            lhs,
            rhs,
            residual,
            relative: residual.abs() / lhs.abs().max(tiny),
            quadrature_floor: floor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    ConsistentWithDisc,
    NotADisc,
    /// Deviation above `+threshold`: impossible in exact arithmetic, so it
    /// flags a numerical fault rather than a shape property.
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ConsistentWithDisc => "consistent-with-disc",
            Self::NotADisc => "not-a-disc",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPolicy {
    pub absolute: f64,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        Self {
            absolute: DEFAULT_CERTIFICATE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignCertificate<T> {
    pub mu: T,
    pub r: T,
    pub area: T,
    /// `πr² a(μr)`.
    pub disc_value: T,
    /// `∫_Ω V(y) log(r/|x0 - y|) dy`.
    pub domain_value: T,
    /// `domain_value - disc_value`.
    pub deviation: T,
    pub quadrature_floor: T,
    pub threshold: T,
    pub conclusion: Conclusion,
}

fn check_area_at_least<T: Real>(area: T, r: T) -> Result<()> {
    if !(r > T::zero()) {
        return Err(Error::Hypothesis(format!("r must be positive, got {r}")));
    }
    let disc_area = T::PI() * r * r;
    if area < disc_area * (T::one() - lit(AREA_INEQUALITY_SLACK)) {
        return Err(Error::Hypothesis(format!(
            "|Ω| = {area} is smaller than πr² = {disc_area}"
        )));
    }
    Ok(())
}

fn check_equal_area<T: Real>(area: T, r: T) -> Result<()> {
    if !(r > T::zero()) {
        return Err(Error::Hypothesis(format!("r must be positive, got {r}")));
    }
    let disc_area = T::PI() * r * r;
    if (area - disc_area).abs() > lit::<T>(EQUAL_AREA_TOLERANCE) * disc_area {
        return Err(Error::Hypothesis(format!(
            "|Ω| = {area} differs from πr² = {disc_area}"
        )));
    }
    Ok(())
}

fn check_positive_panharmonic<T: Real>(v: &ScalarField<T>, mu: T) -> Result<()> {
    if !v.is_positive() {
        return Err(Error::Hypothesis(format!("field {v} is not positive")));
    }
    match v.kind() {
        FieldKind::Panharmonic(m) if (m - mu).abs() <= lit::<T>(1e-12) * mu.abs() => Ok(()),
        FieldKind::Panharmonic(m) => Err(Error::Hypothesis(format!(
            "field {v} is panharmonic with mu = {m}, expected {mu}"
        ))),
        _ => Err(Error::Hypothesis(format!("field {v} is not panharmonic"))),
    }
}

/// Weighted panharmonic identity on `Ω` about `x0` (the domain's pole).
pub fn residual_t4<T: Real>(
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    mu: T,
    v: &ScalarField<T>,
    spec: &QuadratureSpec,
) -> Result<ResidualReport<T>> {
    let area = omega.area();
    check_area_at_least(area, r)?;
    check_positive_panharmonic(v, mu)?;
    let lhs = coeff_a(mu * r)? * v.evaluate(x0);
    let rhs = with_error_estimate(spec, |s| weighted_domain_mean(v, omega, x0, r, s))?;
    Ok(ResidualReport::new(
        Theorem::T4Panharmonic,
        Some(mu),
        r,
        area,
        lhs,
        rhs.value,
        rhs.est_error,
    ))
}

/// Weighted harmonic identity with `v ≡ 1`: `1/2 = (1/|Ω|) ∫_Ω log(r/|x0 - y|) dy`.
pub fn residual_t5<T: Real>(
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<ResidualReport<T>> {
    let area = omega.area();
    check_area_at_least(area, r)?;
    let one = ScalarField::constant_one();
    let rhs = with_error_estimate(spec, |s| weighted_domain_mean(&one, omega, x0, r, s))?;
    Ok(ResidualReport::new(
        Theorem::T5Harmonic,
        None,
        r,
        area,
        lit(0.5),
        rhs.value,
        rhs.est_error,
    ))
}

/// Unweighted identity `a•(μr) v(x0) = M(v, Ω)`, which requires `|Ω| = πr²`.
pub fn residual_t2<T: Real>(
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    mu: T,
    v: &ScalarField<T>,
    spec: &QuadratureSpec,
) -> Result<ResidualReport<T>> {
    let area = omega.area();
    check_equal_area(area, r)?;
    check_positive_panharmonic(v, mu)?;
    let lhs = coeff_a_bullet(mu * r)? * v.evaluate(x0);
    let rhs = with_error_estimate(spec, |s| domain_mean(v, omega, s))?;
    Ok(ResidualReport::new(
        Theorem::T2Unweighted,
        Some(mu),
        r,
        area,
        lhs,
        rhs.value,
        rhs.est_error,
    ))
}

/// Signed deviation `∫_Ω V log(r/|x0 - y|) - πr² a(μr)` with
/// `V = I0(μ|y - x0|)`, classified against
/// `max(10 × quadrature floor, policy.absolute)`.
pub fn sign_certificate<T: Real>(
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    mu: T,
    spec: &QuadratureSpec,
    policy: &ThresholdPolicy,
) -> Result<SignCertificate<T>> {
    let area = omega.area();
    check_area_at_least(area, r)?;
    if !(mu > T::zero()) {
        return Err(Error::Hypothesis(format!("mu must be positive, got {mu}")));
    }
    let v = ScalarField::radial_panharmonic(mu, x0);
    let disc_value = T::PI() * r * r * coeff_a(mu * r)?;
    let mean = with_error_estimate(spec, |s| weighted_domain_mean(&v, omega, x0, r, s))?;
    let domain_value = area * mean.value;
    let floor = area * mean.est_error;
    let deviation = domain_value - disc_value;
    let threshold = (floor * lit(FLOOR_MULTIPLIER)).max(lit(policy.absolute));
    let conclusion = if deviation.abs() <= threshold {
        Conclusion::ConsistentWithDisc
    } else if deviation < T::zero() {
        Conclusion::NotADisc
    } else {
        Conclusion::Inconclusive
    };
    Ok(SignCertificate {
        mu,
        r,
        area,
        disc_value,
        domain_value,
        deviation,
        quadrature_floor: floor,
        threshold,
        conclusion,
    })
}

/// The default recovery family: `I0(μ|y - pole|)` and `exp(μ y·d_k)` for
/// `d_k` at angles `kπ/4`, `k = 0..4`.
pub fn default_recovery_fields<T: Real>(omega: &Domain<T>, mu: T) -> Vec<ScalarField<T>> {
    let mut fields = vec![ScalarField::radial_panharmonic(mu, omega.pole())];
    for k in 0..4 {
        let theta = T::FRAC_PI_4() * lit(k as f64);
        fields.push(ScalarField::plane_panharmonic(mu, theta));
    }
    fields
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions<T> {
    pub max_iterations: usize,
    /// Simplex diameter at which the search stops.
    pub simplex_tolerance: T,
    /// The search also stops once the root-sum-square residual reaches this.
    pub residual_tolerance: T,
    /// Initial simplex edge: this fraction of the initial radius for the
    /// center coordinates, and this value itself for the radius parameter.
    pub initial_step: T,
}

impl<T: Real> Default for RecoveryOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            simplex_tolerance: lit(1e-9),
            residual_tolerance: lit(1e-13),
            initial_step: lit(0.2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryResult<T> {
    pub center: Point<T>,
    pub radius: T,
    /// `sqrt(Σ_j residual_j²)` at the returned parameters.
    pub final_residual: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Sum of squared weighted-identity residuals over `fields` for the trial disc
/// `D_r(x0)`, or a penalty `1e6 + distance` when the trial is infeasible.
pub fn recovery_objective<T: Real>(
    omega: &Domain<T>,
    mu: T,
    fields: &[ScalarField<T>],
    spec: &QuadratureSpec,
    x0: Point<T>,
    r: T,
) -> T {
    let penalty = lit::<T>(RECOVERY_PENALTY);
    if !(r > T::zero()) || !x0.is_finite() {
        return penalty + r.abs();
    }
    if !omega.contains(x0) {
        return penalty + (x0 - omega.pole()).norm();
    }
    let coeff = match coeff_a(mu * r) {
        Ok(c) => c,
        Err(_) => return penalty + r,
    };
    let nodes = match NodeSet::about(omega, x0, spec) {
        Ok(n) => n,
        Err(_) => return penalty + (x0 - omega.pole()).norm(),
    };
    let area = omega.area();
    let mut total = T::zero();
    for v in fields {
        let rhs = nodes.integrate_log_weighted(|p| v.evaluate(p), r) / area;
        let res = coeff * v.evaluate(x0) - rhs;
        total = total + res * res;
    }
    total
}

/// Fits `(center, radius)` so that the weighted identity holds on `omega` for
/// every field in `fields`, by Nelder–Mead on the squared residuals.
///
/// The radius is searched as `r = r_max / (1 + s²)` with `r_max = sqrt(|Ω|/π)`,
/// which keeps every trial inside the hypothesis `|Ω| >= πr²` of the inverse
/// identity. The simplex lives in `(x1, x2, s)`. An initial radius above
/// `r_max` starts from `s = 0`.
pub fn recover_disc<T: Real>(
    omega: &Domain<T>,
    mu: T,
    fields: &[ScalarField<T>],
    spec: &QuadratureSpec,
    init: (Point<T>, T),
    options: &RecoveryOptions<T>,
) -> Result<RecoveryResult<T>> {
    spec.validate()?;
    if fields.is_empty() {
        return Err(Error::Precondition(
            "recovery needs at least one field".into(),
        ));
    }
    for v in fields {
        check_positive_panharmonic(v, mu)?;
    }
    let (c0, r0) = init;
    if !(r0 > T::zero()) || !c0.is_finite() {
        return Err(Error::Precondition(format!(
            "initial disc must have positive radius, got {r0}"
        )));
    }
    let r_max = (omega.area() / T::PI()).sqrt();
    let radius_of = |s: T| r_max / (T::one() + s * s);
    let s0 = if r0 < r_max {
        (r_max / r0 - T::one()).sqrt()
    } else {
        T::zero()
    };
    let step = r0.min(r_max) * options.initial_step;
    let nm = NelderMeadOptions {
        max_iterations: options.max_iterations,
        simplex_tolerance: options.simplex_tolerance,
        value_tolerance: Some(options.residual_tolerance * options.residual_tolerance),
        ..NelderMeadOptions::default()
    };
    let best = nelder_mead(
        |x: &[T]| {
            recovery_objective(
                omega,
                mu,
                fields,
                spec,
                Point::new(x[0], x[1]),
                radius_of(x[2]),
            )
        },
        &[c0.x1, c0.x2, s0],
        &[step, step, options.initial_step],
        &nm,
    );
    if best.value >= lit(RECOVERY_PENALTY) {
        return Err(Error::Precondition(format!(
            "no feasible trial disc found from initial center ({}, {})",
            to_f64(c0.x1),
            to_f64(c0.x2)
        )));
    }
    Ok(RecoveryResult {
        center: Point::new(best.point[0], best.point[1]),
        radius: radius_of(best.point[2]),
        final_residual: best.value.sqrt(),
        iterations: best.iterations,
        evaluations: best.evaluations,
        converged: best.converged,
    })
}
