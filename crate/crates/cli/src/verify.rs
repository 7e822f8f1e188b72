//! Forward identity suites: one row per (identity, field, center, radius,
//! frequency), each with its own tolerance rule.

use std::fmt;
use std::str::FromStr;

use discmean::quadrature::{circle_mean, disc_mean, green_identity_residual, weighted_disc_mean};
use discmean::specfun::{
    bessel_i0, bessel_i1, bessel_j0, bessel_j1, coeff_a, coeff_a_bullet, coeff_a_circ,
    coeff_a_tilde, coeff_branches, poisson_i0,
};
use discmean::{FieldKind, HarmonicPart, Point64, QuadratureSpec, ScalarField64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CliError, RunConfig, EXIT_OK, EXIT_TOLERANCE};

/// Radii of the disc identity grid.
pub const RADII: [f64; 3] = [0.25, 0.5, 1.0];
/// Frequencies of the panharmonic grid.
pub const MUS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
/// Products `λr` of the Helmholtz grid; the last lies past the first zero of `J1`.
pub const HELMHOLTZ_PRODUCTS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
/// Radii of the Helmholtz grid.
pub const HELMHOLTZ_RADII: [f64; 2] = [0.5, 1.0];
/// Highest harmonic polynomial degree in the harmonic suite.
pub const MAX_HARMONIC_DEGREE: u32 = 6;
/// Number of random points per field in the equation spot check.
pub const PDE_SAMPLES: usize = 100;
/// Half-width of the square the equation spot check samples from.
pub const PDE_BOX: f64 = 2.0;
/// Step of the central differences in the derivative check.
pub const DERIVATIVE_STEP: f64 = 1e-5;

/// Tolerance for the constant field in the harmonic suite.
pub const CONSTANT_FIELD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `M(v, S_r(x)) = a°(μr) v(x)`.
    CircleMhh,
    /// `M(v, D_r(x)) = a•(μr) v(x)`.
    DiscMhh,
    /// Log-weighted disc mean equals `a(μr) v(x)`.
    WeightedMhh,
    /// Log-weighted disc mean of a harmonic function equals `v(x)/2`.
    WeightedHarm,
    /// Log-weighted disc mean of a Helmholtz solution equals `ã(λr) u(x)`.
    WeightedHh,
    /// Second Green identity with the logarithmic kernel.
    Green,
    /// Log-weighted mean of a positive panharmonic field exceeds `v(x)/2`.
    WeightedExcess,
    /// Declared Laplacian relation at seeded random points.
    FieldPde,
    /// Poisson integral of `I0` against its power series.
    PoissonI0,
    /// `a• - a` directly and in closed form, and its positivity.
    CoeffGap,
    /// `a` strictly increasing and above `1/2`.
    CoeffOrder,
    /// `I0`, `I1` nonnegative and strictly increasing.
    BesselOrder,
    /// `I0' = I1` and `J0' = -J1` against central differences.
    BesselDeriv,
    /// Series and closed-form branches of `a` and `ã` agree at the switch.
    BranchSwitch,
}

impl Identity {
    pub const ALL: [Identity; 14] = [
        Self::CircleMhh,
        Self::DiscMhh,
        Self::WeightedMhh,
        Self::WeightedHarm,
        Self::WeightedHh,
        Self::Green,
        Self::WeightedExcess,
        Self::FieldPde,
        Self::PoissonI0,
        Self::CoeffGap,
        Self::CoeffOrder,
        Self::BesselOrder,
        Self::BesselDeriv,
        Self::BranchSwitch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::CircleMhh => "circle-mhh",
            Self::DiscMhh => "disc-mhh",
            Self::WeightedMhh => "weighted-mhh",
            Self::WeightedHarm => "weighted-harm",
            Self::WeightedHh => "weighted-hh",
            Self::Green => "green",
            Self::WeightedExcess => "weighted-excess",
            Self::FieldPde => "field-pde",
            Self::PoissonI0 => "poisson-i0",
            Self::CoeffGap => "coeff-gap",
            Self::CoeffOrder => "coeff-order",
            Self::BesselOrder => "bessel-order",
            Self::BesselDeriv => "bessel-deriv",
            Self::BranchSwitch => "branch-switch",
        }
    }

    /// Default tolerance; its meaning (relative, absolute, margin) is per identity.
    pub fn tolerance(self) -> f64 {
        match self {
            Self::CircleMhh | Self::DiscMhh => 1e-9,
            Self::WeightedMhh | Self::WeightedHh | Self::WeightedExcess => 1e-7,
            Self::WeightedHarm | Self::Green => 1e-9,
            Self::FieldPde | Self::PoissonI0 => 1e-11,
            Self::CoeffGap => 1e-12,
            Self::CoeffOrder | Self::BesselOrder => 0.0,
            Self::BesselDeriv => 1e-8,
            Self::BranchSwitch => 1e-13,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|id| id.name()).collect();
                CliError::Config(format!(
                    "unknown identity {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub identity: String,
    pub field: String,
    pub x1: f64,
    pub x2: f64,
    pub r: f64,
    pub freq: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub relative: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One unit of work in a suite.
#[derive(Debug, Clone)]
struct Case {
    identity: Identity,
    field: Option<ScalarField64>,
    label: Option<&'static str>,
    x: Point64,
    r: f64,
    freq: f64,
}

impl Case {
    fn field(identity: Identity, v: ScalarField64, x: Point64, r: f64, freq: f64) -> Self {
        Self {
            identity,
            field: Some(v),
            label: None,
            x,
            r,
            freq,
        }
    }

    fn scalar(identity: Identity, label: &'static str, t: f64) -> Self {
        Self {
            identity,
            field: None,
            label: Some(label),
            x: Point64::origin(),
            r: 0.0,
            freq: t,
        }
    }
}

/// Evaluation centers of the disc identity grids.
pub fn centers() -> [Point64; 3] {
    [
        Point64::origin(),
        Point64::new(0.3, -0.2),
        Point64::new(-0.7, 0.5),
    ]
}

/// Plane, radial and separable positive panharmonic fields of frequency `mu`.
pub fn panharmonic_family(mu: f64) -> Vec<ScalarField64> {
    let tilt = 0.3_f64;
    vec![
        ScalarField64::plane_panharmonic(mu, tilt),
        ScalarField64::radial_panharmonic(mu, Point64::new(0.1, 0.4)),
        ScalarField64::separable_panharmonic(mu * tilt.cos(), mu * tilt.sin())
            .expect("nonzero frequency"),
    ]
}

fn helmholtz_family(lambda: f64) -> Vec<ScalarField64> {
    vec![
        ScalarField64::plane_helmholtz(lambda, 0.7),
        ScalarField64::radial_helmholtz(lambda, Point64::new(0.2, -0.1)),
    ]
}

fn harmonic_family() -> Vec<ScalarField64> {
    let mut fields = Vec::new();
    for k in 0..=MAX_HARMONIC_DEGREE {
        for part in [HarmonicPart::Real, HarmonicPart::Imaginary] {
            if k == 0 && part == HarmonicPart::Imaginary {
                continue;
            }
            fields.push(ScalarField64::harmonic_poly(k, part).expect("degree within range"));
        }
    }
    fields
}

fn green_cases() -> [(Point64, f64); 5] {
    [
        (Point64::origin(), 1.0),
        (Point64::new(0.3, -0.2), 0.5),
        (Point64::new(-0.7, 0.5), 0.25),
        (Point64::new(1.0, 1.0), 0.8),
        (Point64::new(-0.4, -0.9), 1.2),
    ]
}

fn green_family() -> Vec<ScalarField64> {
    vec![
        ScalarField64::quadratic_nonsolution(),
        ScalarField64::harmonic_poly(4, HarmonicPart::Real).expect("degree within range"),
        ScalarField64::plane_panharmonic(1.0, 0.0),
        ScalarField64::radial_panharmonic(2.0, Point64::new(0.5, 0.5)),
    ]
}

fn grid(start: f64, step: f64, end: f64) -> Vec<f64> {
    let n = ((end - start) / step).round() as usize;
    (0..=n).map(|k| start + step * k as f64).collect()
}

fn frequency(v: &ScalarField64) -> f64 {
    match v.kind() {
        FieldKind::Panharmonic(mu) => mu,
        FieldKind::Helmholtz(lambda) => lambda,
        FieldKind::Harmonic | FieldKind::General => 0.0,
    }
}

fn require_kind(
    identity: Identity,
    fields: &[ScalarField64],
    accept: fn(&ScalarField64) -> bool,
) -> Result<(), CliError> {
    match fields.iter().find(|v| !accept(v)) {
        Some(v) => Err(CliError::Config(format!(
            "field {v} does not fit identity {identity}"
        ))),
        None => Ok(()),
    }
}

fn is_positive_panharmonic(v: &ScalarField64) -> bool {
    v.is_positive() && matches!(v.kind(), FieldKind::Panharmonic(_))
}

fn is_helmholtz(v: &ScalarField64) -> bool {
    matches!(v.kind(), FieldKind::Helmholtz(_))
}

fn is_harmonic(v: &ScalarField64) -> bool {
    matches!(v.kind(), FieldKind::Harmonic)
}

fn cases_for(identity: Identity, config: &RunConfig) -> Result<Vec<Case>, CliError> {
    let user = config.parsed_fields()?;
    let radii: Vec<f64> = config.r.map_or(RADII.to_vec(), |r| vec![r]);
    let mut cases = Vec::new();
    match identity {
        Identity::CircleMhh
        | Identity::DiscMhh
        | Identity::WeightedMhh
        | Identity::WeightedExcess => {
            let families: Vec<Vec<ScalarField64>> = if user.is_empty() {
                let mus = config.mu.map_or(MUS.to_vec(), |mu| vec![mu]);
                mus.into_iter().map(panharmonic_family).collect()
            } else {
                require_kind(identity, &user, is_positive_panharmonic)?;
                vec![user]
            };
            for family in families {
                for v in family {
                    for x in centers() {
                        for &r in &radii {
                            cases.push(Case::field(identity, v.clone(), x, r, frequency(&v)));
                        }
                    }
                }
            }
        }
        Identity::WeightedHarm => {
            let fields = if user.is_empty() {
                harmonic_family()
            } else {
                require_kind(identity, &user, is_harmonic)?;
                user
            };
            for v in fields {
                for x in centers() {
                    for &r in &radii {
                        cases.push(Case::field(identity, v.clone(), x, r, 0.0));
                    }
                }
            }
        }
        Identity::WeightedHh => {
            let helm_radii: Vec<f64> = config.r.map_or(HELMHOLTZ_RADII.to_vec(), |r| vec![r]);
            let mut pairs = Vec::new();
            if !user.is_empty() {
                require_kind(identity, &user, is_helmholtz)?;
                for &r in &helm_radii {
                    pairs.push((user.clone(), r));
                }
            } else if let Some(lambda) = config.lambda {
                for &r in &helm_radii {
                    pairs.push((helmholtz_family(lambda), r));
                }
            } else {
                for t in HELMHOLTZ_PRODUCTS {
                    for &r in &helm_radii {
                        pairs.push((helmholtz_family(t / r), r));
                    }
                }
            }
            for (family, r) in pairs {
                for v in family {
                    for x in centers() {
                        cases.push(Case::field(identity, v.clone(), x, r, frequency(&v)));
                    }
                }
            }
        }
        Identity::Green => {
            let fields = if user.is_empty() {
                green_family()
            } else {
                user
            };
            for w in fields {
                for (x, r) in green_cases() {
                    cases.push(Case::field(identity, w.clone(), x, r, frequency(&w)));
                }
            }
        }
        Identity::FieldPde => {
            let fields = if user.is_empty() {
                let mut all = panharmonic_family(config.mu.unwrap_or(2.0));
                all.extend(harmonic_family().into_iter().step_by(3));
                all.extend(helmholtz_family(config.lambda.unwrap_or(3.0)));
                all.push(ScalarField64::quadratic_nonsolution());
                all
            } else {
                user
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for v in fields {
                for _ in 0..PDE_SAMPLES {
                    let p = Point64::new(
                        rng.gen_range(-PDE_BOX..PDE_BOX),
                        rng.gen_range(-PDE_BOX..PDE_BOX),
                    );
                    cases.push(Case::field(identity, v.clone(), p, 0.0, frequency(&v)));
                }
            }
        }
        Identity::PoissonI0 => {
            for t in grid(0.0, 0.5, 10.0) {
                cases.push(Case::scalar(identity, "I0", t));
            }
        }
        Identity::CoeffGap => {
            for t in grid(0.25, 0.25, 30.0) {
                cases.push(Case::scalar(identity, "a•-a", t));
            }
        }
        Identity::CoeffOrder => {
            for t in grid(0.25, 0.25, 30.0) {
                cases.push(Case::scalar(identity, "a", t));
            }
        }
        Identity::BesselOrder => {
            for label in ["I0", "I1"] {
                for t in grid(0.25, 0.25, 30.0) {
                    cases.push(Case::scalar(identity, label, t));
                }
            }
        }
        Identity::BesselDeriv => {
            for label in ["I0'=I1", "J0'=-J1"] {
                for t in grid(0.25, 0.25, 5.0) {
                    cases.push(Case::scalar(identity, label, t));
                }
            }
        }
        Identity::BranchSwitch => {
            cases.push(Case::scalar(identity, "a", 1.0));
            cases.push(Case::scalar(identity, "a~", 1.0));
        }
    }
    Ok(cases)
}

/// `(lhs, rhs, pass)` of one case; `rhs - lhs` is the reported residual.
fn evaluate(case: &Case, spec: &QuadratureSpec, tol: f64) -> Result<(f64, f64, bool), CliError> {
    let (x, r, t) = (case.x, case.r, case.freq);
    let out = match (case.identity, &case.field) {
        (Identity::CircleMhh, Some(v)) => {
            let vx = v.evaluate(x);
            let lhs = coeff_a_circ(t * r)? * vx;
            let rhs = circle_mean(v, x, r, spec)?.value;
            (lhs, rhs, (rhs - lhs).abs() <= tol * vx.abs())
        }
        (Identity::DiscMhh, Some(v)) => {
            let vx = v.evaluate(x);
            let lhs = coeff_a_bullet(t * r)? * vx;
            let rhs = disc_mean(v, x, r, spec)?.value;
            (lhs, rhs, (rhs - lhs).abs() <= tol * vx.abs())
        }
        (Identity::WeightedMhh, Some(v)) => {
            let vx = v.evaluate(x);
            let lhs = coeff_a(t * r)? * vx;
            let rhs = weighted_disc_mean(v, x, r, spec)?.value;
            (lhs, rhs, (rhs - lhs).abs() <= tol * vx.abs())
        }
        (Identity::WeightedHarm, Some(v)) => {
            let lhs = v.evaluate(x) / 2.0;
            let rhs = weighted_disc_mean(v, x, r, spec)?.value;
            let constant = v.descriptor() == ScalarField64::constant_one().descriptor();
            let bound = if constant {
                tol.min(CONSTANT_FIELD_TOLERANCE)
            } else {
                tol
            };
            (lhs, rhs, (rhs - lhs).abs() <= bound)
        }
        (Identity::WeightedHh, Some(u)) => {
            let ux = u.evaluate(x);
            let lhs = coeff_a_tilde(t * r)? * ux;
            let rhs = weighted_disc_mean(u, x, r, spec)?.value;
            (lhs, rhs, (rhs - lhs).abs() <= tol * ux.abs().max(1.0))
        }
        (Identity::Green, Some(w)) => {
            let lhs = w.evaluate(x);
            let rhs = lhs - green_identity_residual(w, x, r, spec)?;
            (lhs, rhs, (rhs - lhs).abs() <= tol)
        }
        (Identity::WeightedExcess, Some(v)) => {
            let vx = v.evaluate(x);
            let lhs = vx / 2.0;
            let rhs = weighted_disc_mean(v, x, r, spec)?.value;
            let margin = (coeff_a(t * r)? - 0.5) * vx;
            (lhs, rhs, rhs > lhs && rhs - lhs >= margin - tol)
        }
        (Identity::FieldPde, Some(v)) => {
            let value = v.evaluate(x);
            let lhs = match v.kind() {
                FieldKind::Panharmonic(mu) => mu * mu * value,
                FieldKind::Harmonic => 0.0,
                FieldKind::Helmholtz(lambda) => -lambda * lambda * value,
                FieldKind::General => v.laplacian(x),
            };
            let rhs = v.laplacian(x);
            let scale = lhs.abs().max(rhs.abs()).max(value.abs()).max(1.0);
            let sign_ok = !v.is_positive() || value > 0.0;
            (lhs, rhs, sign_ok && (rhs - lhs).abs() <= tol * scale)
        }
        (Identity::PoissonI0, None) => {
            let lhs = bessel_i0(t)?;
            let rhs = poisson_i0(t)?;
            (lhs, rhs, (rhs - lhs).abs() <= tol * lhs)
        }
        (Identity::CoeffGap, None) => {
            let lhs = 2.0 * (t * bessel_i1(t)? - bessel_i0(t)? + 1.0) / (t * t);
            let rhs = coeff_a_bullet(t)? - coeff_a(t)?;
            let close = (rhs - lhs).abs() <= tol * lhs.abs().max(1.0);
            (lhs, rhs, lhs > 0.0 && rhs > 0.0 && close)
        }
        (Identity::CoeffOrder, None) => {
            let lhs = coeff_a(t - 0.25)?;
            let rhs = coeff_a(t)?;
            (lhs, rhs, rhs > lhs && rhs > 0.5)
        }
        (Identity::BesselOrder, None) => {
            let f: fn(f64) -> discmean::Result<f64> = if case.label == Some("I0") {
                bessel_i0
            } else {
                bessel_i1
            };
            let lhs = f(t - 0.25)?;
            let rhs = f(t)?;
            let floor = if case.label == Some("I0") { 1.0 } else { 0.0 };
            (lhs, rhs, rhs > lhs && lhs >= floor)
        }
        (Identity::BesselDeriv, None) => {
            let h = DERIVATIVE_STEP;
            let (lhs, rhs) = if case.label == Some("I0'=I1") {
                (
                    bessel_i1(t)?,
                    (bessel_i0(t + h)? - bessel_i0(t - h)?) / (2.0 * h),
                )
            } else {
                (
                    -bessel_j1(t)?,
                    (bessel_j0(t + h)? - bessel_j0(t - h)?) / (2.0 * h),
                )
            };
            (lhs, rhs, (rhs - lhs).abs() <= tol)
        }
        (Identity::BranchSwitch, None) => {
            let (a, a_tilde) = coeff_branches(t);
            let (lhs, rhs) = if case.label == Some("a") { a } else { a_tilde };
            (lhs, rhs, (rhs - lhs).abs() <= tol)
        }
        (identity, _) => {
            return Err(CliError::Config(format!("malformed case for {identity}")));
        }
    };
    Ok(out)
}

fn row(case: &Case, spec: &QuadratureSpec, tol: f64) -> Result<VerifyRow, CliError> {
    let (lhs, rhs, pass) = evaluate(case, spec, tol)?;
    let residual = rhs - lhs;
    let field = match (&case.field, case.label) {
        (Some(v), _) => v.descriptor(),
        (None, Some(label)) => label.to_string(),
        (None, None) => String::new(),
    };
    Ok(VerifyRow {
        identity: case.identity.to_string(),
        field,
        x1: case.x.x1,
        x2: case.x.x2,
        r: case.r,
        freq: case.freq,
        lhs,
        rhs,
        residual,
        relative: residual.abs() / lhs.abs().max(1e-300),
        tolerance: tol,
        pass: pass && residual.is_finite(),
    })
}

/// Rows for the configured identity (or every identity), in grid order.
pub fn verify_rows(config: &RunConfig) -> Result<Vec<VerifyRow>, CliError> {
    config.validate()?;
    let identities: Vec<Identity> = match config.identity {
        Some(id) => vec![id],
        None => Identity::ALL.to_vec(),
    };
    let mut cases = Vec::new();
    for id in identities {
        cases.extend(cases_for(id, config)?);
    }
    let spec = config.spec;
    cases
        .par_iter()
        .map(|case| {
            row(
                case,
                &spec,
                config.tolerance.unwrap_or(case.identity.tolerance()),
            )
        })
        .collect()
}

/// Exit code and rows of a verify run.
pub fn run_verify(config: &RunConfig) -> Result<(i32, Vec<VerifyRow>), CliError> {
    let rows = verify_rows(config)?;
    let code = if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    };
    Ok((code, rows))
}

/// One row for `identity` on field `v` at `(x, r)` with the given spec.
pub(crate) fn field_row(
    identity: Identity,
    v: &ScalarField64,
    x: Point64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<VerifyRow, CliError> {
    let case = Case::field(identity, v.clone(), x, r, frequency(v));
    row(&case, spec, identity.tolerance())
}
