//! Exact solution families of the modified Helmholtz, Laplace and Helmholtz
//! equations. Every field carries an analytic Laplacian so that Green-identity
//! checks do not mix differentiation error into quadrature error.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::{i0_unchecked, j0_unchecked};

/// Largest degree accepted by [`ScalarField::harmonic_poly`].
pub const MAX_HARMONIC_DEGREE: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Real> Point<T> {
    pub fn new(x1: T, x2: T) -> Self {
        Self { x1, x2 }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn polar(radius: T, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    pub fn norm(self) -> T {
        self.x1.hypot(self.x2)
    }

    pub fn norm_sq(self) -> T {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    pub fn dot(self, other: Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Self) -> T {
        self.x1 * other.x2 - self.x2 * other.x1
    }

    pub fn angle(self) -> T {
        self.x2.atan2(self.x1)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn cast<U: Real>(self) -> Point<U> {
        Point::new(lit(to_f64(self.x1)), lit(to_f64(self.x2)))
    }
}

impl<T: Real> Add for Point<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl<T: Real> Sub for Point<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl<T: Real> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x1 * rhs, self.x2 * rhs)
    }
}

/// Equation class of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind<T> {
    /// `∇²v = μ² v`
    Panharmonic(T),
    /// `∇²v = 0`
    Harmonic,
    /// `∇²u = -λ² u`
    Helmholtz(T),
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicPart {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, PartialEq)]
enum Family<T> {
    PlanePanharmonic { mu: T, theta: T, dir: Point<T> },
    RadialPanharmonic { mu: T, center: Point<T> },
    SeparablePanharmonic { alpha: T, beta: T },
    HarmonicPoly { k: u32, part: HarmonicPart },
    PlaneHelmholtz { lambda: T, theta: T, dir: Point<T> },
    RadialHelmholtz { lambda: T, center: Point<T> },
    Quadratic,
}

/// A PDE solution (or test function) with point evaluation and exact Laplacian.
///
/// Fields are immutable; [`ScalarField::scaled`] returns a new field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T> {
    family: Family<T>,
    amplitude: T,
    kind: FieldKind<T>,
    positive: bool,
}

fn direction<T: Real>(theta: T) -> Point<T> {
    let (s, c) = theta.sin_cos();
    Point::new(c, s)
}

impl<T: Real> ScalarField<T> {
    fn build(family: Family<T>, kind: FieldKind<T>, positive: bool) -> Self {
        Self {
            family,
            amplitude: T::one(),
            kind,
            positive,
        }
    }

    /// `exp(μ x·d)` with `d = (cos θ, sin θ)`.
    pub fn plane_panharmonic(mu: T, theta: T) -> Self {
        debug_assert!(mu > T::zero());
        Self::build(
            Family::PlanePanharmonic {
                mu,
                theta,
                dir: direction(theta),
            },
            FieldKind::Panharmonic(mu),
            true,
        )
    }

    /// `I0(μ|x - c|)`, the radial entire solution; equals 1 at `c`.
    ///
    /// Evaluation uses the `I0` series directly, so `μ|x - c|` should stay within
    /// [`crate::specfun::T_MAX`] for the documented accuracy.
    pub fn radial_panharmonic(mu: T, center: Point<T>) -> Self {
        debug_assert!(mu > T::zero());
        Self::build(
            Family::RadialPanharmonic { mu, center },
            FieldKind::Panharmonic(mu),
            true,
        )
    }

    /// `cosh(α x1) cosh(β x2)`, panharmonic with `μ = sqrt(α² + β²)`.
    pub fn separable_panharmonic(alpha: T, beta: T) -> Result<Self> {
        if alpha == T::zero() && beta == T::zero() {
            return Err(Error::Precondition(
                "separable_panharmonic needs (alpha, beta) != (0, 0)".into(),
            ));
        }
        Ok(Self::build(
            Family::SeparablePanharmonic { alpha, beta },
            FieldKind::Panharmonic(alpha.hypot(beta)),
            true,
        ))
    }

    /// `Re (x1 + i x2)^k` or `Im (x1 + i x2)^k`.
    pub fn harmonic_poly(k: u32, part: HarmonicPart) -> Result<Self> {
        if k > MAX_HARMONIC_DEGREE {
            return Err(Error::Precondition(format!(
                "harmonic_poly degree {k} exceeds {MAX_HARMONIC_DEGREE}"
            )));
        }
        let positive = k == 0 && part == HarmonicPart::Real;
        Ok(Self::build(
            Family::HarmonicPoly { k, part },
            FieldKind::Harmonic,
            positive,
        ))
    }

    /// The constant 1 (harmonic, positive).
    pub fn constant_one() -> Self {
        Self::build(
            Family::HarmonicPoly {
                k: 0,
                part: HarmonicPart::Real,
            },
            FieldKind::Harmonic,
            true,
        )
    }

    /// `cos(λ x·d)`.
    pub fn plane_helmholtz(lambda: T, theta: T) -> Self {
        debug_assert!(lambda > T::zero());
        Self::build(
            Family::PlaneHelmholtz {
                lambda,
                theta,
                dir: direction(theta),
            },
            FieldKind::Helmholtz(lambda),
            false,
        )
    }

    /// `J0(λ|x - c|)`.
    pub fn radial_helmholtz(lambda: T, center: Point<T>) -> Self {
        debug_assert!(lambda > T::zero());
        Self::build(
            Family::RadialHelmholtz { lambda, center },
            FieldKind::Helmholtz(lambda),
            false,
        )
    }

    /// `|x|²`, which solves none of the equations; its Laplacian is 4.
    pub fn quadratic_nonsolution() -> Self {
        Self::build(Family::Quadratic, FieldKind::General, false)
    }

    /// The field multiplied by `factor`. Positivity survives only for `factor > 0`.
    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        out.amplitude = self.amplitude * factor;
        out.positive = self.positive && factor > T::zero();
        out
    }

    pub fn kind(&self) -> FieldKind<T> {
        self.kind
    }

    /// True when the field is strictly positive on the whole plane.
    pub fn is_positive(&self) -> bool {
        self.positive
    }

    fn shape(&self, p: Point<T>) -> T {
        match &self.family {
            Family::PlanePanharmonic { mu, dir, .. } => (*mu * p.dot(*dir)).exp(),
            Family::RadialPanharmonic { mu, center } => i0_unchecked(*mu * (p - *center).norm()),
            Family::SeparablePanharmonic { alpha, beta } => {
                (*alpha * p.x1).cosh() * (*beta * p.x2).cosh()
            }
            Family::HarmonicPoly { k, part } => {
                let (re, im) = complex_power(p, *k);
                match part {
                    HarmonicPart::Real => re,
                    HarmonicPart::Imaginary => im,
                }
            }
            Family::PlaneHelmholtz { lambda, dir, .. } => (*lambda * p.dot(*dir)).cos(),
            Family::RadialHelmholtz { lambda, center } => {
                j0_unchecked(*lambda * (p - *center).norm())
            }
            Family::Quadratic => p.norm_sq(),
        }
    }

    pub fn evaluate(&self, p: Point<T>) -> T {
        self.amplitude * self.shape(p)
    }

    /// Exact `∇²v(p)`.
    pub fn laplacian(&self, p: Point<T>) -> T {
        match self.kind {
            FieldKind::Panharmonic(mu) => mu * mu * self.evaluate(p),
            FieldKind::Harmonic => T::zero(),
            FieldKind::Helmholtz(lambda) => -(lambda * lambda) * self.evaluate(p),
            FieldKind::General => self.amplitude * lit(4.0),
        }
    }

    /// Descriptor string in the CLI syntax; the amplitude is not encoded.
    pub fn descriptor(&self) -> String {
        match &self.family {
            Family::PlanePanharmonic { mu, theta, .. } => {
                format!("plane-mhh:mu={mu},theta={theta}")
            }
            Family::RadialPanharmonic { mu, center } => {
                format!("radial-mhh:mu={mu},cx={},cy={}", center.x1, center.x2)
            }
            Family::SeparablePanharmonic { alpha, beta } => {
                format!("sep-mhh:alpha={alpha},beta={beta}")
            }
            Family::HarmonicPoly { k, part } => format!(
                "harm-poly:k={k},part={}",
                match part {
                    HarmonicPart::Real => "re",
                    HarmonicPart::Imaginary => "im",
                }
            ),
            Family::PlaneHelmholtz { lambda, theta, .. } => {
                format!("plane-hh:lambda={lambda},theta={theta}")
            }
            Family::RadialHelmholtz { lambda, center } => {
                format!(
                    "radial-hh:lambda={lambda},cx={},cy={}",
                    center.x1, center.x2
                )
            }
            Family::Quadratic => "quad".to_string(),
        }
    }

    /// Parses a descriptor such as `plane-mhh:mu=2,theta=0.3` or `quad`.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, params) = match text.split_once(':') {
            Some((n, p)) => (n.trim(), p.trim()),
            None => (text, ""),
        };
        let params = Params::parse(params)?;
        let field = match name {
            "plane-mhh" => {
                let mu = params.positive("mu")?;
                Self::plane_panharmonic(mu, params.get_or("theta", T::zero())?)
            }
            "radial-mhh" => {
                let mu = params.positive("mu")?;
                Self::radial_panharmonic(mu, params.center()?)
            }
            "sep-mhh" => Self::separable_panharmonic(params.get("alpha")?, params.get("beta")?)
                .map_err(|e| Error::Descriptor(e.to_string()))?,
            "harm-poly" => {
                let k = params.raw("k")?;
                let k: u32 = k
                    .parse()
                    .map_err(|_| Error::Descriptor(format!("k must be an integer, got {k:?}")))?;
                let part = match params.raw_or("part", "re") {
                    "re" => HarmonicPart::Real,
                    "im" => HarmonicPart::Imaginary,
                    other => {
                        return Err(Error::Descriptor(format!(
                            "part must be re or im, got {other:?}"
                        )))
                    }
                };
                Self::harmonic_poly(k, part).map_err(|e| Error::Descriptor(e.to_string()))?
            }
            "plane-hh" => {
                let lambda = params.positive("lambda")?;
                Self::plane_helmholtz(lambda, params.get_or("theta", T::zero())?)
            }
            "radial-hh" => {
                let lambda = params.positive("lambda")?;
                Self::radial_helmholtz(lambda, params.center()?)
            }
            "quad" => Self::quadratic_nonsolution(),
            other => return Err(Error::Descriptor(format!("unknown field family {other:?}"))),
        };
        params.reject_unused()?;
        Ok(field)
    }
}

impl<T: Real> fmt::Display for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl<T: Real> FromStr for ScalarField<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_descriptor(s)
    }
}

/// `(x1 + i x2)^k` by the real two-term recurrence.
fn complex_power<T: Real>(p: Point<T>, k: u32) -> (T, T) {
    let (mut re, mut im) = (T::one(), T::zero());
    for _ in 0..k {
        let next_re = re * p.x1 - im * p.x2;
        im = re * p.x2 + im * p.x1;
        re = next_re;
    }
    (re, im)
}

struct Params<'a> {
    entries: Vec<(&'a str, &'a str)>,
    used: std::cell::RefCell<Vec<bool>>,
}

impl<'a> Params<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let mut entries = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Descriptor(format!("expected key=value, got {item:?}")))?;
            entries.push((k.trim(), v.trim()));
        }
        let used = std::cell::RefCell::new(vec![false; entries.len()]);
        Ok(Self { entries, used })
    }

    fn find(&self, key: &str) -> Option<&'a str> {
        let idx = self.entries.iter().position(|(k, _)| *k == key)?;
        self.used.borrow_mut()[idx] = true;
        Some(self.entries[idx].1)
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.find(key)
            .ok_or_else(|| Error::Descriptor(format!("missing parameter {key:?}")))
    }

    fn raw_or(&self, key: &str, default: &'a str) -> &'a str {
        self.find(key).unwrap_or(default)
    }

    fn number<T: Real>(key: &str, v: &str) -> Result<T> {
        let x: f64 = v
            .parse()
            .map_err(|_| Error::Descriptor(format!("{key}={v:?} is not a number")))?;
        if !x.is_finite() {
            return Err(Error::Descriptor(format!("{key} must be finite")));
        }
        Ok(lit(x))
    }

    fn get<T: Real>(&self, key: &str) -> Result<T> {
        Self::number(key, self.raw(key)?)
    }

    fn get_or<T: Real>(&self, key: &str, default: T) -> Result<T> {
        match self.find(key) {
            Some(v) => Self::number(key, v),
            None => Ok(default),
        }
    }

    fn positive<T: Real>(&self, key: &str) -> Result<T> {
        let x: T = self.get(key)?;
        if x <= T::zero() {
            return Err(Error::Descriptor(format!("{key} must be positive")));
        }
        Ok(x)
    }

    fn center<T: Real>(&self) -> Result<Point<T>> {
        Ok(Point::new(
            self.get_or("cx", T::zero())?,
            self.get_or("cy", T::zero())?,
        ))
    }

    fn reject_unused(&self) -> Result<()> {
        let used = self.used.borrow();
        match self.entries.iter().zip(used.iter()).find(|(_, u)| !**u) {
            Some(((k, _), _)) => Err(Error::Descriptor(format!("unexpected parameter {k:?}"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x1: f64, x2: f64) -> Point<f64> {
        Point::new(x1, x2)
    }

    #[test]
    fn plane_panharmonic_basics() {
        let v = ScalarField::plane_panharmonic(2.0, 0.3);
        assert_eq!(v.evaluate(Point::origin()), 1.0);
        let q = p(0.3, -0.7);
        assert!((v.laplacian(q) / v.evaluate(q) - 4.0).abs() < 1e-15);
        assert!(v.is_positive());
        assert_eq!(v.kind(), FieldKind::Panharmonic(2.0));
    }

    #[test]
    fn radial_panharmonic_basics() {
        let c = p(0.4, -1.0);
        let v = ScalarField::radial_panharmonic(1.0, c);
        assert_eq!(v.evaluate(c), 1.0);
        let far = ScalarField::radial_panharmonic(0.5, Point::origin()).evaluate(p(4.0, 0.0));
        assert!((far - 2.279585302336067).abs() < 1e-14);
        let near = v.evaluate(c + p(0.5, 0.0));
        assert!(near <= v.evaluate(c + p(1.0, 0.0)));
    }

    #[test]
    fn separable_basics() {
        let v = ScalarField::separable_panharmonic(1.0, 1.0).unwrap();
        assert_eq!(v.evaluate(Point::origin()), 1.0);
        let q = p(0.2, 0.4);
        assert!((v.laplacian(q) / v.evaluate(q) - 2.0).abs() < 1e-12);
        assert!(ScalarField::<f64>::separable_panharmonic(0.0, 0.0).is_err());
    }

    #[test]
    fn harmonic_polys() {
        let one = ScalarField::harmonic_poly(0, HarmonicPart::Real).unwrap();
        assert_eq!(one.evaluate(p(3.0, -8.0)), 1.0);
        assert!(one.is_positive());
        let re2 = ScalarField::harmonic_poly(2, HarmonicPart::Real).unwrap();
        assert_eq!(re2.evaluate(p(3.0, 2.0)), 5.0);
        let im2 = ScalarField::harmonic_poly(2, HarmonicPart::Imaginary).unwrap();
        assert_eq!(im2.evaluate(p(3.0, 2.0)), 12.0);
        assert!(!im2.is_positive());
        assert_eq!(re2.laplacian(p(1.0, 1.0)), 0.0);
        assert!(ScalarField::<f64>::harmonic_poly(13, HarmonicPart::Real).is_err());
    }

    #[test]
    fn helmholtz_basics() {
        let c = p(1.0, 2.0);
        let u = ScalarField::radial_helmholtz(2.0, c);
        assert_eq!(u.evaluate(c), 1.0);
        let w = ScalarField::plane_helmholtz(3.0, 0.0);
        let q = p(0.1, 0.5);
        assert!((w.laplacian(q) / w.evaluate(q) + 9.0).abs() < 1e-12);
        assert!(!w.is_positive());
    }

    #[test]
    fn quadratic_basics() {
        let w = ScalarField::<f64>::quadratic_nonsolution();
        assert_eq!(w.evaluate(Point::origin()), 0.0);
        assert_eq!(w.laplacian(Point::origin()), 4.0);
        assert_eq!(w.evaluate(p(1.0, 1.0)), 2.0);
        assert_eq!(w.scaled(3.0).laplacian(p(5.0, 5.0)), 12.0);
    }

    #[test]
    fn scaling_preserves_kind() {
        let v = ScalarField::plane_panharmonic(1.0, 0.0);
        let s = v.scaled(7.0);
        assert_eq!(s.evaluate(p(0.5, 0.1)), 7.0 * v.evaluate(p(0.5, 0.1)));
        assert!(s.is_positive());
        assert!(!v.scaled(-1.0).is_positive());
    }

    #[test]
    fn descriptors_round_trip() {
        for d in [
            "plane-mhh:mu=2,theta=0.3",
            "radial-mhh:mu=1,cx=0.5,cy=-1",
            "sep-mhh:alpha=1,beta=1",
            "harm-poly:k=2,part=re",
            "harm-poly:k=5,part=im",
            "plane-hh:lambda=2,theta=0",
            "radial-hh:lambda=2,cx=0,cy=0",
            "quad",
        ] {
            let f: ScalarField<f64> = d.parse().unwrap();
            let again: ScalarField<f64> = f.descriptor().parse().unwrap();
            assert_eq!(f, again, "{d}");
        }
        let f: ScalarField<f64> = "plane-mhh:mu=2,theta=0.3".parse().unwrap();
        assert_eq!(f, ScalarField::plane_panharmonic(2.0, 0.3));
    }

    #[test]
    fn descriptor_errors() {
        for bad in [
            "plane-mhh",
            "plane-mhh:mu=-1",
            "plane-mhh:mu=abc",
            "plane-mhh:mu=1,extra=2",
            "harm-poly:k=2,part=xx",
            "harm-poly:k=20",
            "nope:mu=1",
            "radial-hh:lambda",
        ] {
            assert!(bad.parse::<ScalarField<f64>>().is_err(), "{bad}");
        }
    }
}
