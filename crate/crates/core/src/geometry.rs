//! Planar domains: discs, regions star-shaped about a center with a
//! trigonometric-polynomial boundary radius, and polygons star-shaped about an
//! anchor vertex-interior point.
//!
//! Every domain has a *pole* (disc center, star center, polygon anchor). Means
//! with the logarithmic weight are integrated in polar or fan coordinates about
//! the pole so that the area element absorbs the singularity.

use serde::{Deserialize, Serialize};

use crate::compensated::{compensated_sum, NeumaierSum};
use crate::error::{Error, Result};
use crate::fields::Point;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Maximum trigonometric degree of a star boundary.
pub const MAX_STAR_DEGREE: usize = 16;
/// Angular samples used to validate positivity of a star boundary radius and to
/// measure boundary clearance.
pub const BOUNDARY_SAMPLES: usize = 4096;
/// Midpoint nodes used for the area of a star domain.
pub const STAR_AREA_NODES: usize = 2048;
/// Strict clearance required between an admissible disc and the boundary.
pub const ADMISSIBLE_CLEARANCE: f64 = 1e-12;

const RAY_SAMPLES: usize = 64;
const RAY_BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc<T> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Real> Disc<T> {
    pub fn new(center: Point<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "disc radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn area(&self) -> T {
        T::PI() * self.radius * self.radius
    }
}

/// Region `{ c + ρ (cos θ, sin θ) : 0 <= ρ < R(θ) }` with
/// `R(θ) = c0 + Σ a_k cos kθ + b_k sin kθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDomain<T> {
    center: Point<T>,
    c0: T,
    cos: Vec<T>,
    sin: Vec<T>,
}

impl<T: Real> StarDomain<T> {
    /// Coefficient vectors may differ in length; the shorter is zero-padded.
    pub fn new(center: Point<T>, c0: T, cos: Vec<T>, sin: Vec<T>) -> Result<Self> {
        let degree = cos.len().max(sin.len());
        if degree > MAX_STAR_DEGREE {
            return Err(Error::InvalidDomain(format!(
                "star boundary degree {degree} exceeds {MAX_STAR_DEGREE}"
            )));
        }
        let mut cos = cos;
        let mut sin = sin;
        cos.resize(degree, T::zero());
        sin.resize(degree, T::zero());
        if !center.is_finite()
            || !c0.is_finite()
            || cos.iter().chain(sin.iter()).any(|c| !c.is_finite())
        {
            return Err(Error::InvalidDomain(
                "star coefficients must be finite".into(),
            ));
        }
        let star = Self {
            center,
            c0,
            cos,
            sin,
        };
        for j in 0..BOUNDARY_SAMPLES {
            let theta = T::TAU() * from_usize(j) / from_usize(BOUNDARY_SAMPLES);
            if !(star.radius_at(theta) > T::zero()) {
                return Err(Error::InvalidDomain(format!(
                    "star boundary radius is not positive at angle {theta}"
                )));
            }
        }
        Ok(star)
    }

    /// Disc of radius `r` about `center`, written in star form.
    pub fn circle(center: Point<T>, r: T) -> Result<Self> {
        Self::new(center, r, Vec::new(), Vec::new())
    }

    pub fn center(&self) -> Point<T> {
        self.center
    }

    pub fn c0(&self) -> T {
        self.c0
    }

    pub fn cos_coeffs(&self) -> &[T] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[T] {
        &self.sin
    }

    /// Boundary radius `R(θ)`.
    pub fn radius_at(&self, theta: T) -> T {
        let mut acc = NeumaierSum::new();
        acc.add(self.c0);
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let (s, c) = (from_usize::<T>(k + 1) * theta).sin_cos();
            acc.add(*a * c);
            acc.add(*b * s);
        }
        acc.value()
    }

    /// Upper bound on `R(θ)`.
    fn radius_bound(&self) -> T {
        self.cos
            .iter()
            .chain(&self.sin)
            .fold(self.c0.abs(), |acc, c| acc + c.abs())
    }

    pub fn area(&self) -> T {
        let n = STAR_AREA_NODES;
        let h = T::TAU() / from_usize(n);
        let sum = compensated_sum((0..n).map(|j| {
            let r = self.radius_at((from_usize::<T>(j) + lit(0.5)) * h);
            r * r
        }));
        lit::<T>(0.5) * h * sum
    }

    fn boundary_point(&self, theta: T) -> Point<T> {
        self.center + Point::polar(self.radius_at(theta), theta)
    }

    fn scaled(&self, factor: T) -> Self {
        Self {
            center: self.center,
            c0: self.c0 * factor,
            cos: self.cos.iter().map(|c| *c * factor).collect(),
            sin: self.sin.iter().map(|c| *c * factor).collect(),
        }
    }

    /// `g(ρ) = |x0 + ρ e - c| - R(arg)`, negative inside.
    fn ray_gap(&self, x0: Point<T>, dir: Point<T>, rho: T) -> T {
        let q = x0 + dir * rho - self.center;
        q.norm() - self.radius_at(q.angle())
    }

    /// Distance from `x0` to the boundary along direction `theta`.
    fn ray_exit(&self, x0: Point<T>, theta: T) -> Result<T> {
        if x0 == self.center {
            return Ok(self.radius_at(theta));
        }
        let not_star = || Error::NotStarShaped {
            x1: to_f64(x0.x1),
            x2: to_f64(x0.x2),
        };
        let dir = Point::polar(T::one(), theta);
        let reach = (x0 - self.center).norm() + self.radius_bound() * lit(1.01);
        let step = reach / from_usize(RAY_SAMPLES);
        if !(self.ray_gap(x0, dir, T::zero()) < T::zero()) {
            return Err(not_star());
        }
        let mut bracket = None;
        let mut prev_rho = T::zero();
        for j in 1..=RAY_SAMPLES {
            let rho = step * from_usize(j);
            let inside = self.ray_gap(x0, dir, rho) < T::zero();
            match (bracket.is_some(), inside) {
                (false, false) => bracket = Some((prev_rho, rho)),
                // the ray re-enters the domain: not visible from x0
                (true, true) => return Err(not_star()),
                _ => {}
            }
            prev_rho = rho;
        }
        let (mut lo, mut hi) = bracket.ok_or_else(not_star)?;
        for _ in 0..RAY_BISECTION_STEPS {
            let mid = (lo + hi) / lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ray_gap(x0, dir, mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / lit(2.0))
    }

    fn rotated(&self, angle: T) -> Self {
        let mut cos = Vec::with_capacity(self.cos.len());
        let mut sin = Vec::with_capacity(self.sin.len());
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let (s, c) = (from_usize::<T>(k + 1) * angle).sin_cos();
            cos.push(*a * c - *b * s);
            sin.push(*a * s + *b * c);
        }
        Self {
            center: self.center,
            c0: self.c0,
            cos,
            sin,
        }
    }
}

/// Simple counterclockwise polygon, star-shaped with respect to `anchor`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonDomain<T> {
    vertices: Vec<Point<T>>,
    anchor: Point<T>,
}

fn orientation<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    (b - a).cross(c - a)
}

fn on_segment<T: Real>(a: Point<T>, b: Point<T>, p: Point<T>) -> bool {
    p.x1 >= a.x1.min(b.x1)
        && p.x1 <= a.x1.max(b.x1)
        && p.x2 >= a.x2.min(b.x2)
        && p.x2 <= a.x2.max(b.x2)
}

fn segments_intersect<T: Real>(p1: Point<T>, p2: Point<T>, q1: Point<T>, q2: Point<T>) -> bool {
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    let zero = T::zero();
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
        && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        return true;
    }
    (d1 == zero && on_segment(q1, q2, p1))
        || (d2 == zero && on_segment(q1, q2, p2))
        || (d3 == zero && on_segment(p1, p2, q1))
        || (d4 == zero && on_segment(p1, p2, q2))
}

fn segment_distance<T: Real>(a: Point<T>, b: Point<T>, p: Point<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sq();
    let t = if len2 > T::zero() {
        ((p - a).dot(ab) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    (a + ab * t).distance(p)
}

impl<T: Real> PolygonDomain<T> {
    pub fn new(vertices: Vec<Point<T>>, anchor: Point<T>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!(
                "polygon needs at least 3 vertices, got {n}"
            )));
        }
        if !anchor.is_finite() || vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain(
                "polygon coordinates must be finite".into(),
            ));
        }
        let poly = Self { vertices, anchor };
        for i in 0..n {
            let (a, b) = poly.edge(i);
            if a == b {
                return Err(Error::InvalidDomain(format!(
                    "repeated vertex at index {i}"
                )));
            }
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = poly.edge(j);
                if adjacent {
                    // adjacent edges may only share their common vertex
                    let (shared, far_i, far_j) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if orientation(shared, far_i, far_j) == T::zero()
                        && (far_j - shared).dot(far_i - shared) > T::zero()
                    {
                        return Err(Error::InvalidDomain(format!("edges {i} and {j} overlap")));
                    }
                } else if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidDomain(format!(
                        "polygon is not simple: edges {i} and {j} intersect"
                    )));
                }
            }
        }
        if !(poly.signed_area() > T::zero()) {
            return Err(Error::InvalidDomain(
                "polygon must be counterclockwise with positive area".into(),
            ));
        }
        poly.check_visible_from(anchor)?;
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn anchor(&self) -> Point<T> {
        self.anchor
    }

    fn edge(&self, i: usize) -> (Point<T>, Point<T>) {
        (
            self.vertices[i],
            self.vertices[(i + 1) % self.vertices.len()],
        )
    }

    pub(crate) fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        (0..self.vertices.len()).map(|i| self.edge(i))
    }

    /// Shoelace formula.
    pub fn signed_area(&self) -> T {
        let sum = compensated_sum(self.edges().map(|(a, b)| a.cross(b)));
        sum / lit(2.0)
    }

    /// Every fan triangle `(x0, v_i, v_{i+1})` must be positively oriented.
    pub fn check_visible_from(&self, x0: Point<T>) -> Result<()> {
        if self
            .edges()
            .all(|(a, b)| (a - x0).cross(b - x0) > T::zero())
        {
            Ok(())
        } else {
            Err(Error::NotStarShaped {
                x1: to_f64(x0.x1),
                x2: to_f64(x0.x2),
            })
        }
    }

    /// Winding number of the boundary about `p`.
    pub fn winding_number(&self, p: Point<T>) -> i32 {
        let mut wn = 0;
        for (a, b) in self.edges() {
            if a.x2 <= p.x2 {
                if b.x2 > p.x2 && orientation(a, b, p) > T::zero() {
                    wn += 1;
                }
            } else if b.x2 <= p.x2 && orientation(a, b, p) < T::zero() {
                wn -= 1;
            }
        }
        wn
    }

    fn scaled(&self, factor: T) -> Self {
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|v| self.anchor + (*v - self.anchor) * factor)
                .collect(),
            anchor: self.anchor,
        }
    }
}

/// A bounded planar domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<T> {
    Disc(Disc<T>),
    Star(StarDomain<T>),
    Polygon(PolygonDomain<T>),
}

/// Polar description of a domain about a point from which it is star-shaped.
pub(crate) enum PolarView<'a, T> {
    /// Radial extent `R(θ)` along each direction.
    Rays(Box<dyn Fn(T) -> Result<T> + 'a>),
    /// Fan of triangles `(x0, a, b)`, one per polygon edge.
    Fan(Vec<(Point<T>, Point<T>)>),
}

impl<T: Real> Domain<T> {
    pub fn disc(center: Point<T>, radius: T) -> Result<Self> {
        Ok(Self::Disc(Disc::new(center, radius)?))
    }

    pub fn star(center: Point<T>, c0: T, cos: Vec<T>, sin: Vec<T>) -> Result<Self> {
        Ok(Self::Star(StarDomain::new(center, c0, cos, sin)?))
    }

    pub fn polygon(vertices: Vec<Point<T>>, anchor: Point<T>) -> Result<Self> {
        Ok(Self::Polygon(PolygonDomain::new(vertices, anchor)?))
    }

    /// Disc center, star center or polygon anchor.
    pub fn pole(&self) -> Point<T> {
        match self {
            Self::Disc(d) => d.center,
            Self::Star(s) => s.center,
            Self::Polygon(p) => p.anchor,
        }
    }

    pub fn area(&self) -> T {
        match self {
            Self::Disc(d) => d.area(),
            Self::Star(s) => s.area(),
            Self::Polygon(p) => p.signed_area(),
        }
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        match self {
            Self::Disc(d) => (p - d.center).norm() < d.radius,
            Self::Star(s) => {
                let q = p - s.center;
                q.norm() < s.radius_at(q.angle())
            }
            Self::Polygon(poly) => poly.winding_number(p) != 0,
        }
    }

    /// Distance from `p` to the boundary; star boundaries are sampled at
    /// [`BOUNDARY_SAMPLES`] angles.
    pub fn boundary_distance(&self, p: Point<T>) -> T {
        match self {
            Self::Disc(d) => ((p - d.center).norm() - d.radius).abs(),
            Self::Star(s) => (0..BOUNDARY_SAMPLES)
                .map(|j| {
                    let theta = T::TAU() * from_usize(j) / from_usize(BOUNDARY_SAMPLES);
                    s.boundary_point(theta).distance(p)
                })
                .fold(T::infinity(), T::min),
            Self::Polygon(poly) => poly
                .edges()
                .map(|(a, b)| segment_distance(a, b, p))
                .fold(T::infinity(), T::min),
        }
    }

    /// True iff the closed disc lies inside the domain with clearance
    /// [`ADMISSIBLE_CLEARANCE`].
    pub fn is_admissible(&self, disc: &Disc<T>) -> bool {
        self.contains(disc.center)
            && self.boundary_distance(disc.center) > disc.radius + lit(ADMISSIBLE_CLEARANCE)
    }

    /// Homothety about the pole with the given resulting area.
    pub fn scale_to_area(&self, target_area: T) -> Result<Self> {
        if !(target_area > T::zero()) || !target_area.is_finite() {
            return Err(Error::Precondition(format!(
                "target area must be positive, got {target_area}"
            )));
        }
        let factor = (target_area / self.area()).sqrt();
        Ok(match self {
            Self::Disc(d) => Self::Disc(Disc::new(d.center, d.radius * factor)?),
            Self::Star(s) => Self::Star(s.scaled(factor)),
            Self::Polygon(p) => Self::Polygon(p.scaled(factor)),
        })
    }

    /// Rotation by `angle` about the pole followed by translation by `shift`.
    pub fn rigid_motion(&self, angle: T, shift: Point<T>) -> Self {
        let (s, c) = angle.sin_cos();
        let rotate = |v: Point<T>| Point::new(c * v.x1 - s * v.x2, s * v.x1 + c * v.x2);
        match self {
            Self::Disc(d) => Self::Disc(Disc {
                center: d.center + shift,
                radius: d.radius,
            }),
            Self::Star(st) => {
                let mut r = st.rotated(angle);
                r.center = st.center + shift;
                Self::Star(r)
            }
            Self::Polygon(p) => Self::Polygon(PolygonDomain {
                vertices: p
                    .vertices
                    .iter()
                    .map(|v| p.anchor + rotate(*v - p.anchor) + shift)
                    .collect(),
                anchor: p.anchor + shift,
            }),
        }
    }

    /// Polar description about `x0`, or [`Error::NotStarShaped`] when `x0` does
    /// not see the whole boundary.
    pub(crate) fn polar_view(&self, x0: Point<T>) -> Result<PolarView<'_, T>> {
        let not_star = || Error::NotStarShaped {
            x1: to_f64(x0.x1),
            x2: to_f64(x0.x2),
        };
        match self {
            Self::Disc(d) => {
                let offset = x0 - d.center;
                let gap = d.radius * d.radius - offset.norm_sq();
                if !(gap > T::zero()) {
                    return Err(not_star());
                }
                let center_hit = offset == Point::origin();
                let radius = d.radius;
                Ok(PolarView::Rays(Box::new(move |theta: T| {
                    if center_hit {
                        return Ok(radius);
                    }
                    // positive root of |offset + ρ e|² = R²
                    let b = offset.dot(Point::polar(T::one(), theta));
                    let disc = b * b + gap;
                    Ok(gap / (b + disc.sqrt()))
                })))
            }
            Self::Star(s) => {
                if !self.contains(x0) {
                    return Err(not_star());
                }
                Ok(PolarView::Rays(Box::new(move |theta| {
                    s.ray_exit(x0, theta)
                })))
            }
            Self::Polygon(p) => {
                p.check_visible_from(x0)?;
                Ok(PolarView::Fan(p.edges().collect()))
            }
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        let pt = |c: [f64; 2]| Point::new(lit::<T>(c[0]), lit::<T>(c[1]));
        match spec {
            DomainSpec::Disc { center, radius } => Self::disc(pt(*center), lit(*radius)),
            DomainSpec::Star {
                center,
                c0,
                cos,
                sin,
            } => Self::star(
                pt(*center),
                lit(*c0),
                cos.iter().map(|c| lit(*c)).collect(),
                sin.iter().map(|c| lit(*c)).collect(),
            ),
            DomainSpec::Polygon { anchor, vertices } => {
                Self::polygon(vertices.iter().map(|v| pt(*v)).collect(), pt(*anchor))
            }
        }
    }

    pub fn to_spec(&self) -> DomainSpec {
        let arr = |p: Point<T>| [to_f64(p.x1), to_f64(p.x2)];
        match self {
            Self::Disc(d) => DomainSpec::Disc {
                center: arr(d.center),
                radius: to_f64(d.radius),
            },
            Self::Star(s) => DomainSpec::Star {
                center: arr(s.center),
                c0: to_f64(s.c0),
                cos: s.cos.iter().map(|c| to_f64(*c)).collect(),
                sin: s.sin.iter().map(|c| to_f64(*c)).collect(),
            },
            Self::Polygon(p) => DomainSpec::Polygon {
                anchor: arr(p.anchor),
                vertices: p.vertices.iter().map(|v| arr(*v)).collect(),
            },
        }
    }

    /// Parses the JSON domain file format.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&DomainSpec::from_json(text)?)
    }
}

/// On-disk domain description.
///
/// ```json
/// {"type":"disc","center":[0,0],"radius":1.0}
/// {"type":"star","center":[0,0],"c0":1.0,"cos":[0.1,0.0],"sin":[0.0,0.05]}
/// {"type":"polygon","anchor":[0.5,0.5],"vertices":[[0,0],[1,0],[1,1],[0,1]]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Disc {
        center: [f64; 2],
        radius: f64,
    },
    Star {
        center: [f64; 2],
        c0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Polygon {
        anchor: [f64; 2],
        vertices: Vec<[f64; 2]>,
    },
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDomain(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(x1: f64, x2: f64) -> Point<f64> {
        Point::new(x1, x2)
    }

    fn unit_square() -> Domain<f64> {
        Domain::polygon(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            p(0.5, 0.5),
        )
        .unwrap()
    }

    #[test]
    fn areas() {
        assert!((Domain::disc(p(0.0, 0.0), 1.0).unwrap().area() - PI).abs() <= 1e-14);
        let circle = Domain::star(p(0.0, 0.0), 1.0, vec![], vec![]).unwrap();
        assert!((circle.area() - PI).abs() <= 1e-13);
        assert_eq!(unit_square().area(), 1.0);
        // R = 1 + 0.2 cos 2θ: area = π (1 + 0.02)
        let ellipse = Domain::star(p(0.3, 0.1), 1.0, vec![0.0, 0.2], vec![]).unwrap();
        assert!((ellipse.area() - PI * 1.02).abs() <= 1e-13);
    }

    #[test]
    fn containment() {
        let d = Domain::disc(p(0.0, 0.0), 1.0).unwrap();
        assert!(d.contains(p(0.5, 0.0)));
        assert!(!d.contains(p(1.5, 0.0)));
        assert!(unit_square().contains(p(0.5, 0.5)));
        assert!(!unit_square().contains(p(1.5, 0.5)));
        let star = Domain::star(p(0.0, 0.0), 1.0, vec![0.0, 0.2], vec![]).unwrap();
        assert!(star.contains(p(1.1, 0.0)));
        assert!(!star.contains(p(0.0, 0.9)));
    }

    #[test]
    fn admissibility() {
        let unit = Domain::disc(p(0.0, 0.0), 1.0).unwrap();
        assert!(unit.is_admissible(&Disc::new(p(0.0, 0.0), 0.5).unwrap()));
        assert!(!unit.is_admissible(&Disc::new(p(0.0, 0.0), 1.0).unwrap()));
        let sq = unit_square();
        assert!(sq.is_admissible(&Disc::new(p(0.5, 0.5), 0.3).unwrap()));
        // tangent to all four sides
        assert!(!sq.is_admissible(&Disc::new(p(0.5, 0.5), 0.5).unwrap()));
        assert!(!sq.is_admissible(&Disc::new(p(0.2, 0.5), 0.2).unwrap()));
        assert!(!sq.is_admissible(&Disc::new(p(1.5, 0.5), 0.1).unwrap()));
        let circle = Domain::star(p(0.0, 0.0), 1.0, vec![], vec![]).unwrap();
        assert!(circle.is_admissible(&Disc::new(p(0.1, 0.0), 0.8).unwrap()));
        assert!(!circle.is_admissible(&Disc::new(p(0.1, 0.0), 0.9).unwrap()));
    }

    #[test]
    fn scaling() {
        let d = Domain::disc(p(1.0, 2.0), 1.0).unwrap();
        match d.scale_to_area(4.0 * PI).unwrap() {
            Domain::Disc(s) => assert!((s.radius - 2.0).abs() < 1e-15),
            _ => unreachable!(),
        }
        let sq = unit_square().scale_to_area(PI).unwrap();
        assert!((sq.area() - PI).abs() <= 1e-13);
        if let Domain::Polygon(poly) = &sq {
            let side = poly.vertices()[0].distance(poly.vertices()[1]);
            assert!((side - PI.sqrt()).abs() < 1e-14);
        }
        let star = Domain::star(p(0.0, 0.0), 1.0, vec![0.1, 0.0], vec![0.0, 0.05]).unwrap();
        let same = star.scale_to_area(star.area()).unwrap();
        assert_eq!(same, star);
    }

    #[test]
    fn polygon_validation() {
        let bowtie = Domain::polygon(
            vec![p(0.0, 0.0), p(1.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)],
            p(0.5, 0.5),
        );
        assert!(matches!(bowtie, Err(Error::InvalidDomain(_))));
        let clockwise = Domain::polygon(
            vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)],
            p(0.5, 0.5),
        );
        assert!(clockwise.is_err());
        let hidden = Domain::polygon(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            p(1.5, 0.5),
        );
        assert!(matches!(hidden, Err(Error::NotStarShaped { .. })));
        // L-shape seen from a corner of the notch is not star-shaped
        let l_shape = Domain::polygon(
            vec![
                p(0.0, 0.0),
                p(2.0, 0.0),
                p(2.0, 1.0),
                p(1.0, 1.0),
                p(1.0, 2.0),
                p(0.0, 2.0),
            ],
            p(1.8, 0.2),
        );
        assert!(l_shape.is_err());
        assert!(Domain::polygon(vec![p(0.0, 0.0), p(1.0, 0.0)], p(0.5, 0.0)).is_err());
    }

    #[test]
    fn star_validation() {
        assert!(Domain::star(p(0.0, 0.0), 0.5, vec![0.0, 0.6], vec![]).is_err());
        assert!(Domain::star(p(0.0, 0.0), 1.0, vec![0.0; 17], vec![]).is_err());
        assert!(Domain::disc(p(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn file_format() {
        let disc: Domain<f64> =
            Domain::from_json(r#"{"type":"disc","center":[0,0],"radius":1.0}"#).unwrap();
        assert_eq!(disc, Domain::disc(p(0.0, 0.0), 1.0).unwrap());
        let star: Domain<f64> = Domain::from_json(
            r#"{"type":"star","center":[0,0],"c0":1.0,"cos":[0.1,0.0],"sin":[0.0,0.05]}"#,
        )
        .unwrap();
        assert_eq!(
            star.to_spec(),
            DomainSpec::from_json(&star.to_spec().to_json()).unwrap()
        );
        let poly: Domain<f64> = Domain::from_json(
            r#"{"type":"polygon","anchor":[0.5,0.5],"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#,
        )
        .unwrap();
        assert_eq!(poly, unit_square());
        assert!(Domain::<f64>::from_json(r#"{"type":"blob"}"#).is_err());
        assert!(
            Domain::<f64>::from_json(r#"{"type":"disc","center":[0,0],"radius":1,"x":2}"#).is_err()
        );
    }

    #[test]
    fn ray_exit_about_offset_point() {
        let disc = Domain::disc(p(0.3, -0.2), 0.8).unwrap();
        let star = Domain::star(p(0.3, -0.2), 0.8, vec![], vec![]).unwrap();
        let x0 = p(0.1, 0.1);
        let (PolarView::Rays(f), PolarView::Rays(g)) =
            (disc.polar_view(x0).unwrap(), star.polar_view(x0).unwrap())
        else {
            unreachable!()
        };
        for j in 0..16 {
            let theta = j as f64 * 0.4;
            let a = f(theta).unwrap();
            let b = g(theta).unwrap();
            assert!((a - b).abs() < 1e-14, "{a} {b}");
            assert!(((x0 + Point::polar(a, theta)) - p(0.3, -0.2)).norm() - 0.8 < 1e-15);
        }
        assert!(disc.polar_view(p(2.0, 0.0)).is_err());
    }

    #[test]
    fn rigid_motion_preserves_area() {
        let star = Domain::star(p(0.0, 0.0), 1.0, vec![0.1, 0.2], vec![0.05]).unwrap();
        let moved = star.rigid_motion(0.7, p(1.0, -2.0));
        assert!((moved.area() - star.area()).abs() < 1e-13);
        let Domain::Star(s) = &star else {
            unreachable!()
        };
        let Domain::Star(m) = &moved else {
            unreachable!()
        };
        for j in 0..8 {
            let theta = j as f64 * 0.77;
            assert!((m.radius_at(theta + 0.7) - s.radius_at(theta)).abs() < 1e-14);
        }
        let sq = unit_square().rigid_motion(0.3, p(2.0, 0.0));
        assert!((sq.area() - 1.0).abs() < 1e-14);
        assert!(sq.contains(p(2.5, 0.5)));
    }
}
