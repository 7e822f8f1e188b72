//! Circle, disc and domain means, with and without the weight `log(r/|x - y|)`.
//!
//! Area integrals are taken in polar coordinates about the singular point
//! (the disc center, or the pole of a star/polygon domain): the trapezoidal
//! rule in the angle and Gauss–Legendre on geometrically graded panels in the
//! radius. The area element `ρ dρ` cancels the logarithmic singularity and the
//! grading resolves the remaining `ρ log ρ` behavior near the pole. Polygons
//! are split into a fan of triangles about the pole, each pulled back to the
//! unit square by a collapsed-edge (Duffy) map whose collapsed edge sits at the
//! pole.
//!
//! All reductions run in a fixed node order with compensated accumulation, so
//! results are bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::compensated::NeumaierSum;
use crate::error::{Error, Result};
use crate::fields::{Point, ScalarField};
use crate::geometry::{Domain, PolarView};
use crate::scalar::{from_usize, lit, Real};

/// Along each polygon edge the fan rule uses
/// `max(1, n_theta / POLYGON_ANGLE_DIVISOR)` uniform Gauss–Legendre panels of
/// `radial_order` points.
pub const POLYGON_ANGLE_DIVISOR: usize = 32;
pub const MAX_RADIAL_ORDER: usize = 64;
pub const MIN_N_THETA: usize = 16;

/// Resolution of every integral in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Angular trapezoid nodes (even, at least 16).
    pub n_theta: usize,
    /// Radial panels, graded geometrically toward the pole.
    pub n_radial_panels: usize,
    /// Gauss–Legendre points per radial panel, in `[2, 64]`.
    pub radial_order: usize,
    /// Length ratio between consecutive panels, in `(0, 1)`.
    pub grading: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_theta: 256,
            n_radial_panels: 8,
            radial_order: 16,
            grading: 0.25,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < MIN_N_THETA || !self.n_theta.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "n_theta must be even and >= {MIN_N_THETA}, got {}",
                self.n_theta
            )));
        }
        if !(2..=MAX_RADIAL_ORDER).contains(&self.radial_order) {
            return Err(Error::InvalidSpec(format!(
                "radial_order must lie in [2, {MAX_RADIAL_ORDER}], got {}",
                self.radial_order
            )));
        }
        if self.n_radial_panels == 0 {
            return Err(Error::InvalidSpec("n_radial_panels must be >= 1".into()));
        }
        if !(self.grading > 0.0 && self.grading < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "grading must lie in (0, 1), got {}",
                self.grading
            )));
        }
        Ok(())
    }

    /// One refinement step: angular nodes, radial order and panel count doubled
    /// (order capped at 64).
    pub fn refined(&self) -> Self {
        Self {
            n_theta: self.n_theta * 2,
            n_radial_panels: self.n_radial_panels * 2,
            radial_order: (self.radial_order * 2).min(MAX_RADIAL_ORDER),
            grading: self.grading,
        }
    }
}

/// An integral mean together with the spec that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanResult<T> {
    pub value: T,
    pub spec_used: QuadratureSpec,
    /// `|value - value(refined spec)|` when requested through
    /// [`with_error_estimate`], zero otherwise.
    pub est_error: T,
}

impl<T: Real> MeanResult<T> {
    fn plain(value: T, spec: &QuadratureSpec) -> Self {
        Self {
            value,
            spec_used: *spec,
            est_error: T::zero(),
        }
    }
}

/// Runs `op` at `spec` and at `spec.refined()` and records the difference as
/// the error estimate of the coarse value.
pub fn with_error_estimate<T, F>(spec: &QuadratureSpec, op: F) -> Result<MeanResult<T>>
where
    T: Real,
    F: Fn(&QuadratureSpec) -> Result<MeanResult<T>>,
{
    let coarse = op(spec)?;
    let fine = op(&spec.refined())?;
    Ok(MeanResult {
        est_error: (coarse.value - fine.value).abs(),
        ..coarse
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    for k in 2..=n {
        let kf = from_usize::<T>(k);
        let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, from_usize::<T>(n) * (x * p1 - p0) / (x * x - T::one()))
}

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre<T: Real>(order: usize) -> Vec<(T, T)> {
    let n = order;
    let mut rule = vec![(T::zero(), T::zero()); n];
    let half = lit::<T>(0.5);
    for i in 0..n.div_ceil(2) {
        let mut x =
            (T::PI() * (from_usize::<T>(i) + lit(0.75)) / (from_usize::<T>(n) + half)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = T::one() / ((T::one() - x * x) * dp * dp);
        rule[i] = (half * (T::one() - x), w);
        rule[n - 1 - i] = (half * (T::one() + x), w);
    }
    rule
}

/// Composite rule on `[0, 1]`: panels with breakpoints `q^{P-1}, ..., q, 1`
/// plus the innermost `[0, q^{P-1}]`.
pub fn graded_rule<T: Real>(spec: &QuadratureSpec) -> Vec<(T, T)> {
    let q = lit::<T>(spec.grading);
    let panels = spec.n_radial_panels;
    let mut breaks = Vec::with_capacity(panels + 1);
    breaks.push(T::zero());
    for j in (0..panels).rev() {
        breaks.push(q.powi(j as i32));
    }
    panel_rule(&breaks, spec.radial_order)
}

fn uniform_rule<T: Real>(panels: usize, order: usize) -> Vec<(T, T)> {
    let breaks: Vec<T> = (0..=panels)
        .map(|j| from_usize::<T>(j) / from_usize(panels))
        .collect();
    panel_rule(&breaks, order)
}

fn panel_rule<T: Real>(breaks: &[T], order: usize) -> Vec<(T, T)> {
    let base = gauss_legendre::<T>(order);
    breaks
        .windows(2)
        .flat_map(|w| {
            let (a, b) = (w[0], w[1]);
            let len = b - a;
            base.iter().map(move |(x, wt)| (a + len * *x, len * *wt))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<T> {
    pub point: Point<T>,
    /// Distance from the pole.
    pub rho: T,
    /// Area weight, Jacobian included.
    pub weight: T,
}

/// Quadrature nodes for `∫ f dA` over a region, laid out about a pole.
#[derive(Debug, Clone)]
pub struct NodeSet<T> {
    pole: Point<T>,
    nodes: Vec<Node<T>>,
}

impl<T: Real> NodeSet<T> {
    fn polar<F>(pole: Point<T>, extent: F, spec: &QuadratureSpec) -> Result<Self>
    where
        F: Fn(T) -> Result<T>,
    {
        let radial = graded_rule::<T>(spec);
        let h = T::TAU() / from_usize(spec.n_theta);
        let mut nodes = Vec::with_capacity(spec.n_theta * radial.len());
        for j in 0..spec.n_theta {
            let theta = h * from_usize(j);
            let big_r = extent(theta)?;
            let dir = Point::polar(T::one(), theta);
            for (s, w) in &radial {
                let rho = big_r * *s;
                nodes.push(Node {
                    point: pole + dir * rho,
                    rho,
                    weight: h * big_r * big_r * *s * *w,
                });
            }
        }
        Ok(Self { pole, nodes })
    }

    fn fan(pole: Point<T>, edges: &[(Point<T>, Point<T>)], spec: &QuadratureSpec) -> Self {
        let radial = graded_rule::<T>(spec);
        let along = uniform_rule::<T>(
            (spec.n_theta / POLYGON_ANGLE_DIVISOR).max(1),
            spec.radial_order,
        );
        let mut nodes = Vec::with_capacity(edges.len() * along.len() * radial.len());
        for (a, b) in edges {
            let e0 = *a - pole;
            let e1 = *b - pole;
            let jac = e0.cross(e1);
            for (u, wu) in &along {
                let e = e0 + (e1 - e0) * *u;
                let len = e.norm();
                for (s, ws) in &radial {
                    nodes.push(Node {
                        point: pole + e * *s,
                        rho: len * *s,
                        weight: jac * *s * *wu * *ws,
                    });
                }
            }
        }
        Self { pole, nodes }
    }

    /// Nodes for the disc `D_r(x)` in polar coordinates about `x`.
    pub fn disc(x: Point<T>, r: T, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        check_radius(r)?;
        Self::polar(x, |_| Ok(r), spec)
    }

    /// Nodes for `domain` laid out about `x0`, which must see the whole boundary.
    pub fn about(domain: &Domain<T>, x0: Point<T>, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        match domain.polar_view(x0)? {
            PolarView::Rays(extent) => Self::polar(x0, extent, spec),
            PolarView::Fan(edges) => Ok(Self::fan(x0, &edges, spec)),
        }
    }

    pub fn pole(&self) -> Point<T> {
        self.pole
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    /// `∫ f(y) dA(y)`.
    pub fn integrate<F: Fn(Point<T>) -> T>(&self, f: F) -> T {
        let mut acc = NeumaierSum::new();
        for n in &self.nodes {
            acc.add(n.weight * f(n.point));
        }
        acc.value()
    }

    /// `∫ f(y) log(r / |pole - y|) dA(y)`.
    pub fn integrate_log_weighted<F: Fn(Point<T>) -> T>(&self, f: F, r: T) -> T {
        let mut acc = NeumaierSum::new();
        for n in &self.nodes {
            acc.add(n.weight * f(n.point) * (r / n.rho).ln());
        }
        acc.value()
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r > T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "radius must be positive, got {r}"
        )))
    }
}

/// `M(v, S_r(x))` by the `n_theta`-point trapezoidal rule.
pub fn circle_mean<T: Real>(
    v: &ScalarField<T>,
    x: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    spec.validate()?;
    check_radius(r)?;
    Ok(MeanResult::plain(
        circle_mean_of(|p| v.evaluate(p), x, r, spec),
        spec,
    ))
}

fn circle_mean_of<T: Real, F: Fn(Point<T>) -> T>(
    f: F,
    x: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> T {
    let n = spec.n_theta;
    let h = T::TAU() / from_usize(n);
    let mut acc = NeumaierSum::new();
    for j in 0..n {
        acc.add(f(x + Point::polar(r, h * from_usize(j))));
    }
    acc.value() / from_usize(n)
}

/// `M(v, D_r(x))`.
pub fn disc_mean<T: Real>(
    v: &ScalarField<T>,
    x: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    let nodes = NodeSet::disc(x, r, spec)?;
    let value = nodes.integrate(|p| v.evaluate(p)) / (T::PI() * r * r);
    Ok(MeanResult::plain(value, spec))
}

/// `(1 / πr²) ∫_{D_r(x)} v(y) log(r / |x - y|) dy`.
pub fn weighted_disc_mean<T: Real>(
    v: &ScalarField<T>,
    x: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    let nodes = NodeSet::disc(x, r, spec)?;
    let value = nodes.integrate_log_weighted(|p| v.evaluate(p), r) / (T::PI() * r * r);
    Ok(MeanResult::plain(value, spec))
}

/// `M(v, Ω)`, integrated about the domain's pole.
pub fn domain_mean<T: Real>(
    v: &ScalarField<T>,
    omega: &Domain<T>,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    let nodes = NodeSet::about(omega, omega.pole(), spec)?;
    let value = nodes.integrate(|p| v.evaluate(p)) / omega.area();
    Ok(MeanResult::plain(value, spec))
}

/// `(1 / |Ω|) ∫_Ω v(y) log(r / |x0 - y|) dy` where `x0` is the domain's pole.
pub fn weighted_domain_mean<T: Real>(
    v: &ScalarField<T>,
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    let pole = omega.pole();
    let scale = T::one() + pole.norm();
    if (x0 - pole).norm() > lit::<T>(1e-12) * scale {
        return Err(Error::Precondition(format!(
            "x0 = ({}, {}) is not the domain's center/anchor ({}, {})",
            x0.x1, x0.x2, pole.x1, pole.x2
        )));
    }
    weighted_domain_mean_about(v, omega, pole, r, spec)
}

/// As [`weighted_domain_mean`] for any `x0` from which `omega` is star-shaped.
pub fn weighted_domain_mean_about<T: Real>(
    v: &ScalarField<T>,
    omega: &Domain<T>,
    x0: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<MeanResult<T>> {
    check_radius(r)?;
    let nodes = NodeSet::about(omega, x0, spec)?;
    let value = nodes.integrate_log_weighted(|p| v.evaluate(p), r) / omega.area();
    Ok(MeanResult::plain(value, spec))
}

/// `w(x) - M(w, S_r(x)) + (1/2π) ∫_{D_r(x)} ∇²w(y) log(r / |x - y|) dy`,
/// which vanishes for every smooth `w`.
pub fn green_identity_residual<T: Real>(
    w: &ScalarField<T>,
    x: Point<T>,
    r: T,
    spec: &QuadratureSpec,
) -> Result<T> {
    spec.validate()?;
    check_radius(r)?;
    let circle = circle_mean_of(|p| w.evaluate(p), x, r, spec);
    let nodes = NodeSet::disc(x, r, spec)?;
    // (1/2π) ∫ ∇²w log = (r²/2) · weighted disc mean of ∇²w
    let volume = nodes.integrate_log_weighted(|p| w.laplacian(p), r) / (T::PI() * r * r);
    Ok(w.evaluate(x) - circle + r * r / lit(2.0) * volume)
}
