//! Structural invariants of fields, domains and residuals, checked on seeded
//! random samples and by property tests.

use discmean::characterize::residual_t4;
use discmean::{
    Domain64, FieldKind, HarmonicPart, Point64, PolygonDomain64, QuadratureSpec, ScalarField64,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_points(n: usize) -> Vec<Point64> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..n)
        .map(|_| Point64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect()
}

fn all_families() -> Vec<ScalarField64> {
    vec![
        ScalarField64::plane_panharmonic(2.0, 0.3),
        ScalarField64::radial_panharmonic(1.5, Point64::new(0.2, -0.4)),
        ScalarField64::separable_panharmonic(1.0, 1.0).unwrap(),
        ScalarField64::harmonic_poly(0, HarmonicPart::Real).unwrap(),
        ScalarField64::harmonic_poly(5, HarmonicPart::Real).unwrap(),
        ScalarField64::harmonic_poly(6, HarmonicPart::Imaginary).unwrap(),
        ScalarField64::plane_helmholtz(3.0, 1.1),
        ScalarField64::radial_helmholtz(2.0, Point64::new(-0.3, 0.1)),
        ScalarField64::quadratic_nonsolution(),
    ]
}

#[test]
fn declared_equation_holds_at_random_points() {
    for v in all_families() {
        for p in sample_points(100) {
            let value = v.evaluate(p);
            let lap = v.laplacian(p);
            let expected = match v.kind() {
                FieldKind::Panharmonic(mu) => mu * mu * value,
                FieldKind::Harmonic => 0.0,
                FieldKind::Helmholtz(lambda) => -lambda * lambda * value,
                FieldKind::General => 4.0,
            };
            let scale = lap.abs().max(expected.abs()).max(value.abs()).max(1.0);
            assert!((lap - expected).abs() <= 1e-11 * scale, "{v} at {p:?}");
        }
    }
}

#[test]
fn positive_fields_are_positive_at_random_points() {
    for v in all_families().into_iter().filter(|v| v.is_positive()) {
        for p in sample_points(100) {
            assert!(v.evaluate(p) > 0.0, "{v} at {p:?}");
        }
    }
}

#[test]
fn bowtie_polygon_is_rejected() {
    let bowtie = vec![
        Point64::new(0.0, 0.0),
        Point64::new(1.0, 1.0),
        Point64::new(1.0, 0.0),
        Point64::new(0.0, 1.0),
    ];
    assert!(PolygonDomain64::new(bowtie, Point64::new(0.5, 0.5)).is_err());
}

#[test]
fn star_containment_agrees_with_the_boundary_radius() {
    let (a2, b3) = (0.2, 0.05);
    let omega = Domain64::star(
        Point64::new(0.1, -0.2),
        1.0,
        vec![0.0, a2],
        vec![0.0, 0.0, b3],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let p = Point64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q = p - Point64::new(0.1, -0.2);
        let theta = q.angle();
        let radius = 1.0 + a2 * (2.0 * theta).cos() + b3 * (3.0 * theta).sin();
        assert_eq!(omega.contains(p), q.norm() < radius, "{p:?}");
    }
}

fn domain_strategy() -> impl Strategy<Value = Domain64> {
    prop_oneof![
        (-1.0..1.0f64, -1.0..1.0f64, 0.1..3.0f64).prop_map(|(x, y, r)| Domain64::disc(
            Point64::new(x, y),
            r
        )
        .unwrap()),
        (0.5..2.0f64, -0.3..0.3f64, -0.3..0.3f64).prop_map(|(c0, a, b)| {
            Domain64::star(Point64::origin(), c0, vec![0.0, a * c0], vec![b * c0]).unwrap()
        }),
        (0.2..3.0f64, 0.2..3.0f64).prop_map(|(w, h)| {
            let vertices = vec![
                Point64::new(0.0, 0.0),
                Point64::new(w, 0.0),
                Point64::new(w, h),
                Point64::new(0.0, h),
            ];
            Domain64::polygon(vertices, Point64::new(w / 2.0, h / 2.0)).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_hits_the_target_area(omega in domain_strategy(), target in 0.1..20.0f64) {
        let scaled = omega.scale_to_area(target).unwrap();
        prop_assert!((scaled.area() - target).abs() <= 1e-12 * target);
        prop_assert_eq!(scaled.pole(), omega.pole());
    }

    #[test]
    fn rigid_motions_preserve_area(
        omega in domain_strategy(),
        angle in -3.0..3.0f64,
        dx in -2.0..2.0f64,
        dy in -2.0..2.0f64,
    ) {
        let moved = omega.rigid_motion(angle, Point64::new(dx, dy));
        prop_assert!((moved.area() - omega.area()).abs() <= 1e-12 * omega.area());
        prop_assert!(moved.contains(omega.pole() + Point64::new(dx, dy)));
    }

    #[test]
    fn descriptors_round_trip(mu in 0.1..5.0f64, theta in -3.0..3.0f64, k in 0u32..=12) {
        for v in [
            ScalarField64::plane_panharmonic(mu, theta),
            ScalarField64::plane_helmholtz(mu, theta),
            ScalarField64::harmonic_poly(k, HarmonicPart::Imaginary).unwrap(),
        ] {
            let parsed = ScalarField64::from_descriptor(&v.descriptor()).unwrap();
            prop_assert_eq!(parsed, v);
        }
    }
}

#[test]
fn residual_scales_linearly_with_the_field() {
    let spec = QuadratureSpec::default();
    let square = Domain64::polygon(
        vec![
            Point64::new(-1.0, -1.0),
            Point64::new(1.0, -1.0),
            Point64::new(1.0, 1.0),
            Point64::new(-1.0, 1.0),
        ],
        Point64::origin(),
    )
    .unwrap()
    .scale_to_area(std::f64::consts::PI)
    .unwrap();
    let v = ScalarField64::radial_panharmonic(1.0, Point64::origin());
    let base = residual_t4(&square, Point64::origin(), 1.0, 1.0, &v, &spec).unwrap();
    let scaled = residual_t4(&square, Point64::origin(), 1.0, 1.0, &v.scaled(7.0), &spec).unwrap();
    assert!((scaled.lhs - 7.0 * base.lhs).abs() <= 1e-12 * scaled.lhs.abs());
    assert!((scaled.rhs - 7.0 * base.rhs).abs() <= 1e-12 * scaled.rhs.abs());
    assert!((scaled.residual - 7.0 * base.residual).abs() <= 1e-12 * scaled.lhs.abs());
    assert!((scaled.relative - base.relative).abs() <= 1e-12);
}
