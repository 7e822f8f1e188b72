//! Forward mean value identities on discs, checked over small grids of
//! fields, centers, radii and frequencies.

use discmean::quadrature::{
    circle_mean, disc_mean, green_identity_residual, weighted_disc_mean, with_error_estimate,
};
use discmean::specfun::{coeff_a, coeff_a_bullet, coeff_a_circ, coeff_a_tilde, first_zero_j1};
use discmean::{HarmonicPart, Point64, QuadratureSpec, ScalarField64};

const RADII: [f64; 3] = [0.25, 0.5, 1.0];
const MUS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn centers() -> [Point64; 3] {
    [
        Point64::origin(),
        Point64::new(0.3, -0.2),
        Point64::new(-0.7, 0.5),
    ]
}

fn panharmonic_family(mu: f64) -> Vec<ScalarField64> {
    vec![
        ScalarField64::plane_panharmonic(mu, 0.3),
        ScalarField64::radial_panharmonic(mu, Point64::new(0.1, 0.4)),
        ScalarField64::separable_panharmonic(mu * 0.3_f64.cos(), mu * 0.3_f64.sin()).unwrap(),
    ]
}

fn for_each_case(mut check: impl FnMut(&ScalarField64, Point64, f64, f64)) {
    for mu in MUS {
        for v in panharmonic_family(mu) {
            for x in centers() {
                for r in RADII {
                    check(&v, x, r, mu);
                }
            }
        }
    }
}

#[test]
fn circle_mean_matches_a_circ() {
    let spec = QuadratureSpec::default();
    for_each_case(|v, x, r, mu| {
        let vx = v.evaluate(x);
        let mean = circle_mean(v, x, r, &spec).unwrap().value;
        let lhs = coeff_a_circ(mu * r).unwrap() * vx;
        assert!((mean - lhs).abs() <= 1e-9 * vx.abs(), "{v} at {x:?}, r={r}");
    });
}

#[test]
fn disc_mean_matches_a_bullet() {
    let spec = QuadratureSpec::default();
    for_each_case(|v, x, r, mu| {
        let vx = v.evaluate(x);
        let mean = disc_mean(v, x, r, &spec).unwrap().value;
        let lhs = coeff_a_bullet(mu * r).unwrap() * vx;
        assert!((mean - lhs).abs() <= 1e-9 * vx.abs(), "{v} at {x:?}, r={r}");
    });
}

#[test]
fn weighted_disc_mean_matches_a() {
    let spec = QuadratureSpec::default();
    let fine = spec.refined();
    for_each_case(|v, x, r, mu| {
        let vx = v.evaluate(x);
        let lhs = coeff_a(mu * r).unwrap() * vx;
        let coarse = weighted_disc_mean(v, x, r, &spec).unwrap().value;
        let refined = weighted_disc_mean(v, x, r, &fine).unwrap().value;
        assert!(
            (coarse - lhs).abs() <= 1e-7 * vx.abs(),
            "{v} at {x:?}, r={r}"
        );
        assert!(
            (refined - lhs).abs() <= 1e-10 * vx.abs(),
            "{v} at {x:?}, r={r}"
        );
    });
}

#[test]
fn weighted_mean_of_harmonic_polynomials_is_half_the_value() {
    let spec = QuadratureSpec::default();
    for k in 0..=6 {
        for part in [HarmonicPart::Real, HarmonicPart::Imaginary] {
            let v = ScalarField64::harmonic_poly(k, part).unwrap();
            for x in centers() {
                for r in RADII {
                    let mean = weighted_disc_mean(&v, x, r, &spec).unwrap().value;
                    assert!((mean - v.evaluate(x) / 2.0).abs() <= 1e-9, "k={k} {part:?}");
                }
            }
        }
    }
    let one = ScalarField64::constant_one();
    for x in centers() {
        for r in RADII {
            let mean = weighted_disc_mean(&one, x, r, &spec).unwrap().value;
            assert!((mean - 0.5).abs() <= 1e-12);
        }
    }
}

#[test]
fn harmonic_polynomials_have_the_circle_mean_property() {
    let spec = QuadratureSpec::default();
    for k in 0..=6 {
        let v = ScalarField64::harmonic_poly(k, HarmonicPart::Real).unwrap();
        for x in centers() {
            let mean = circle_mean(&v, x, 0.7, &spec).unwrap().value;
            assert!((mean - v.evaluate(x)).abs() <= 1e-10);
        }
    }
}

#[test]
fn helmholtz_weighted_identity_across_first_bessel_zero() {
    let spec = QuadratureSpec::default();
    let j11: f64 = first_zero_j1().unwrap();
    let products = [0.5, 1.0, 2.0, 5.0];
    assert!(products.iter().any(|&t| t > j11));
    for t in products {
        for r in [0.5, 1.0] {
            let lambda = t / r;
            let fields = [
                ScalarField64::plane_helmholtz(lambda, 0.7),
                ScalarField64::radial_helmholtz(lambda, Point64::new(0.2, -0.1)),
            ];
            for u in &fields {
                for x in centers() {
                    let ux = u.evaluate(x);
                    let mean = weighted_disc_mean(u, x, r, &spec).unwrap().value;
                    let lhs = coeff_a_tilde(t).unwrap() * ux;
                    assert!(
                        (mean - lhs).abs() <= 1e-7 * ux.abs().max(1.0),
                        "{u} at {x:?}, λr={t}"
                    );
                }
            }
        }
    }
}

#[test]
fn weighted_mean_of_positive_fields_exceeds_half_the_value() {
    let spec = QuadratureSpec::default();
    for_each_case(|v, x, r, mu| {
        let vx = v.evaluate(x);
        let mean = weighted_disc_mean(v, x, r, &spec).unwrap().value;
        let margin = (coeff_a(mu * r).unwrap() - 0.5) * vx;
        assert!(mean > vx / 2.0);
        assert!(mean - vx / 2.0 >= margin - 1e-7);
    });
}

#[test]
fn green_identity_vanishes_for_smooth_fields() {
    let spec = QuadratureSpec::default();
    let cases = [
        (Point64::origin(), 1.0),
        (Point64::new(0.3, -0.2), 0.5),
        (Point64::new(-0.7, 0.5), 0.25),
        (Point64::new(1.0, 1.0), 0.8),
        (Point64::new(-0.4, -0.9), 1.2),
    ];
    let fields = [
        ScalarField64::quadratic_nonsolution(),
        ScalarField64::harmonic_poly(4, HarmonicPart::Real).unwrap(),
        ScalarField64::plane_panharmonic(1.0, 0.0),
        ScalarField64::radial_panharmonic(2.0, Point64::new(0.5, 0.5)),
    ];
    for w in &fields {
        for (x, r) in cases {
            let res = green_identity_residual(w, x, r, &spec).unwrap();
            assert!(res.abs() <= 1e-9, "{w} at {x:?}, r={r}: {res:e}");
        }
    }
}

fn spec_with(n_theta: usize, order: usize) -> QuadratureSpec {
    QuadratureSpec {
        n_theta,
        radial_order: order,
        ..QuadratureSpec::default()
    }
}

#[test]
fn weighted_residual_converges_under_refinement() {
    let v = ScalarField64::plane_panharmonic(2.0, 0.3);
    let x = Point64::new(0.3, -0.2);
    let lhs = coeff_a(2.0).unwrap() * v.evaluate(x);
    let residual = |n: usize, q: usize| {
        (weighted_disc_mean(&v, x, 1.0, &spec_with(n, q))
            .unwrap()
            .value
            - lhs)
            .abs()
    };
    let floor = 1e-12 * lhs.abs();
    let mut previous = residual(16, 2);
    for (n, q) in [(32, 4), (64, 8), (128, 16)] {
        let current = residual(n, q);
        assert!(
            current <= previous / 100.0 || current <= floor,
            "({n}, {q}): {current:e} after {previous:e}"
        );
        previous = current;
    }
    assert!(previous <= floor);
}

#[test]
fn refinement_estimate_bounds_the_true_error() {
    // Coarse enough that the residual is well above rounding.
    let spec = QuadratureSpec {
        n_theta: 16,
        n_radial_panels: 2,
        radial_order: 4,
        grading: 0.25,
    };
    for_each_case(|v, x, r, mu| {
        let lhs = coeff_a(mu * r).unwrap() * v.evaluate(x);
        let mean = with_error_estimate(&spec, |s| weighted_disc_mean(v, x, r, s)).unwrap();
        let truth = (mean.value - lhs).abs();
        if truth > 1e-13 * lhs.abs() {
            assert!(
                truth <= 10.0 * mean.est_error && mean.est_error <= 10.0 * truth,
                "{v} at {x:?}, r={r}: true {truth:e}, estimate {:e}",
                mean.est_error
            );
        }
    });
}
