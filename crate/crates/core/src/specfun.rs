//! Bessel functions `I0`, `I1`, `J0`, `J1` by power series, the four mean value
//! coefficients, the Poisson integral representation of `I0`, and the first
//! positive zero of `J1`.
//!
//! All public evaluators accept `|t| <= T_MAX` and return [`Error::Domain`]
//! otherwise. The alternating `J` series are generated and summed in
//! [`TwoFold`] arithmetic: at `t = 30` the largest term is about `1e11` while
//! the sum is `O(0.1)`, so working precision alone would leave only a few
//! correct digits.

use crate::compensated::{compensated_sum, NeumaierSum, TwoFold};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Largest supported argument of every function in this module.
pub const T_MAX: f64 = 30.0;
/// A series stops once a term drops below this fraction of the partial sum.
pub const SERIES_REL_TOL: f64 = 1e-17;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 120;
/// Below this argument `a` and `a~` use their division-free series.
pub const COEFF_A_SERIES_SWITCH: f64 = 1.0;
/// Below this argument `a•` uses its division-free series.
pub const COEFF_A_BULLET_SERIES_SWITCH: f64 = 0.5;
/// Successive midpoint-rule doublings of the Poisson integral must agree to this
/// relative tolerance.
pub const POISSON_AGREEMENT: f64 = 1e-13;
/// Absolute bracket width at which the `j_{1,1}` bisection stops.
pub const J1_ZERO_TOL: f64 = 1e-12;

const POISSON_MIN_NODES: usize = 8;
const POISSON_MAX_NODES: usize = 1 << 20;

fn check<T: Real>(function: &'static str, t: T) -> Result<()> {
    if t.is_nan() || t.abs() > lit(T_MAX) {
        return Err(Error::Domain {
            function,
            arg: to_f64(t),
            max: T_MAX,
        });
    }
    Ok(())
}

fn check_nonneg<T: Real>(function: &'static str, t: T) -> Result<()> {
    check(function, t)?;
    if t < T::zero() {
        return Err(Error::Domain {
            function,
            arg: to_f64(t),
            max: T_MAX,
        });
    }
    Ok(())
}

/// `sum_k q^k / (k! (k + order)!)` for `q >= 0` in working precision with
/// compensated accumulation. Returns the series without the `x^order` prefactor.
fn positive_series<T: Real>(q: T, order: usize) -> T {
    let tol = lit::<T>(SERIES_REL_TOL);
    let mut term = T::one();
    for k in 1..=order {
        term = term / from_usize(k);
    }
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for k in 1..SERIES_MAX_TERMS {
        term = term * q / from_usize::<T>(k * (k + order));
        acc.add(term);
        if term <= tol * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// `sum_k (-q)^k / (k! (k + order)!)` in two-fold precision. `q` is passed as a
/// two-fold value so the square of the argument is exact.
fn alternating_series<T: Real>(q: TwoFold<T>, order: usize) -> T {
    let tol = lit::<T>(SERIES_REL_TOL);
    let mut term = TwoFold::new(T::one());
    for k in 1..=order {
        term = term.div_scalar(from_usize(k));
    }
    let mut acc = term;
    for k in 1..SERIES_MAX_TERMS {
        term = -(term * q).div_scalar(from_usize(k * (k + order)));
        acc = acc + term;
        if term.hi.abs() <= tol * acc.hi.abs() {
            break;
        }
    }
    acc.value()
}

pub(crate) fn i0_unchecked<T: Real>(t: T) -> T {
    let x = t / lit(2.0);
    positive_series(x * x, 0)
}

pub(crate) fn i1_unchecked<T: Real>(t: T) -> T {
    let x = t / lit(2.0);
    x * positive_series(x * x, 1)
}

pub(crate) fn j0_unchecked<T: Real>(t: T) -> T {
    let x = t / lit(2.0);
    alternating_series(TwoFold::product(x, x), 0)
}

pub(crate) fn j1_unchecked<T: Real>(t: T) -> T {
    let x = t / lit(2.0);
    x * alternating_series(TwoFold::product(x, x), 1)
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0<T: Real>(t: T) -> Result<T> {
    check("bessel_i0", t)?;
    Ok(i0_unchecked(t))
}

/// Modified Bessel function of the first kind, order one.
pub fn bessel_i1<T: Real>(t: T) -> Result<T> {
    check("bessel_i1", t)?;
    Ok(i1_unchecked(t))
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0<T: Real>(t: T) -> Result<T> {
    check("bessel_j0", t)?;
    Ok(j0_unchecked(t))
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1<T: Real>(t: T) -> Result<T> {
    check("bessel_j1", t)?;
    Ok(j1_unchecked(t))
}

/// Circle-mean coefficient `a°(t) = I0(t)`.
pub fn coeff_a_circ<T: Real>(t: T) -> Result<T> {
    check_nonneg("coeff_a_circ", t)?;
    Ok(i0_unchecked(t))
}

/// Disc-mean coefficient `a•(t) = 2 I1(t) / t`, with `a•(0) = 1`.
pub fn coeff_a_bullet<T: Real>(t: T) -> Result<T> {
    check_nonneg("coeff_a_bullet", t)?;
    if t < lit(COEFF_A_BULLET_SERIES_SWITCH) {
        // 2 I1(t) / t = sum_k (t/2)^{2k} / (k! (k+1)!)
        let x = t / lit(2.0);
        Ok(positive_series(x * x, 1))
    } else {
        Ok(lit::<T>(2.0) * i1_unchecked(t) / t)
    }
}

fn coeff_a_series<T: Real>(t: T) -> T {
    // sum_{k>=1} t^{2k-2} / (2^{2k-1} (k!)^2)
    let tol = lit::<T>(SERIES_REL_TOL);
    let q = t * t / lit(4.0);
    let mut term = lit::<T>(0.5);
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for k in 1..SERIES_MAX_TERMS {
        term = term * q / from_usize::<T>((k + 1) * (k + 1));
        acc.add(term);
        if term <= tol * acc.value() {
            break;
        }
    }
    acc.value()
}

fn coeff_a_tilde_series<T: Real>(t: T) -> T {
    // sum_{k>=1} (-1)^{k-1} t^{2k-2} / (2^{2k-1} (k!)^2)
    let tol = lit::<T>(SERIES_REL_TOL);
    let q = t * t / lit(4.0);
    let mut term = lit::<T>(0.5);
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for k in 1..SERIES_MAX_TERMS {
        term = -term * q / from_usize::<T>((k + 1) * (k + 1));
        acc.add(term);
        if term.abs() <= tol * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// Weighted disc-mean coefficient for the modified Helmholtz equation,
/// `a(t) = 2 (I0(t) - 1) / t^2`, `a(0) = 1/2`.
pub fn coeff_a<T: Real>(t: T) -> Result<T> {
    check_nonneg("coeff_a", t)?;
    if t < lit(COEFF_A_SERIES_SWITCH) {
        Ok(coeff_a_series(t))
    } else {
        Ok(lit::<T>(2.0) * (i0_unchecked(t) - T::one()) / (t * t))
    }
}

/// Weighted disc-mean coefficient for the Helmholtz equation,
/// `a~(t) = 2 (1 - J0(t)) / t^2`, `a~(0) = 1/2`.
pub fn coeff_a_tilde<T: Real>(t: T) -> Result<T> {
    check_nonneg("coeff_a_tilde", t)?;
    if t < lit(COEFF_A_SERIES_SWITCH) {
        Ok(coeff_a_tilde_series(t))
    } else {
        Ok(lit::<T>(2.0) * (T::one() - j0_unchecked(t)) / (t * t))
    }
}

/// Both branches of `a` and `a~` at the same argument, for continuity checks:
/// `(series, closed form)`.
pub fn coeff_branches<T: Real>(t: T) -> ((T, T), (T, T)) {
    let two = lit::<T>(2.0);
    let closed_a = two * (i0_unchecked(t) - T::one()) / (t * t);
    let closed_at = two * (T::one() - j0_unchecked(t)) / (t * t);
    (
        (coeff_a_series(t), closed_a),
        (coeff_a_tilde_series(t), closed_at),
    )
}

fn poisson_midpoint<T: Real>(t: T, nodes: usize) -> T {
    let h = T::FRAC_PI_2() / from_usize(nodes);
    let sum = compensated_sum((0..nodes).map(|j| {
        let theta = (from_usize::<T>(j) + lit(0.5)) * h;
        (t * theta.cos()).cosh()
    }));
    sum / from_usize(nodes)
}

/// `I0(t)` from its Poisson integral `(2/pi) int_0^{pi/2} cosh(t cos θ) dθ`,
/// evaluated with the midpoint rule. The integrand extends to an even
/// `pi`-periodic analytic function, so the rule converges spectrally; the node
/// count doubles until two successive values agree to [`POISSON_AGREEMENT`].
pub fn poisson_i0<T: Real>(t: T) -> Result<T> {
    check_nonneg("poisson_i0", t)?;
    let tol = lit::<T>(POISSON_AGREEMENT);
    let mut nodes = POISSON_MIN_NODES;
    let mut prev = poisson_midpoint(t, nodes);
    while nodes < POISSON_MAX_NODES {
        nodes *= 2;
        let next = poisson_midpoint(t, nodes);
        if (next - prev).abs() <= tol * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Internal(format!(
        "Poisson integral for I0({}) did not settle within {POISSON_MAX_NODES} nodes",
        to_f64(t)
    )))
}

/// First positive zero `j_{1,1}` of `J1`, by bisection on `(3, 4.5)`.
pub fn first_zero_j1<T: Real>() -> Result<T> {
    let mut lo = lit::<T>(3.0);
    let mut hi = lit::<T>(4.5);
    let mut f_lo = j1_unchecked(lo);
    let f_hi = j1_unchecked(hi);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Internal(
            "J1 shows no sign change on (3, 4.5)".to_string(),
        ));
    }
    let tol = lit::<T>(J1_ZERO_TOL);
    while hi - lo > tol {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = j1_unchecked(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Values frozen from exact rational partial sums (see tests/specfun_oracle.rs).
    const I0_2: f64 = 2.279585302336067;
    const I1_2: f64 = 1.590636854637329;
    const J0_2: f64 = 0.22389077914123567;
    const J1_1: f64 = 0.4400505857449335;
    const J1_2: f64 = 0.5767248077568734;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert_eq!(bessel_i1(0.0).unwrap(), 0.0);
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
        assert_eq!(coeff_a_circ(0.0).unwrap(), 1.0);
        assert_eq!(coeff_a_bullet(0.0).unwrap(), 1.0);
        assert_eq!(coeff_a(0.0).unwrap(), 0.5);
        assert_eq!(coeff_a_tilde(0.0).unwrap(), 0.5);
    }

    #[test]
    fn frozen_values() {
        assert!(rel(bessel_i0(2.0).unwrap(), I0_2) <= 1e-14);
        assert!(rel(bessel_i1(2.0).unwrap(), I1_2) <= 1e-14);
        assert!(rel(bessel_j0(2.0).unwrap(), J0_2) <= 1e-14);
        assert!(rel(bessel_j1(1.0).unwrap(), J1_1) <= 1e-14);
        assert!(rel(bessel_j1(2.0).unwrap(), J1_2) <= 1e-14);
    }

    #[test]
    fn parity() {
        for &t in &[0.3, 1.7, 12.0, 29.5] {
            assert_eq!(bessel_i0(-t).unwrap(), bessel_i0(t).unwrap());
            assert_eq!(bessel_i1(-t).unwrap(), -bessel_i1(t).unwrap());
            assert_eq!(bessel_j0(-t).unwrap(), bessel_j0(t).unwrap());
            assert_eq!(bessel_j1(-t).unwrap(), -bessel_j1(t).unwrap());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_i0(30.5), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j1(-31.0), Err(Error::Domain { .. })));
        assert!(bessel_j0(f64::NAN).is_err());
        assert!(bessel_i0(30.0).is_ok());
        assert!(coeff_a(-0.1).is_err());
        assert!(coeff_a_tilde(31.0).is_err());
        assert!(coeff_a_bullet(-1.0).is_err());
        assert!(poisson_i0(30.01).is_err());
    }

    #[test]
    fn coefficient_values() {
        assert!(rel(coeff_a_bullet(2.0).unwrap(), I1_2) <= 1e-14);
        assert!(rel(coeff_a(2.0).unwrap(), (I0_2 - 1.0) / 2.0) <= 1e-14);
        let z = 2.404825558f64;
        // J0(z) ~ 0 so a~(z) ~ 2 / z^2
        assert!((coeff_a_tilde(z).unwrap() - 0.345830138).abs() < 1e-9);
    }

    #[test]
    fn j0_first_zero() {
        assert!(bessel_j0(2.404825558f64).unwrap().abs() < 1e-9);
    }

    #[test]
    fn derivative_identities() {
        let h = 1e-5f64;
        let d_i0 = (bessel_i0(1.0 + h).unwrap() - bessel_i0(1.0 - h).unwrap()) / (2.0 * h);
        assert!((d_i0 - bessel_i1(1.0).unwrap()).abs() <= 1e-8);
        let d_j0 = (bessel_j0(1.5 + h).unwrap() - bessel_j0(1.5 - h).unwrap()) / (2.0 * h);
        assert!((d_j0 + bessel_j1(1.5).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn poisson_matches_series() {
        assert_eq!(poisson_i0(0.0).unwrap(), 1.0);
        assert!((poisson_i0(2.0).unwrap() - I0_2).abs() <= 1e-12);
        assert!(rel(poisson_i0(1.7).unwrap(), bessel_i0(1.7).unwrap()) <= 1e-12);
        assert!(rel(poisson_i0(10.0).unwrap(), bessel_i0(10.0).unwrap()) <= 1e-11);
    }

    #[test]
    fn j11() {
        let z: f64 = first_zero_j1().unwrap();
        assert!(z > 3.8 && z < 3.9);
        assert!((z - 3.831705970207512).abs() < 1e-11);
        assert!(bessel_j1(z).unwrap().abs() <= 1e-11);
        let j0 = bessel_j0(z).unwrap();
        assert!(j0 < 0.0 && (j0 + 0.4027593957).abs() < 1e-9);
    }

    #[test]
    fn branch_continuity_at_switch() {
        let ((a_series, a_closed), (at_series, at_closed)) = coeff_branches(1.0f64);
        assert!((a_series - a_closed).abs() <= 1e-13);
        assert!((at_series - at_closed).abs() <= 1e-13);
    }

    #[test]
    fn single_precision() {
        let i0: f32 = bessel_i0(2.0f32).unwrap();
        assert!((i0 - I0_2 as f32).abs() < 1e-6);
        let z: f32 = first_zero_j1().unwrap();
        assert!((z - 3.831706).abs() < 1e-5);
        assert!((coeff_a(0.0f32).unwrap() - 0.5).abs() < 1e-7);
    }
}
