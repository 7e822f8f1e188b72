//! Nelder–Mead simplex minimization for small, derivative-free problems.

use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions<T> {
    pub reflection: T,
    pub expansion: T,
    pub contraction: T,
    pub shrink: T,
    pub max_iterations: usize,
    /// Stop once the largest vertex distance from the best vertex falls below this.
    pub simplex_tolerance: T,
    /// Stop once the best objective value is at or below this.
    pub value_tolerance: Option<T>,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            reflection: T::one(),
            expansion: lit(2.0),
            contraction: lit(0.5),
            shrink: lit(0.5),
            max_iterations: 500,
            simplex_tolerance: lit(1e-9),
            value_tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub point: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn lerp<T: Real>(from: &[T], to: &[T], t: T) -> Vec<T> {
    from.iter()
        .zip(to)
        .map(|(a, b)| *a + t * (*b - *a))
        .collect()
}

fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y))
        .sqrt()
}

/// Minimizes `f` starting from the simplex `init, init + steps[i] e_i`.
///
/// NaN objective values are treated as `+inf`. Ties are broken by vertex
/// order, so the search is deterministic.
pub fn nelder_mead<T, F>(
    mut f: F,
    init: &[T],
    steps: &[T],
    opts: &NelderMeadOptions<T>,
) -> Minimum<T>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    let n = init.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evaluations = 0;
    let mut eval = |x: &[T]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    let v0 = eval(init);
    simplex.push((init.to_vec(), v0));
    let done_at_start = opts.value_tolerance.is_some_and(|tol| v0 <= tol);
    if done_at_start {
        return Minimum {
            point: init.to_vec(),
            value: v0,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }
    for i in 0..n {
        let mut x = init.to_vec();
        x[i] = x[i] + steps[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| distance(x, &simplex[0].0))
            .fold(T::zero(), T::max);
        if diameter < opts.simplex_tolerance || opts.value_tolerance.is_some_and(|tol| best <= tol)
        {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c = *c + *xi;
            }
        }
        for c in &mut centroid {
            *c = *c / from_usize(n);
        }
        let (worst, f_worst) = simplex[n].clone();
        let f_second = simplex[n - 1].1;

        let reflected = lerp(&centroid, &worst, -opts.reflection);
        let f_r = eval(&reflected);
        if f_r < best {
            let expanded = lerp(&centroid, &reflected, opts.expansion);
            let f_e = eval(&expanded);
            simplex[n] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < f_second {
            simplex[n] = (reflected, f_r);
            continue;
        }
        let (contracted, accept_below) = if f_r < f_worst {
            (lerp(&centroid, &reflected, opts.contraction), f_r)
        } else {
            (lerp(&centroid, &worst, opts.contraction), f_worst)
        };
        let f_c = eval(&contracted);
        if f_c < accept_below || (f_r < f_worst && f_c <= accept_below) {
            simplex[n] = (contracted, f_c);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&anchor, &vertex.0, opts.shrink);
            let v = eval(&x);
            *vertex = (x, v);
        }
    }

    let (point, value) = simplex.swap_remove(0);
    Minimum {
        point,
        value,
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f =
            |x: &[f64]| (x[0] - 1.0).powi(2) + 4.0 * (x[1] + 2.0).powi(2) + (x[2] - 0.5).powi(2);
        let m = nelder_mead(
            f,
            &[0.0, 0.0, 0.0],
            &[0.5, 0.5, 0.5],
            &NelderMeadOptions::default(),
        );
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-8);
        assert!((m.point[1] + 2.0).abs() < 1e-8);
        assert!((m.point[2] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 5000,
            simplex_tolerance: 1e-12,
            ..Default::default()
        };
        let m = nelder_mead(f, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-6 && (m.point[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let f = |x: &[f64]| x[0].abs() + x[1].abs();
        let opts = NelderMeadOptions {
            max_iterations: 3,
            ..Default::default()
        };
        let m = nelder_mead(f, &[5.0, 5.0], &[1.0, 1.0], &opts);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }

    #[test]
    fn value_tolerance_at_start() {
        let opts = NelderMeadOptions {
            value_tolerance: Some(1e-20),
            ..Default::default()
        };
        let m = nelder_mead(|x: &[f64]| x[0] * x[0], &[0.0], &[1.0], &opts);
        assert!(m.converged);
        assert_eq!(m.iterations, 0);
        assert_eq!(m.evaluations, 1);
    }

    #[test]
    fn nan_is_worse_than_anything() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 2.0).powi(2)
            }
        };
        let m = nelder_mead(f, &[0.5], &[0.25], &NelderMeadOptions::default());
        assert!((m.point[0] - 2.0).abs() < 1e-8);
    }
}
