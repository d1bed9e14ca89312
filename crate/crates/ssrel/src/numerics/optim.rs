//! Box-constrained minimization: a projected quasi-Newton method for small
//! dense problems and a bounded Brent search for scalar ones.

use crate::error::{Error, Result};

/// Outcome of a bounded multivariate minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub argmin: Vec<f64>,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Outcome of a bounded scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOptimResult {
    pub argmin: f64,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
}

const GRAD_TOL: f64 = 1e-8;
const MAX_ITER: usize = 500;

fn clamp_to_box(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lower[i], upper[i]);
    }
}

/// Gradient by central differences with steps shrunk so that no evaluation
/// leaves the box; falls back to one-sided differences hard against a bound.
fn box_gradient<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &[f64],
    fx: f64,
    lower: &[f64],
    upper: &[f64],
) -> Result<Vec<f64>> {
    let n = x.len();
    let mut xs = x.to_vec();
    let mut g = vec![0.0; n];
    for i in 0..n {
        let h = (1e-4 * x[i].abs()).max(1e-7);
        let up = (upper[i] - x[i]).min(h);
        let down = (x[i] - lower[i]).min(h);
        let xi = xs[i];
        let gi = if up > 0.0 && down > 0.0 {
            xs[i] = xi + up;
            let fp = f(&xs);
            xs[i] = xi - down;
            let fm = f(&xs);
            xs[i] = xi;
            (fp - fm) / (up + down)
        } else if up > 0.0 {
            xs[i] = xi + up;
            let fp = f(&xs);
            xs[i] = xi;
            (fp - fx) / up
        } else if down > 0.0 {
            xs[i] = xi - down;
            let fm = f(&xs);
            xs[i] = xi;
            (fx - fm) / down
        } else {
            0.0
        };
        if !gi.is_finite() {
            return Err(Error::NonFiniteObjective(format!(
                "gradient coordinate {i} near x = {x:?}"
            )));
        }
        g[i] = gi;
    }
    Ok(g)
}

/// Sup-norm of the gradient projected onto the feasible directions.
fn projected_grad_norm(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let mut norm: f64 = 0.0;
    for i in 0..x.len() {
        let blocked_low = x[i] <= lower[i] && g[i] > 0.0;
        let blocked_high = x[i] >= upper[i] && g[i] < 0.0;
        if !(blocked_low || blocked_high) {
            norm = norm.max(g[i].abs());
        }
    }
    norm
}

fn mat_vec(h: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    h.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    h
}

fn active_set(x: &[f64], lower: &[f64], upper: &[f64]) -> Vec<bool> {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| xi <= lower[i] || xi >= upper[i])
        .collect()
}

/// Local minimization of `f` over the box `[lower, upper]` starting at `x0`.
///
/// Projected quasi-Newton (BFGS approximation of the inverse Hessian) with a
/// backtracking line search along the projected path. The objective is never
/// evaluated outside the box. Deterministic given `x0`.
pub fn minimize_bounded<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
) -> Result<OptimResult> {
    let n = x0.len();
    if n == 0 || lower.len() != n || upper.len() != n {
        return Err(Error::InvalidParameter(
            "minimize_bounded: dimension mismatch".into(),
        ));
    }
    for i in 0..n {
        if !(lower[i] < upper[i]) {
            return Err(Error::InvalidParameter(format!(
                "minimize_bounded: bound {i} has lower {} >= upper {}",
                lower[i], upper[i]
            )));
        }
        if x0[i] < lower[i] || x0[i] > upper[i] {
            return Err(Error::InvalidParameter(format!(
                "minimize_bounded: x0[{i}] = {} outside [{}, {}]",
                x0[i], lower[i], upper[i]
            )));
        }
    }

    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return Err(Error::NonFiniteObjective(format!("x0 = {x0:?}")));
    }

    let mut h = identity(n);
    let mut g = box_gradient(&f, &x, fx, lower, upper)?;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITER {
        iterations += 1;

        if projected_grad_norm(&x, &g, lower, upper) <= GRAD_TOL {
            converged = true;
            break;
        }

        let mut dir: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -v).collect();
        if dot(&dir, &g) >= 0.0 {
            h = identity(n);
            dir = g.iter().map(|v| -v).collect();
        }

        // Backtracking search along the projected path.
        let mut alpha = 1.0;
        let mut accepted: Option<(Vec<f64>, f64)> = None;
        for _ in 0..60 {
            let mut xt: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            clamp_to_box(&mut xt, lower, upper);
            let step: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
            if step.iter().all(|s| s.abs() < 1e-16) {
                break;
            }
            let ft = f(&xt);
            if ft.is_finite() && ft <= fx + 1e-4 * dot(&g, &step) {
                accepted = Some((xt, ft));
                break;
            }
            alpha *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            // No descent along this direction at any feasible step length:
            // treat the point as a (possibly bound-constrained) minimizer.
            converged = projected_grad_norm(&x, &g, lower, upper) <= GRAD_TOL.sqrt();
            break;
        };

        let g_new = box_gradient(&f, &x_new, f_new, lower, upper)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();

        let small_step = s
            .iter()
            .zip(&x_new)
            .all(|(si, xi)| si.abs() <= 1e-12 * (1.0 + xi.abs()));
        let small_df = (fx - f_new).abs() <= 1e-14 * (1.0 + fx.abs());

        if active_set(&x, lower, upper) != active_set(&x_new, lower, upper) {
            // Bound activation changed; the curvature pairs are unreliable.
            h = identity(n);
        } else {
            let sy = dot(&s, &y);
            let s_norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
            let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if sy > 1e-10 * s_norm * y_norm {
                // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
                let rho = 1.0 / sy;
                let hy = mat_vec(&h, &y);
                let yhy = dot(&y, &hy);
                for i in 0..n {
                    for j in 0..n {
                        h[i][j] += rho * rho * yhy * s[i] * s[j]
                            - rho * (s[i] * hy[j] + hy[i] * s[j])
                            + rho * s[i] * s[j];
                    }
                }
            }
        }

        x = x_new;
        fx = f_new;
        g = g_new;

        if small_step && small_df {
            converged = true;
            break;
        }
    }

    if converged || projected_grad_norm(&x, &g, lower, upper) <= GRAD_TOL {
        converged = true;
    }

    Ok(OptimResult {
        argmin: x,
        objective_value: fx,
        converged,
        iterations,
    })
}

/// Bounded scalar minimization (Brent: golden section with parabolic steps),
/// seeded at an interior initial point `x0`.
pub fn minimize_scalar_bounded<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    lower: f64,
    upper: f64,
    xatol: f64,
) -> Result<ScalarOptimResult> {
    if !(lower < upper) {
        return Err(Error::InvalidParameter(format!(
            "minimize_scalar_bounded: bounds [{lower}, {upper}]"
        )));
    }
    let golden = 0.5 * (3.0 - 5.0f64.sqrt());
    let sqrt_eps = f64::EPSILON.sqrt();
    let (mut a, mut b) = (lower, upper);

    let mut xf = if x0 > a && x0 < b {
        x0
    } else {
        a + golden * (b - a)
    };
    let mut fx = f(xf);
    if !fx.is_finite() {
        // Fall back to the golden point if the seed is bad.
        xf = a + golden * (b - a);
        fx = f(xf);
        if !fx.is_finite() {
            return Err(Error::NonFiniteObjective(format!("scalar objective at {xf}")));
        }
    }

    let (mut nfc, mut fulc) = (xf, xf);
    let (mut fnfc, mut ffulc) = (fx, fx);
    let mut rat = 0.0f64;
    let mut e = 0.0f64;
    let mut iterations = 1usize;
    let max_fun = 500usize;

    let mut xm = 0.5 * (a + b);
    let mut tol1 = sqrt_eps * xf.abs() + xatol / 3.0;
    let mut tol2 = 2.0 * tol1;

    while (xf - xm).abs() > tol2 - 0.5 * (b - a) {
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabolic interpolation through (xf, nfc, fulc).
            let r = (xf - nfc) * (fx - ffulc);
            let mut q = (xf - fulc) * (fx - fnfc);
            let mut p = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let r_prev = e;
            e = rat;
            if p.abs() < (0.5 * q * r_prev).abs() && p > q * (a - xf) && p < q * (b - xf) {
                rat = p / q;
                let x = xf + rat;
                use_golden = false;
                if (x - a) < tol2 || (b - x) < tol2 {
                    rat = tol1.copysign(xm - xf);
                }
            }
        }
        if use_golden {
            e = if xf >= xm { a - xf } else { b - xf };
            rat = golden * e;
        }

        let x = xf + rat.abs().max(tol1).copysign(rat);
        let fu = f(x);
        iterations += 1;

        if fu <= fx {
            if x >= xf {
                a = xf;
            } else {
                b = xf;
            }
            fulc = nfc;
            ffulc = fnfc;
            nfc = xf;
            fnfc = fx;
            xf = x;
            fx = fu;
        } else {
            if x < xf {
                a = x;
            } else {
                b = x;
            }
            if fu <= fnfc || nfc == xf {
                fulc = nfc;
                ffulc = fnfc;
                nfc = x;
                fnfc = fu;
            } else if fu <= ffulc || fulc == xf || fulc == nfc {
                fulc = x;
                ffulc = fu;
            }
        }

        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * xf.abs() + xatol / 3.0;
        tol2 = 2.0 * tol1;

        if iterations >= max_fun {
            return Ok(ScalarOptimResult {
                argmin: xf,
                objective_value: fx,
                converged: false,
                iterations,
            });
        }
    }

    Ok(ScalarOptimResult {
        argmin: xf,
        objective_value: fx,
        converged: true,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::cell::RefCell;

    #[test]
    fn quadratic_interior_minimum() {
        let r = minimize_bounded(|x| (x[0] - 3.0).powi(2), &[1.0], &[0.0], &[10.0]).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.argmin[0], 3.0, epsilon = 1e-6);
    }

    #[test]
    fn minimum_on_active_bound() {
        let r = minimize_bounded(|x| (x[0] + 1.0).powi(2), &[5.0], &[0.0], &[10.0]).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.argmin[0], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn rosenbrock_in_box() {
        let rosen =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = minimize_bounded(rosen, &[-1.2, 1.0], &[-2.0, -2.0], &[2.0, 2.0]).unwrap();
        assert_abs_diff_eq!(r.argmin[0], 1.0, epsilon = 1e-4);
        assert_abs_diff_eq!(r.argmin[1], 1.0, epsilon = 1e-4);
    }

    #[test]
    fn never_evaluates_outside_box() {
        let lower = [0.5, -1.0];
        let upper = [2.0, 1.0];
        let violations = RefCell::new(0usize);
        let f = |x: &[f64]| {
            if x[0] < lower[0] || x[0] > upper[0] || x[1] < lower[1] || x[1] > upper[1] {
                *violations.borrow_mut() += 1;
            }
            (x[0] - 0.1).powi(2) + (x[1] - 3.0).powi(2)
        };
        let r = minimize_bounded(f, &[1.0, 0.0], &lower, &upper).unwrap();
        assert_eq!(*violations.borrow(), 0);
        assert_abs_diff_eq!(r.argmin[0], 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(r.argmin[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn argmin_always_within_box() {
        let r = minimize_bounded(
            |x| x.iter().map(|v| v.sin()).sum::<f64>(),
            &[0.4, 0.6],
            &[0.0, 0.0],
            &[1.0, 1.0],
        )
        .unwrap();
        for (i, v) in r.argmin.iter().enumerate() {
            assert!(*v >= 0.0 && *v <= 1.0, "coordinate {i} escaped: {v}");
        }
    }

    #[test]
    fn non_finite_start_rejected() {
        assert!(matches!(
            minimize_bounded(|x| x[0].ln(), &[0.0], &[0.0], &[1.0]),
            Err(Error::NonFiniteObjective(_))
        ));
    }

    #[test]
    fn deterministic_given_start() {
        let f = |x: &[f64]| (x[0] - 0.7).powi(4) + (x[1] + 0.3).powi(2);
        let a = minimize_bounded(f, &[0.1, 0.9], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let b = minimize_bounded(f, &[0.1, 0.9], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(a.argmin, b.argmin);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn scalar_brent_parabola() {
        let r = minimize_scalar_bounded(|x| (x - 2.5).powi(2), 1.0, 0.0, 10.0, 1e-10).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.argmin, 2.5, epsilon = 1e-8);
    }

    #[test]
    fn scalar_brent_boundary_minimum() {
        let r = minimize_scalar_bounded(|x| x, 5.0, 1.0, 9.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.argmin, 1.0, epsilon = 1e-6);
    }
}
