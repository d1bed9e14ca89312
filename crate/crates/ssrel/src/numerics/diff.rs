//! Central finite differences for gradients and Hessians.

use crate::error::{Error, Result};

fn step(x: f64) -> f64 {
    (1e-4 * x.abs()).max(1e-5)
}

fn central<F: Fn(&[f64]) -> f64>(f: &F, x: &mut [f64], i: usize, h: f64) -> f64 {
    let xi = x[i];
    x[i] = xi + h;
    let fp = f(x);
    x[i] = xi - h;
    let fm = f(x);
    x[i] = xi;
    (fp - fm) / (2.0 * h)
}

/// Central-difference gradient with per-coordinate steps
/// `h_i = max(1e-5, 1e-4 |x_i|)`.
///
/// Non-finite values at perturbed points trigger one step shrink (h/10);
/// if the difference is still non-finite the call fails.
pub fn numeric_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> Result<Vec<f64>> {
    let mut xs = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        let mut h = step(x[i]);
        let mut g = central(&f, &mut xs, i, h);
        if !g.is_finite() {
            h /= 10.0;
            g = central(&f, &mut xs, i, h);
        }
        if !g.is_finite() {
            return Err(Error::NonFiniteObjective(format!(
                "gradient coordinate {i} at x = {:?}",
                x
            )));
        }
        grad[i] = g;
    }
    Ok(grad)
}

/// Central second differences, symmetrized as `(H + H^T) / 2`.
pub fn numeric_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let mut xs = x.to_vec();
    let f0 = f(&xs);
    if !f0.is_finite() {
        return Err(Error::NonFiniteObjective(format!("hessian center at x = {x:?}")));
    }
    let h: Vec<f64> = x.iter().map(|&xi| step(xi)).collect();
    let mut hess = vec![vec![0.0; n]; n];

    for i in 0..n {
        // Diagonal: (f(x+h) - 2 f(x) + f(x-h)) / h^2.
        let xi = xs[i];
        xs[i] = xi + h[i];
        let fp = f(&xs);
        xs[i] = xi - h[i];
        let fm = f(&xs);
        xs[i] = xi;
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);

        for j in (i + 1)..n {
            // Mixed: four-point cross difference.
            let xj = xs[j];
            xs[i] = xi + h[i];
            xs[j] = xj + h[j];
            let fpp = f(&xs);
            xs[j] = xj - h[j];
            let fpm = f(&xs);
            xs[i] = xi - h[i];
            let fmm = f(&xs);
            xs[j] = xj + h[j];
            let fmp = f(&xs);
            xs[i] = xi;
            xs[j] = xj;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }

    for row in &hess {
        for &v in row {
            if !v.is_finite() {
                return Err(Error::NonFiniteObjective(format!("hessian at x = {x:?}")));
            }
        }
    }
    Ok(hess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_gradient() {
        let g = numeric_gradient(|x| x[0] * x[0] + x[1], &[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(g[0], 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(g[1], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn linear_gradient_is_exact_to_rounding() {
        let c = [3.0, -2.5, 0.75];
        let g = numeric_gradient(
            |x| c.iter().zip(x).map(|(ci, xi)| ci * xi).sum::<f64>(),
            &[0.2, 1.4, -9.0],
        )
        .unwrap();
        for (gi, ci) in g.iter().zip(c.iter()) {
            assert_abs_diff_eq!(gi, ci, epsilon = 1e-9);
        }
    }

    #[test]
    fn hessian_of_square() {
        let h = numeric_hessian(|x| x[0] * x[0], &[0.7]).unwrap();
        assert_abs_diff_eq!(h[0][0], 2.0, epsilon = 1e-4);
    }

    #[test]
    fn hessian_cross_term() {
        let h = numeric_hessian(|x| x[0] * x[1], &[0.4, 0.9]).unwrap();
        assert_abs_diff_eq!(h[0][1], 1.0, epsilon = 1e-4);
        assert_eq!(h[0][1], h[1][0]);
    }

    #[test]
    fn hessian_exactly_symmetric() {
        let h = numeric_hessian(
            |x| (x[0] * x[1]).sin() + x[2] * x[0].powi(3),
            &[0.3, 1.2, -0.8],
        )
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }

    #[test]
    fn non_finite_objective_rejected() {
        assert!(numeric_gradient(|x| (x[0] - 1.0).ln(), &[1.0]).is_err());
    }
}
