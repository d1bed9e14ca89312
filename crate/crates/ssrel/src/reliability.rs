//! Stress-strength reliability R = P(X > Y) under the dependent model.
//!
//! With `t = F_X(x)` the reliability reduces to a finite-interval integral
//!
//! `R = int_0^1 t^-(theta+1) (t^-theta + G_Y(F_X^-1(t))^-theta - 1)^-(1/theta+1) dt`,
//!
//! whose integrand equals the copula h-function `h(t, G_Y(F_X^-1(t)))` and is
//! therefore bounded in [0, 1]; the naive power form has 0 * inf endpoint
//! trouble, so the evaluation goes through the stable log-space h-function.

use crate::copula::{clayton_h_from_logs, ClaytonTheta};
use crate::error::{Error, Result};
use crate::margins::{mwd_quantile, mwd_sample, MwdParams};
use crate::numerics::{integrate, RngStream};
use serde::{Deserialize, Serialize};

/// The full seven-parameter model (strength margin, stress margin, theta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega1: MwdParams,
    pub omega2: MwdParams,
    pub theta: ClaytonTheta,
}

impl ModelParams {
    pub fn new(omega1: MwdParams, omega2: MwdParams, theta: ClaytonTheta) -> Self {
        Self {
            omega1,
            omega2,
            theta,
        }
    }

    /// Flat view `[a1, b1, lambda1, a2, b2, lambda2, theta]`.
    pub fn to_vec(&self) -> [f64; 7] {
        [
            self.omega1.a,
            self.omega1.b,
            self.omega1.lambda,
            self.omega2.a,
            self.omega2.b,
            self.omega2.lambda,
            self.theta.get(),
        ]
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != 7 {
            return Err(Error::InvalidParameter(format!(
                "expected 7 parameters, got {}",
                v.len()
            )));
        }
        Ok(Self {
            omega1: MwdParams::new(v[0], v[1], v[2])?,
            omega2: MwdParams::new(v[3], v[4], v[5])?,
            theta: ClaytonTheta::new(v[6])?,
        })
    }
}

const ENDPOINT_EPS: f64 = 1e-12;

/// The transformed integrand `h(t, G_Y(F_X^{-1}(t)))` at `t` in (0, 1).
fn integrand(m: &ModelParams, t: f64) -> f64 {
    let x = match mwd_quantile(&m.omega1, t) {
        Ok(x) => x,
        Err(_) => return f64::NAN,
    };
    let ln_g = m.omega2.log_cdf(x);
    if ln_g == f64::NEG_INFINITY {
        // G = 0: conditional CDF at v = 0.
        return 0.0;
    }
    clayton_h_from_logs(m.theta.get(), t.ln(), ln_g)
}

/// Exact reliability by adaptive quadrature on [eps, 1 - eps].
pub fn reliability_exact(m: &ModelParams, abs_tol: f64) -> Result<f64> {
    let r = integrate(
        |t| integrand(m, t),
        ENDPOINT_EPS,
        1.0 - ENDPOINT_EPS,
        abs_tol,
        abs_tol,
    )?
    .value;
    Ok(r.clamp(0.0, 1.0))
}

/// Exact reliability at the default tolerance 1e-8.
pub fn reliability_exact_default(m: &ModelParams) -> Result<f64> {
    reliability_exact(m, 1e-8)
}

/// Monte Carlo approximation: the average of
/// `T(x) = F_X(x)^-(theta+1) (F_X(x)^-theta + G_Y(x)^-theta - 1)^-(1/theta+1)`
/// over `n` draws `x ~ MWD(omega1)`; converges to R as n grows.
pub fn reliability_mc(m: &ModelParams, n: usize, stream: RngStream) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("Monte Carlo sample size 0".into()));
    }
    let draws = mwd_sample(&m.omega1, n, stream)?;
    let theta = m.theta.get();
    let mut acc = 0.0;
    for x in draws {
        let ln_u = m.omega1.log_cdf(x);
        let ln_g = m.omega2.log_cdf(x);
        let t = if ln_g == f64::NEG_INFINITY {
            0.0
        } else {
            clayton_h_from_logs(theta, ln_u, ln_g)
        };
        acc += t;
    }
    Ok(acc / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn setting1(theta: f64) -> ModelParams {
        ModelParams::new(
            MwdParams::new(0.75, 1.25, 0.6).unwrap(),
            MwdParams::new(2.0, 1.5, 0.25).unwrap(),
            ClaytonTheta::new(theta).unwrap(),
        )
    }

    fn setting2(theta: f64) -> ModelParams {
        ModelParams::new(
            MwdParams::new(0.6, 0.75, 1.4).unwrap(),
            MwdParams::new(2.5, 1.5, 0.5).unwrap(),
            ClaytonTheta::new(theta).unwrap(),
        )
    }

    #[test]
    fn setting1_true_values() {
        for (theta, expected) in [(2.0, 0.76403), (3.0, 0.81533), (4.0, 0.85699), (6.0, 0.91303)] {
            let r = reliability_exact(&setting1(theta), 1e-10).unwrap();
            assert_abs_diff_eq!(r, expected, epsilon = 1e-5);
        }
    }

    #[test]
    fn setting2_true_values() {
        for (theta, expected) in [
            (0.5, 0.59389),
            (1.0, 0.59877),
            (2.0, 0.61184),
            (4.0, 0.64763),
            (8.0, 0.71344),
            (10.0, 0.73588),
        ] {
            let r = reliability_exact(&setting2(theta), 1e-10).unwrap();
            assert_abs_diff_eq!(r, expected, epsilon = 1e-5);
        }
    }

    #[test]
    fn reliability_is_increasing_in_theta_for_setting1() {
        let rs: Vec<f64> = [2.0, 3.0, 4.0, 6.0]
            .iter()
            .map(|t| reliability_exact(&setting1(*t), 1e-9).unwrap())
            .collect();
        for w in rs.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn reliability_stays_in_unit_interval() {
        for theta in [1e-5, 0.1, 1.0, 10.0, 100.0, 1000.0] {
            let r = reliability_exact(&setting1(theta), 1e-8).unwrap();
            assert!((0.0..=1.0).contains(&r), "theta = {theta} gave {r}");
        }
    }

    #[test]
    fn independence_limit_matches_double_integral_oracle() {
        // theta -> 0: R = int G_Y(x) f_X(x) dx, computed by direct quadrature.
        let m = setting1(1e-5);
        let r = reliability_exact(&m, 1e-10).unwrap();
        let upper = mwd_quantile(&m.omega1, 1.0 - 1e-12).unwrap();
        let oracle = integrate(
            |x| {
                crate::margins::mwd_cdf(&m.omega2, x)
                    * crate::margins::mwd_pdf(&m.omega1, x).unwrap()
            },
            1e-12,
            upper,
            1e-10,
            1e-10,
        )
        .unwrap()
        .value;
        assert_abs_diff_eq!(r, oracle, epsilon = 1e-3);
    }

    #[test]
    fn mc_single_draw_equals_integrand() {
        let m = setting1(2.0);
        let stream = RngStream::new(8, 0);
        let r1 = reliability_mc(&m, 1, stream).unwrap();
        // Recompute T(x_1) by hand from the same stream.
        let x = mwd_sample(&m.omega1, 1, stream).unwrap()[0];
        let u = crate::margins::mwd_cdf(&m.omega1, x);
        let g = crate::margins::mwd_cdf(&m.omega2, x);
        let t = u.powf(-(2.0 + 1.0)) * (u.powf(-2.0) + g.powf(-2.0) - 1.0).powf(-(0.5 + 1.0));
        assert_abs_diff_eq!(r1, t, epsilon = 1e-12);
    }

    #[test]
    fn mc_matches_exact_at_large_n() {
        let m = setting1(4.0);
        let exact = reliability_exact(&m, 1e-10).unwrap();
        let mc = reliability_mc(&m, 100_000, RngStream::new(555, 3)).unwrap();
        assert_abs_diff_eq!(exact, 0.85699, epsilon = 1e-5);
        assert!((mc - exact).abs() < 0.005, "MC {mc} vs exact {exact}");
    }

    #[test]
    fn mc_two_seeds_agree() {
        let m = setting1(2.0);
        let a = reliability_mc(&m, 1_000_000, RngStream::new(1, 0)).unwrap();
        let b = reliability_mc(&m, 1_000_000, RngStream::new(2, 0)).unwrap();
        assert!((a - b).abs() < 0.003, "{a} vs {b}");
    }

    #[test]
    fn mc_exact_agreement_scales_with_n() {
        // |R_mc - R| <= 4 sd(T)/sqrt(N) for N in {1e3, 1e4, 1e5}.
        let m = setting2(2.0);
        let exact = reliability_exact(&m, 1e-10).unwrap();
        for (k, n) in [(0u64, 1_000usize), (1, 10_000), (2, 100_000)] {
            let stream = RngStream::new(9090, k);
            let draws = mwd_sample(&m.omega1, n, stream).unwrap();
            let theta = m.theta.get();
            let ts: Vec<f64> = draws
                .iter()
                .map(|&x| {
                    clayton_h_from_logs(theta, m.omega1.log_cdf(x), m.omega2.log_cdf(x))
                })
                .collect();
            let mean = ts.iter().sum::<f64>() / n as f64;
            let var = ts.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let bound = 4.0 * var.sqrt() / (n as f64).sqrt();
            assert!(
                (mean - exact).abs() <= bound,
                "n = {n}: |{mean} - {exact}| > {bound}"
            );
        }
    }
}
