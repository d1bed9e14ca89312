//! The bivariate Clayton copula.
//!
//! `C_theta(u, v) = (u^-theta + v^-theta - 1)^(-1/theta)` for `theta > 0`;
//! independence is the limit `theta -> 0+`. All expressions are evaluated in
//! `expm1`/`ln_1p` form so they stay accurate down to `theta ~ 1e-6` and out
//! to `theta ~ 1e4`.

use crate::error::{Error, Result};
use crate::margins::{mwd_quantile, MwdParams};
use crate::numerics::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Clayton dependence parameter, theta > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaytonTheta(f64);

impl ClaytonTheta {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Clayton theta = {theta} must be a finite positive number"
            )));
        }
        Ok(Self(theta))
    }

    #[inline]
    pub fn get(&self) -> f64 {
        self.0
    }
}

/// An observed dependent sample of (strength, stress) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter(format!(
                "paired sample length mismatch: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: x.len(),
            });
        }
        if x.iter().chain(y.iter()).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "paired sample entries must be finite and positive".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

/// Copula CDF on the closed unit square.
pub fn clayton_cdf(theta: ClaytonTheta, u: f64, v: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v));
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    if u == 1.0 {
        return v;
    }
    if v == 1.0 {
        return u;
    }
    let t = theta.get();
    // z = u^-t + v^-t - 2 >= 0, so C = (1 + z)^(-1/t) via ln_1p.
    let z = (-t * u.ln()).exp_m1() + (-t * v.ln()).exp_m1();
    (-z.ln_1p() / t).exp()
}

/// Copula log-density at interior (u, v).
pub fn clayton_logpdf(theta: ClaytonTheta, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Clayton density requires interior (u, v), got ({u}, {v})"
        )));
    }
    let t = theta.get();
    let z = (-t * u.ln()).exp_m1() + (-t * v.ln()).exp_m1();
    Ok((t + 1.0).ln() - (t + 1.0) * (u.ln() + v.ln()) - (1.0 / t + 2.0) * z.ln_1p())
}

/// Copula density at interior (u, v).
pub fn clayton_pdf(theta: ClaytonTheta, u: f64, v: f64) -> Result<f64> {
    Ok(clayton_logpdf(theta, u, v)?.exp())
}

/// Conditional h-function `h(u, v) = dC/du`, a CDF in v given u:
/// `h = [1 + (u/v)^theta - u^theta]^(-(1/theta + 1))`.
pub fn clayton_h(theta: ClaytonTheta, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "clayton_h requires interior u, got {u}"
        )));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!(
            "clayton_h requires v in [0, 1], got {v}"
        )));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if v == 1.0 {
        return Ok(1.0);
    }
    Ok(clayton_h_from_logs(theta.get(), u.ln(), v.ln()))
}

/// h-function from log coordinates; tolerates ln_v down to -inf.
#[inline]
pub(crate) fn clayton_h_from_logs(theta: f64, ln_u: f64, ln_v: f64) -> f64 {
    // d = (u/v)^theta - u^theta, so h = (1 + d)^(-(1/theta + 1)).
    let d = (theta * (ln_u - ln_v)).exp_m1() - (theta * ln_u).exp_m1();
    if d.is_infinite() {
        return 0.0;
    }
    (-(1.0 / theta + 1.0) * d.ln_1p()).exp()
}

/// Analytic inverse of `clayton_h` in its second argument:
/// `v = [u^-theta (w^(-theta/(1+theta)) - 1) + 1]^(-1/theta)`.
pub fn clayton_h_inv(theta: ClaytonTheta, u: f64, w: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0 && w > 0.0 && w < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "clayton_h_inv requires interior (u, w), got ({u}, {w})"
        )));
    }
    let t = theta.get();
    let z = (-t * u.ln()).exp() * (-t / (1.0 + t) * w.ln()).exp_m1();
    if z.is_infinite() {
        return Ok(0.0);
    }
    Ok((-z.ln_1p() / t).exp())
}

/// Kendall's tau for Clayton: `tau = theta / (theta + 2)`.
pub fn tau_from_theta(theta: ClaytonTheta) -> f64 {
    theta.get() / (theta.get() + 2.0)
}

/// Inverse map `theta = 2 tau / (1 - tau)`; requires tau in (0, 1).
pub fn theta_from_tau(tau: f64) -> Result<ClaytonTheta> {
    if tau <= 0.0 {
        return Err(Error::NegativeDependence { tau });
    }
    if tau >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Kendall tau = {tau} implies a degenerate (perfectly concordant) Clayton copula"
        )));
    }
    ClaytonTheta::new(2.0 * tau / (1.0 - tau))
}

/// Merge-sort inversion count (strictly decreasing pairs).
fn count_inversions(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = a.split_at_mut(mid);
        count_inversions(left, buf) + count_inversions(right, buf)
    };

    {
        let (left, right) = a.split_at(mid);
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
        while i < left.len() && j < right.len() {
            if left[i] <= right[j] {
                buf[k] = left[i];
                i += 1;
            } else {
                // left[i] > right[j]: right[j] inverts all remaining left items.
                inv += (left.len() - i) as u64;
                buf[k] = right[j];
                j += 1;
            }
            k += 1;
        }
        while i < left.len() {
            buf[k] = left[i];
            i += 1;
            k += 1;
        }
        while j < right.len() {
            buf[k] = right[j];
            j += 1;
            k += 1;
        }
    }
    a.copy_from_slice(&buf[..n]);
    inv
}

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sample Kendall tau: `(concordant - discordant) / C(n, 2)`, ties counting
/// as neither. Computed in O(n log n) (Knight's algorithm), which matches
/// all-pairs enumeration exactly.
pub fn kendall_tau_hat(s: &PairedSample) -> f64 {
    let n = s.n();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        s.x[i]
            .partial_cmp(&s.x[j])
            .unwrap()
            .then(s.y[i].partial_cmp(&s.y[j]).unwrap())
    });

    let x_sorted: Vec<f64> = idx.iter().map(|&i| s.x[i]).collect();
    let mut y_in_x_order: Vec<f64> = idx.iter().map(|&i| s.y[i]).collect();

    // Pairs tied in x, in both coordinates, later in y.
    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let n1 = tied_pairs(&x_sorted);
    let n3 = {
        let mut total = 0u64;
        let mut run = 1u64;
        for w in idx.windows(2) {
            if s.x[w[0]] == s.x[w[1]] && s.y[w[0]] == s.y[w[1]] {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };

    let mut buf = vec![0.0; n];
    let discordant = count_inversions(&mut y_in_x_order, &mut buf);
    let n2 = tied_pairs(&y_in_x_order); // the slice is now sorted in y

    // concordant + discordant = n0 - n1 - n2 + n3
    let cd = (n0 - n1 - n2 + n3) as i64;
    let c_minus_d = cd - 2 * discordant as i64;
    c_minus_d as f64 / n0 as f64
}

/// Moment estimator of theta via Kendall-tau inversion.
pub fn theta_tau_hat(s: &PairedSample) -> Result<ClaytonTheta> {
    theta_from_tau(kendall_tau_hat(s))
}

/// Generates n dependent (x, y) pairs: u, w ~ U(0,1) i.i.d.,
/// v = h^{-1}(w | u), then x, y by marginal quantile inversion.
pub fn sample_pairs(
    omega1: &MwdParams,
    omega2: &MwdParams,
    theta: ClaytonTheta,
    n: usize,
    stream: RngStream,
) -> Result<PairedSample> {
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mut rng = stream.rng();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.sample(rand::distr::Open01);
        let w: f64 = rng.sample(rand::distr::Open01);
        let v = clayton_h_inv(theta, u, w)?;
        x.push(mwd_quantile(omega1, u)?);
        y.push(mwd_quantile(omega2, v)?);
    }
    PairedSample::new(x, y)
}

/// First and second derivatives of the Clayton CDF with respect to theta at
/// interior (u, v). Writing `C = S^(-1/theta)` with
/// `S = u^-theta + v^-theta - 1`:
///
/// `dC/dtheta  = C [ ln S / theta^2 - S' / (theta S) ]`,
/// `d2C/dtheta2 = C [ d1^2 + d1' ]`,
///
/// where `S' = -(u^-theta ln u + v^-theta ln v)`,
/// `S'' = u^-theta ln^2 u + v^-theta ln^2 v`, `d1` is the bracket above and
/// `d1' = -2 ln S / theta^3 + 2 S' / (theta^2 S) - S'' / (theta S)
///        + S'^2 / (theta S^2)`.
pub fn clayton_cdf_dtheta(theta: ClaytonTheta, u: f64, v: f64) -> Result<(f64, f64)> {
    if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "clayton_cdf_dtheta requires interior (u, v), got ({u}, {v})"
        )));
    }
    let t = theta.get();
    let (lu, lv) = (u.ln(), v.ln());
    let (put, pvt) = ((-t * lu).exp(), (-t * lv).exp());
    let z = (-t * lu).exp_m1() + (-t * lv).exp_m1();
    let s = 1.0 + z;
    let ln_s = z.ln_1p();
    let s1 = -(put * lu + pvt * lv);
    let s2 = put * lu * lu + pvt * lv * lv;

    let c = (-ln_s / t).exp();
    let d1 = ln_s / (t * t) - s1 / (t * s);
    let d1p = -2.0 * ln_s / (t * t * t) + 2.0 * s1 / (t * t * s) - s2 / (t * s)
        + s1 * s1 / (t * s * s);
    Ok((c * d1, c * (d1 * d1 + d1p)))
}
