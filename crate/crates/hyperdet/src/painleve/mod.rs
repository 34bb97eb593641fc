//! Painleve routes to the determinants and sigma-form validators.

mod qroute;
mod tw;

pub use qroute::{lambda0, q_route_check};
pub use tw::{
    first_integrals, integrate_tau_pvi, ode_options, sigma_curve_pvi, sigma_of_state, tw_initial_state,
    tw_vector_field, zeta, zeta_equation_residual, TWDerivative, TWState,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fredholm::{semiinfinite_log_derivative, Decay};
use crate::kernels::{MacdonaldKernel, WhittakerKernel};

/// Minimum number of points for a sigma-form residual.
pub const MIN_RESIDUAL_POINTS: usize = 200;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SigmaCurve {
    pub grid: Vec<f64>,
    pub sigma: Vec<f64>,
    pub sigma_prime: Vec<f64>,
}

/// Output of the ODE routes.
#[derive(Debug, Clone, Default)]
pub struct TauCurve {
    pub sigma: SigmaCurve,
    pub ln_d: Vec<f64>,
    /// I1(t) - I1(t0); empty for the q route.
    pub i1_drift: Vec<f64>,
    /// I2(t) - I2(t0); empty for the q route.
    pub i2_drift: Vec<f64>,
    pub states: Vec<TWState>,
    /// q(t); filled by the q route only.
    pub q: Vec<f64>,
    /// Why the integration stopped early, if it did.
    pub failure: Option<String>,
}

impl TauCurve {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SigmaFamily {
    /// (theta_0, theta_1, theta_t, theta_inf)
    Pvi([f64; 4]),
    Pv { z: f64, z_prime: f64, w: f64 },
    Piii { z: f64, z_prime: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub rms: f64,
    /// Grid point of the maximum.
    pub argmax: f64,
    pub points: usize,
}

/// Finite-difference weights for derivatives 0..=m at x0 (Fornberg's algorithm).
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

/// Five-point derivative of order `order` at every grid point (one-sided stencils at the ends).
fn fornberg_derivative(xs: &[f64], f: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n.saturating_sub(5));
            let hi = (lo + 5).min(n);
            let c = fornberg_weights(xs[i], &xs[lo..hi], order);
            (lo..hi).map(|j| c[j - lo][order] * f[j]).sum()
        })
        .collect()
}

pub fn fornberg_first(xs: &[f64], f: &[f64]) -> Vec<f64> {
    fornberg_derivative(xs, f, 1)
}

pub fn fornberg_second(xs: &[f64], f: &[f64]) -> Vec<f64> {
    fornberg_derivative(xs, f, 2)
}

/// Scaled residual of the named sigma form at every grid point, with sigma' from the
/// curve and sigma'' from five-point differences of sigma. The two points at each
/// end, where the stencil is one-sided, are NaN.
pub fn sigma_form_pointwise(curve: &SigmaCurve, family: SigmaFamily) -> Result<Vec<f64>> {
    let n = curve.grid.len();
    if n < MIN_RESIDUAL_POINTS || curve.sigma.len() != n || curve.sigma_prime.len() != n {
        return Err(Error::InsufficientGrid(format!(
            "{n} points; the residual needs at least {MIN_RESIDUAL_POINTS} with sigma and sigma' filled"
        )));
    }
    if curve.grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InsufficientGrid("grid is not strictly increasing".into()));
    }
    let s2 = fornberg_second(&curve.grid, &curve.sigma);
    let mut out = vec![f64::NAN; n];
    for i in 2..n - 2 {
        let (t, s, s1, s2) = (curve.grid[i], curve.sigma[i], curve.sigma_prime[i], s2[i]);
        let terms = match family {
            SigmaFamily::Pvi([th0, th1, tht, thi]) => {
                let a = t * (t - 1.0) * s2;
                let lhs1 = s1 * a * a;
                let b = 2.0 * s1 * (t * s1 - s) - s1 * s1 - (tht * tht - thi * thi) * (th0 * th0 - th1 * th1) / 16.0;
                let rhs = (s1 + (tht + thi).powi(2) / 4.0)
                    * (s1 + (tht - thi).powi(2) / 4.0)
                    * (s1 + (th0 + th1).powi(2) / 4.0)
                    * (s1 + (th0 - th1).powi(2) / 4.0);
                [lhs1, b * b, -rhs]
            }
            SigmaFamily::Pv { z, z_prime, w } => {
                let lhs = (t * s2).powi(2);
                let x = 2.0 * s1 * s1 - (z + z_prime + 2.0 * w + t) * s1 + s;
                let t2 = 4.0 * s1 * s1 * (s1 - z - w) * (s1 - z_prime - w);
                [lhs, -x * x, t2]
            }
            SigmaFamily::Piii { z, z_prime } => {
                let lhs = (t * s2).powi(2);
                let r1 = 4.0 * s1 * (s1 - 1.0) * (s - t * s1);
                let r2 = (z - z_prime).powi(2) * s1 * s1;
                [lhs, -r1, -r2]
            }
        };
        let scale: f64 = terms.iter().map(|v| v.abs()).sum();
        out[i] = if scale > 0.0 { terms.iter().sum::<f64>().abs() / scale } else { 0.0 };
    }
    Ok(out)
}

/// Max and rms of [`sigma_form_pointwise`] over the interior points.
pub fn sigma_form_residual(curve: &SigmaCurve, family: SigmaFamily) -> Result<ResidualStats> {
    let r = sigma_form_pointwise(curve, family)?;
    let mut max = 0.0;
    let mut argmax = f64::NAN;
    let mut sum2 = 0.0;
    let mut count = 0;
    for (i, &v) in r.iter().enumerate().filter(|(_, v)| !v.is_nan()) {
        if v > max {
            max = v;
            argmax = curve.grid[i];
        }
        sum2 += v * v;
        count += 1;
    }
    Ok(ResidualStats { max, rms: (sum2 / count as f64).sqrt(), argmax, points: count })
}

/// Tau curve from the TW system, falling back to the q route when w = w' leaves the
/// TW normalization undefined.
pub fn integrate_tau(p: &crate::kernels::KernelParams, t0: f64, grid: &[f64], tol: f64) -> Result<TauCurve> {
    match integrate_tau_pvi(p, t0, grid, tol) {
        Err(Error::DegenerateParams(_)) => q_route_check(p, t0, grid, tol),
        other => other,
    }
}

/// Grid on [a, b] uniform in ln x + x: dense near 0 and evenly spread at large x.
pub fn log_linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let g = |x: f64| x.ln() + x;
    let (ga, gb) = (g(a), g(b));
    (0..n)
        .map(|i| {
            let target = ga + (gb - ga) * i as f64 / (n - 1).max(1) as f64;
            let (mut lo, mut hi) = (a * 0.5, b * 2.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Grid on [t_a, t_b] in (0, 1) uniform in ln(1-t).
pub fn log_endpoint_grid(t_a: f64, t_b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = ((-t_a).ln_1p(), (-t_b).ln_1p());
    (0..n)
        .map(|i| -(la + (lb - la) * i as f64 / (n - 1).max(1) as f64).exp_m1())
        .collect()
}

fn curve_from_log_derivative(grid: &[f64], eval: impl Fn(f64) -> Result<f64> + Sync) -> Result<SigmaCurve> {
    let sigma: Vec<f64> = grid.par_iter().map(|&s| eval(s).map(|d| s * d)).collect::<Result<_>>()?;
    let sigma_prime = if grid.len() >= 5 { fornberg_first(grid, &sigma) } else { vec![f64::NAN; grid.len()] };
    Ok(SigmaCurve { grid: grid.to_vec(), sigma, sigma_prime })
}

/// sigma_L(s) = s d/ds ln D_L(s) on the grid, from the resolvent at the endpoint.
pub fn sigma_l_curve(k: &WhittakerKernel, grid: &[f64], n: usize) -> Result<SigmaCurve> {
    curve_from_log_derivative(grid, |s| semiinfinite_log_derivative(k, s, n, Decay::Exp))
}

/// sigma_M(xi) = xi d/dxi ln D_M(xi) on the grid.
pub fn sigma_m_curve(k: &MacdonaldKernel, grid: &[f64], n: usize) -> Result<SigmaCurve> {
    curve_from_log_derivative(grid, |s| semiinfinite_log_derivative(k, s, n, Decay::ExpSqrt))
}
