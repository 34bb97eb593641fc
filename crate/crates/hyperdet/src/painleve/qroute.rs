//! Independent route through the Painleve VI equation for q(t).
//!
//! The state is r = q - t, which is tiny near t = 0 and carries the whole
//! solution; it is integrated in s = -ln(1-t) together with ln D.

use super::{fornberg_first, TauCurve};
use crate::asymptotics::kappa;
use crate::error::{domain, Error, Result};
use crate::fredholm::{det_with_rule, finite_rule};
use crate::kernels::{F21Kernel, KernelParams};
use crate::ode::{integrate, OdeOptions, OdeSystem};
use crate::specfun::hyp2f1_unit;

/// Distance to q in {0, 1, t} treated as a pole.
const POLE_GAP: f64 = 1e-300;

struct QSystem {
    th0: f64,
    th1: f64,
    thi: f64,
}

impl QSystem {
    fn new(p: &KernelParams) -> Self {
        let [th0, th1, _, thi] = p.theta();
        Self { th0, th1, thi }
    }

    /// sigma from (t, r, dr/dt) with theta_t = 0.
    fn sigma(&self, t: f64, r: f64, rt: f64) -> f64 {
        let q = t + r;
        let d = rt - r * (2.0 * t - 1.0 + r) / (t * (t - 1.0));
        let (a, b, c) = (self.th0 * self.th0, self.th1 * self.th1, self.thi * self.thi);
        t * t * (t - 1.0) * (t - 1.0) / (4.0 * q * (q - 1.0) * r) * d * d - a * t / (4.0 * q)
            + b * (t - 1.0) / (4.0 * (q - 1.0))
            - c * (q - 1.0) / 4.0
            + (a - b - c) / 8.0
    }

    /// t(t-1) d/dt ln D from sigma.
    fn log_derivative(&self, t: f64, sigma: f64) -> f64 {
        let (a, b, c) = (self.th0 * self.th0, self.th1 * self.th1, self.thi * self.thi);
        sigma + t * c / 4.0 + (a - b - c) / 8.0
    }

    fn qtt(&self, t: f64, r: f64, rt: f64) -> Result<f64> {
        let q = t + r;
        if q.abs() < POLE_GAP || (q - 1.0).abs() < POLE_GAP || r.abs() < POLE_GAP {
            return Err(Error::PoleEncountered { t, what: format!("q = {q}") });
        }
        let qt = 1.0 + rt;
        let (a, b) = (self.th0 * self.th0, self.th1 * self.th1);
        let thi1 = (self.thi - 1.0) * (self.thi - 1.0);
        Ok(0.5 * (1.0 / q + 1.0 / (q - 1.0)) * qt * qt - (1.0 / t + 1.0 / (t - 1.0)) * qt + rt * rt / (2.0 * r)
            + (2.0 * t - 1.0 + r) / (2.0 * t * (t - 1.0))
            + q * (q - 1.0) * r / (2.0 * t * t * (t - 1.0) * (t - 1.0))
                * (thi1 - a * t / (q * q) + b * (t - 1.0) / ((q - 1.0) * (q - 1.0))))
    }
}

impl OdeSystem for QSystem {
    fn dim(&self) -> usize {
        3
    }

    // y = (r, dr/ds, ln D)
    fn rhs(&self, s: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let t = -(-s).exp_m1();
        let omt = (-s).exp();
        let rt = y[1] / omt;
        let qtt = self.qtt(t, y[0], rt)?;
        let sg = self.sigma(t, y[0], rt);
        dy[0] = y[1];
        dy[1] = omt * omt * qtt - y[1];
        dy[2] = -self.log_derivative(t, sg) / t;
        Ok(())
    }
}

/// Leading coefficient of q(t) - t at t -> 0.
pub fn lambda0(p: &KernelParams) -> Result<f64> {
    let c = p.c();
    Ok((1.0 + c) * (1.0 + c) / ((p.z + p.w) * (p.z_prime + p.w)) * kappa(p)?)
}

/// Integrate q from the refined small-t expansion and recover sigma and ln D.
/// The output grid needs at least five points for sigma'.
pub fn q_route_check(p: &KernelParams, t0: f64, grid: &[f64], tol: f64) -> Result<TauCurve> {
    if !(t0 > 0.0 && t0 <= 1e-2) || grid.iter().any(|&t| !(t > t0 && t < 1.0)) {
        return domain(format!("need 0 < t0 <= 1e-2 and an output grid in (t0, 1), got t0 = {t0}"));
    }
    if grid.len() < 5 {
        return Err(Error::InsufficientGrid(format!("{} points; sigma' needs at least 5", grid.len())));
    }
    let c = p.c();
    let sys = QSystem::new(p);
    let (fa, fb, fc) = (p.z + p.w, 1.0 + p.z + p.w_prime, 1.0 + c);
    let f = hyp2f1_unit(fa, fb, fc, t0)?;
    let df = fa * fb / fc * hyp2f1_unit(fa + 1.0, fb + 1.0, fc + 1.0, t0)?;
    let e = 1.0 + p.z - p.z_prime;
    let r0 = -lambda0(p)? * t0.powf(1.0 + c) * (1.0 - t0).powf(e) * f * f;
    let dr0 = r0 * ((1.0 + c) / t0 - e / (1.0 - t0) + 2.0 * df / f);
    let direct = F21Kernel::direct(p)?;
    let (ln_d0, _) = det_with_rule(&direct, &finite_rule(t0, 24, c)?)?;

    let opts = OdeOptions { rtol: tol, atol: tol * 1e-6 * r0.abs().max(1e-300), ..Default::default() };
    let s_out: Vec<f64> = grid.iter().map(|&t| -(-t).ln_1p()).collect();
    let y0 = [r0, (1.0 - t0) * dr0, ln_d0];
    let sol = integrate(&sys, -(-t0).ln_1p(), &y0, &s_out, &opts)?;
    let mut curve = TauCurve::default();
    for (i, y) in sol.ys.iter().enumerate() {
        let t = grid[i];
        let rt = y[1] / (1.0 - t);
        curve.sigma.grid.push(t);
        curve.sigma.sigma.push(sys.sigma(t, y[0], rt));
        curve.ln_d.push(y[2]);
        curve.q.push(t + y[0]);
    }
    curve.sigma.sigma_prime = if curve.sigma.grid.len() >= 5 {
        fornberg_first(&curve.sigma.grid, &curve.sigma.sigma)
    } else {
        vec![f64::NAN; curve.sigma.grid.len()]
    };
    curve.failure = sol.failure.map(|e| e.to_string());
    Ok(curve)
}
