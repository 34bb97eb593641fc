//! Tracy-Widom system for the 2F1 kernel determinant.
//!
//! State (q, p, u, v, w) with q = (1-K)^(-1) phi (t), p = (1-K)^(-1) psi (t),
//! u = (Q, phi), v = (Q, psi), w = (P, psi). Integration runs in s = -ln(1-t),
//! which resolves the t -> 1 end.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{SigmaCurve, TauCurve};
use crate::asymptotics::kappa;
use crate::error::{domain, Error, Result};
use crate::fredholm::{finite_rule, kernel_points, log_det_one_minus, nystrom_matrix};
use crate::kernels::{build_f21_kernel, kernel_value, F21Kernel, IntegrableKernel, KernelParams, TwNormalization};
use crate::ode::{integrate, OdeOptions, OdeSystem};

/// Nystrom order used for the initial state.
const INIT_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TWState {
    pub t: f64,
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
    pub w_tw: f64,
    pub ln_d: f64,
}

/// d/dt of every component of a [`TWState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TWDerivative {
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
    pub w_tw: f64,
    pub ln_d: f64,
}

struct Coeffs {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

fn coeffs(s: &TWState, tw: &TwNormalization) -> Coeffs {
    let a1 = tw.alpha1;
    Coeffs {
        alpha: tw.alpha0 + a1 * s.t + s.v,
        beta: tw.beta0 + (2.0 * a1 - 1.0) * s.u,
        gamma: tw.gamma0 - (2.0 * a1 + 1.0) * s.w_tw,
    }
}

/// zeta = t(t-1) d/dt ln D = 2 alpha p q + beta p^2 + gamma q^2.
pub fn zeta(s: &TWState, tw: &TwNormalization) -> f64 {
    let c = coeffs(s, tw);
    2.0 * c.alpha * s.p * s.q + c.beta * s.p * s.p + c.gamma * s.q * s.q
}

/// The two first integrals (I1, I2).
pub fn first_integrals(s: &TWState, tw: &TwNormalization) -> (f64, f64) {
    let c = coeffs(s, tw);
    let a1 = tw.alpha1;
    let i1 = 2.0 * c.alpha * s.p * s.q + c.beta * s.p * s.p + c.gamma * s.q * s.q - 2.0 * a1 * s.v;
    let x = s.v + tw.alpha0;
    let i2 = x * x - c.beta * c.gamma - 2.0 * a1 * s.t * (1.0 - s.t) * s.p * s.q + 2.0 * a1 * (1.0 - s.t) * s.v
        - i1 * s.t;
    (i1, i2)
}

pub fn tw_vector_field(s: &TWState, tw: &TwNormalization) -> Result<TWDerivative> {
    let t = s.t;
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("Tracy-Widom system is singular at t = {t}"));
    }
    let c = coeffs(s, tw);
    let m = t * (1.0 - t);
    Ok(TWDerivative {
        q: (c.alpha * s.q + c.beta * s.p) / m,
        p: (-c.gamma * s.q - c.alpha * s.p) / m,
        u: s.q * s.q,
        v: s.p * s.q,
        w_tw: s.p * s.p,
        ln_d: -zeta(s, tw) / m,
    })
}

/// sigma(t) and sigma'(t) from the state.
pub fn sigma_of_state(s: &TWState, p: &KernelParams, tw: &TwNormalization) -> (f64, f64) {
    let a1 = tw.alpha1;
    let c = p.c();
    let d = p.z - p.z_prime;
    let sigma = zeta(s, tw) - a1 * a1 * s.t + 0.5 * a1 * a1 + (d * d - c * c) / 8.0;
    (sigma, 2.0 * a1 * s.p * s.q - a1 * a1)
}

/// Residual of the second-order equation for zeta, with zeta'' taken from the system itself.
/// Returns |LHS - RHS| / (sum of absolute terms).
pub fn zeta_equation_residual(s: &TWState, tw: &TwNormalization) -> f64 {
    let c = coeffs(s, tw);
    let a1 = tw.alpha1;
    let t = s.t;
    let (i1, i2) = first_integrals(s, tw);
    let z = zeta(s, tw);
    let zp = 2.0 * a1 * s.p * s.q;
    let m_zpp = 2.0 * a1 * (c.beta * s.p * s.p - c.gamma * s.q * s.q);
    let y = t * zp - z;
    let t1 = m_zpp * m_zpp;
    let t2 = 4.0 * (zp - a1 * a1) * y * y;
    let t3 = -4.0 * zp * y * (zp + 2.0 * tw.alpha0 * a1 - i1);
    let rhs = 4.0 * (i1 + i2) * zp * zp;
    (t1 + t2 + t3 - rhs).abs() / (t1.abs() + t2.abs() + t3.abs() + rhs.abs()).max(f64::MIN_POSITIVE)
}

/// Regular initial state at small t0 from a Nystrom solve on (0, t0).
pub fn tw_initial_state(p: &KernelParams, t0: f64) -> Result<TWState> {
    if !(t0 > 0.0 && t0 <= 1e-2) {
        return domain(format!("initial point must lie in (0, 1e-2], got {t0}"));
    }
    let k = build_f21_kernel(p)?;
    initial_state_with(&k, t0)
}

fn initial_state_with(k: &F21Kernel, t0: f64) -> Result<TWState> {
    let p = &k.params;
    let c = p.c();
    let rule = finite_rule(t0, INIT_ORDER, c)?;
    let n = rule.len();
    let pts = kernel_points(k, &rule.nodes)?;
    let (ln_d, sign) = log_det_one_minus(&nystrom_matrix(&rule, &pts));
    if sign <= 0.0 {
        return Err(Error::InconsistentInit(format!("det(1 - K) on (0, {t0}) is not positive")));
    }
    let mut fg = DMatrix::zeros(n, 2);
    for (j, &x) in rule.nodes.iter().enumerate() {
        let (ph, ps) = k.phi_psi(x)?;
        fg[(j, 0)] = ph;
        fg[(j, 1)] = ps;
    }
    let a = DMatrix::from_fn(n, n, |i, j| {
        let kij = kernel_value(rule.nodes[i], &pts[i], rule.nodes[j], &pts[j]);
        f64::from(u8::from(i == j)) - kij * rule.weights[j]
    });
    let sol = a
        .lu()
        .solve(&fg)
        .ok_or_else(|| Error::InconsistentInit("singular Nystrom system at t0".into()))?;
    let pt = k.point(t0)?;
    let kt = DVector::from_fn(n, |j, _| rule.weights[j] * kernel_value(t0, &pt, rule.nodes[j], &pts[j]));
    let (ph0, ps0) = k.phi_psi(t0)?;
    let dot = |a: usize, b: usize| -> f64 { (0..n).map(|j| rule.weights[j] * fg[(j, a)] * sol[(j, b)]).sum() };
    let state = TWState {
        t: t0,
        q: ph0 + kt.dot(&sol.column(0)),
        p: ps0 + kt.dot(&sol.column(1)),
        u: dot(0, 0),
        v: dot(0, 1),
        w_tw: dot(1, 1),
        ln_d,
    };
    let expected = 1.0 - kappa(p)? * t0.powf(1.0 + c);
    let got = ln_d.exp();
    if (got - expected).abs() > 10.0 * t0.powf(2.0 + c) {
        return Err(Error::InconsistentInit(format!(
            "D(t0) = {got:.15e} but the small-t expansion gives {expected:.15e}"
        )));
    }
    Ok(state)
}

struct TwSystem<'a> {
    tw: &'a TwNormalization,
    tol: f64,
}

fn unpack(s: f64, y: &[f64]) -> TWState {
    TWState { t: -(-s).exp_m1(), q: y[0], p: y[1], u: y[2], v: y[3], w_tw: y[4], ln_d: y[5] }
}

impl OdeSystem for TwSystem<'_> {
    fn dim(&self) -> usize {
        6
    }

    fn rhs(&self, s: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let st = unpack(s, y);
        let d = tw_vector_field(&st, self.tw)?;
        let omt = (-s).exp();
        for (o, v) in dy.iter_mut().zip([d.q, d.p, d.u, d.v, d.w_tw, d.ln_d]) {
            *o = omt * v;
        }
        Ok(())
    }

    fn accept_step(&self, s0: f64, y0: &[f64], s1: f64, y1: &[f64]) -> bool {
        let (a1, a2) = first_integrals(&unpack(s0, y0), self.tw);
        let (b1, b2) = first_integrals(&unpack(s1, y1), self.tw);
        let bound = |i: f64| 10.0 * self.tol * (1.0 + i.abs());
        (b1 - a1).abs() <= bound(a1) && (b2 - a2).abs() <= bound(a2)
    }
}

/// Integration tolerances derived from a single user tolerance.
pub fn ode_options(tol: f64) -> OdeOptions {
    OdeOptions { rtol: tol, atol: tol * 1e-3, ..Default::default() }
}

/// Integrate the regular solution from t0 through the increasing output grid.
pub fn integrate_tau_pvi(p: &KernelParams, t0: f64, grid: &[f64], tol: f64) -> Result<TauCurve> {
    let k = build_f21_kernel(p)?;
    let tw = *k.tw().expect("normalization exists for non-degenerate parameters");
    if grid.iter().any(|&t| !(t > t0 && t < 1.0)) {
        return domain(format!("output grid must lie in ({t0}, 1)"));
    }
    let init = initial_state_with(&k, t0)?;
    let (i1_0, i2_0) = first_integrals(&init, &tw);
    let sys = TwSystem { tw: &tw, tol };
    let s_out: Vec<f64> = grid.iter().map(|&t| -(-t).ln_1p()).collect();
    let y0 = [init.q, init.p, init.u, init.v, init.w_tw, init.ln_d];
    let sol = integrate(&sys, -(-t0).ln_1p(), &y0, &s_out, &ode_options(tol))?;
    let mut curve = TauCurve::default();
    for (i, y) in sol.ys.iter().enumerate() {
        let mut st = unpack(sol.xs[i], y);
        st.t = grid[i];
        let (sg, sgp) = sigma_of_state(&st, p, &tw);
        let (i1, i2) = first_integrals(&st, &tw);
        curve.sigma.grid.push(st.t);
        curve.sigma.sigma.push(sg);
        curve.sigma.sigma_prime.push(sgp);
        curve.ln_d.push(st.ln_d);
        curve.i1_drift.push(i1 - i1_0);
        curve.i2_drift.push(i2 - i2_0);
        curve.states.push(st);
    }
    curve.failure = sol.failure.map(|e| e.to_string());
    Ok(curve)
}

/// Curve of sigma alone, for callers that only need the sigma-form data.
pub fn sigma_curve_pvi(p: &KernelParams, t0: f64, grid: &[f64], tol: f64) -> Result<SigmaCurve> {
    Ok(integrate_tau_pvi(p, t0, grid, tol)?.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_is_fixed() {
        let p = KernelParams::new(0.3, 0.2, 0.4, 0.1).unwrap();
        let k = build_f21_kernel(&p).unwrap();
        let s = TWState { t: 0.4, q: 0.0, p: 0.0, u: 0.0, v: 0.0, w_tw: 0.0, ln_d: 0.0 };
        let d = tw_vector_field(&s, k.tw().unwrap()).unwrap();
        assert_eq!([d.q, d.p, d.u, d.v, d.w_tw, d.ln_d], [0.0; 6]);
    }

    #[test]
    fn initial_integrals_are_regular() {
        let p = KernelParams::new(0.3, 0.2, 0.4, 0.1).unwrap();
        let k = build_f21_kernel(&p).unwrap();
        let tw = *k.tw().unwrap();
        let s = tw_initial_state(&p, 1e-3).unwrap();
        let (i1, i2) = first_integrals(&s, &tw);
        let c = p.c();
        assert!(i1.abs() < 1e-10, "I1 = {i1}");
        assert!((i2 - c * c / 4.0).abs() < 1e-10, "I2 = {i2}");
    }
}
