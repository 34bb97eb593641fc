//! Nystrom discretization of det(1 - K) on (0, t) and (s, inf).

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{kernel_value, IntegrableKernel, KernelPoint};
use crate::quadrature::{gauss_legendre, Interval, QuadratureRule};

/// Default absolute tolerance on the determinant.
pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ORDER: usize = 2048;
/// Below this Frobenius norm ln det(1 - M) is summed as -sum tr(M^k)/k, which keeps
/// relative accuracy in 1 - D when D is extremely close to one.
const TRACE_SERIES_NORM: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetResult {
    pub value: f64,
    /// ln D, accurate also when 1 - D is below machine epsilon.
    pub log_value: f64,
    pub order_used: usize,
    /// |difference| between the last two doublings.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decay {
    /// Kernel decays like e^(-x) times a power (Whittaker).
    Exp,
    /// Kernel decays like e^(-4 sqrt x) times a power (Macdonald).
    ExpSqrt,
}

/// Power m of the substitution x = t u^m on (0, t).
pub fn substitution_power(exponent_hint: f64) -> u32 {
    let m = (2.0 / (1.0 + exponent_hint)).ceil();
    if m.is_finite() && m > 1.0 {
        m as u32
    } else {
        1
    }
}

/// Nodes and weights on (0, t) after x = t u^m.
pub fn finite_rule(t: f64, n: usize, exponent_hint: f64) -> Result<QuadratureRule> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("interval endpoint must lie in (0, 1), got {t}"));
    }
    let m = substitution_power(exponent_hint) as i32;
    let base = gauss_legendre(n)?.on_interval(0.0, 1.0);
    let nodes = base.nodes.iter().map(|&u| t * u.powi(m)).collect();
    let weights = base
        .nodes
        .iter()
        .zip(&base.weights)
        .map(|(&u, &w)| w * t * m as f64 * u.powi(m - 1))
        .collect();
    Ok(QuadratureRule { nodes, weights, mapped_domain: Interval::new(0.0, t) })
}

/// Right end of the truncated half-line.
pub fn truncation_point(k: &dyn IntegrableKernel, s: f64, decay: Decay) -> f64 {
    match decay {
        Decay::Exp => s + (50f64).max(s + 40.0 * k.tail_power().abs().max(1.0)),
        Decay::ExpSqrt => {
            let r = s.sqrt() + 10.0;
            r * r
        }
    }
}

/// Nodes and weights on (s, X) after x = s e^y; X from [`truncation_point`].
pub fn semiinfinite_rule(k: &dyn IntegrableKernel, s: f64, n: usize, decay: Decay) -> Result<QuadratureRule> {
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("half-line start must be positive, got {s}"));
    }
    let xmax = truncation_point(k, s, decay);
    let head = k.diag(s)?.abs();
    let tail = k.diag(xmax)?.abs();
    if tail > 1e-16 * head && tail > f64::MIN_POSITIVE {
        return Err(Error::TailBoundViolation(format!(
            "K(X, X) / K(s, s) = {:.3e} at X = {xmax}",
            tail / head
        )));
    }
    let len = (xmax / s).ln();
    let base = gauss_legendre(n)?.on_interval(0.0, len);
    let nodes: Vec<f64> = base.nodes.iter().map(|&y| s * y.exp()).collect();
    let weights = nodes.iter().zip(&base.weights).map(|(&x, &w)| w * x).collect();
    Ok(QuadratureRule { nodes, weights, mapped_domain: Interval::new(s, xmax) })
}

/// Kernel points at the nodes, evaluated in parallel.
pub fn kernel_points(k: &dyn IntegrableKernel, nodes: &[f64]) -> Result<Vec<KernelPoint>> {
    nodes.par_iter().map(|&x| k.point(x)).collect()
}

/// Symmetrized Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j).
pub fn nystrom_matrix(rule: &QuadratureRule, pts: &[KernelPoint]) -> DMatrix<f64> {
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| sw[i] * kernel_value(rule.nodes[i], &pts[i], rule.nodes[j], &pts[j]) * sw[j])
                .collect()
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// ln|det(1 - M)| and the sign of det(1 - M).
pub fn log_det_one_minus(m: &DMatrix<f64>) -> (f64, f64) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, 1.0);
    }
    if m.norm() < TRACE_SERIES_NORM {
        let mut acc = 0.0;
        let mut power = m.clone();
        for k in 1..400 {
            let term = power.trace() / k as f64;
            acc -= term;
            if term.abs() <= 1e-18 * acc.abs().max(f64::MIN_POSITIVE) || term == 0.0 {
                break;
            }
            power = &power * m;
        }
        return (acc, 1.0);
    }
    let a = DMatrix::<f64>::identity(n, n) - m;
    let lu = a.lu();
    let u = lu.u();
    let mut ln = 0.0;
    let mut sign = lu.p().determinant::<f64>();
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        ln += d.abs().ln();
        sign *= d.signum();
    }
    (ln, sign)
}

/// Determinant for a fixed rule.
pub fn det_with_rule(k: &dyn IntegrableKernel, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let pts = kernel_points(k, &rule.nodes)?;
    let m = nystrom_matrix(rule, &pts);
    Ok(log_det_one_minus(&m))
}

fn doubling(n: usize, tol: f64, eval: impl Fn(usize) -> Result<(f64, f64)>) -> Result<DetResult> {
    if n < 2 {
        return domain(format!("quadrature order must be at least 2, got {n}"));
    }
    let value = |(ln, sign): (f64, f64)| sign * ln.exp();
    let mut prev = eval(n)?;
    let mut order = n;
    for _ in 0..2 {
        let next_order = 2 * order;
        if next_order > MAX_ORDER {
            break;
        }
        let next = eval(next_order)?;
        let err = (value(next) - value(prev)).abs();
        order = next_order;
        if err <= tol {
            return Ok(DetResult { value: value(next), log_value: next.0, order_used: order, error_estimate: err });
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "determinant not within {tol:.1e} after doubling to n = {order}"
    )))
}

/// det(1 - K) on (0, t) with the doubling protocol n, 2n, 4n.
pub fn fredholm_det_finite(k: &dyn IntegrableKernel, t: f64, n: usize, exponent_hint: f64) -> Result<DetResult> {
    fredholm_det_finite_tol(k, t, n, exponent_hint, DEFAULT_TOL)
}

pub fn fredholm_det_finite_tol(
    k: &dyn IntegrableKernel,
    t: f64,
    n: usize,
    exponent_hint: f64,
    tol: f64,
) -> Result<DetResult> {
    doubling(n, tol, |m| det_with_rule(k, &finite_rule(t, m, exponent_hint)?))
}

/// det(1 - K) on (s, inf) with the doubling protocol n, 2n, 4n.
pub fn fredholm_det_semiinfinite(k: &dyn IntegrableKernel, s: f64, n: usize, decay: Decay) -> Result<DetResult> {
    fredholm_det_semiinfinite_tol(k, s, n, decay, DEFAULT_TOL)
}

pub fn fredholm_det_semiinfinite_tol(
    k: &dyn IntegrableKernel,
    s: f64,
    n: usize,
    decay: Decay,
    tol: f64,
) -> Result<DetResult> {
    doubling(n, tol, |m| det_with_rule(k, &semiinfinite_rule(k, s, m, decay)?))
}

/// Diagonal R(x, x) of the resolvent K (1 - K)^(-1) at a point x, typically an endpoint.
pub fn resolvent_diagonal(k: &dyn IntegrableKernel, rule: &QuadratureRule, x: f64) -> Result<f64> {
    let pts = kernel_points(k, &rule.nodes)?;
    let px = k.point(x)?;
    let m = nystrom_matrix(rule, &pts);
    let n = rule.len();
    let b = DVector::from_fn(n, |j, _| rule.weights[j].sqrt() * kernel_value(rule.nodes[j], &pts[j], x, &px));
    let a = DMatrix::<f64>::identity(n, n) - m;
    let y = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::NonConvergence("singular Nystrom system".into()))?;
    Ok(px.diag() + b.dot(&y))
}

/// d/ds ln det(1 - K) on (s, inf), which equals R(s, s).
pub fn semiinfinite_log_derivative(k: &dyn IntegrableKernel, s: f64, n: usize, decay: Decay) -> Result<f64> {
    let rule = semiinfinite_rule(k, s, n, decay)?;
    resolvent_diagonal(k, &rule, s)
}

/// d/dt ln det(1 - K) on (0, t), which equals -R(t, t).
pub fn finite_log_derivative(k: &dyn IntegrableKernel, t: f64, n: usize, exponent_hint: f64) -> Result<f64> {
    let rule = finite_rule(t, n, exponent_hint)?;
    Ok(-resolvent_diagonal(k, &rule, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::FnKernel;

    #[test]
    fn substitution_power_values() {
        assert_eq!(substitution_power(1.0), 1);
        assert_eq!(substitution_power(0.5), 2);
        assert_eq!(substitution_power(0.1), 2);
        assert_eq!(substitution_power(-0.5), 4);
    }

    #[test]
    fn trace_series_matches_lu() {
        let m = DMatrix::from_fn(4, 4, |i, j| 0.02 / (1.0 + i as f64 + j as f64));
        let (a, _) = log_det_one_minus(&m);
        let lu = (DMatrix::<f64>::identity(4, 4) - &m).determinant().ln();
        assert!((a - lu).abs() < 1e-15);
    }

    #[test]
    fn constant_kernel() {
        // f = x, g = 1 gives K = 1
        let k = FnKernel {
            point_fn: |x| KernelPoint { f: x, g: 1.0, df: 1.0, dg: 0.0 },
            domain: Interval::new(0.0, 1.0),
        };
        let d = fredholm_det_finite(&k, 0.4, 8, 1.0).unwrap();
        assert!((d.value - 0.6).abs() < 1e-14);
    }
}
