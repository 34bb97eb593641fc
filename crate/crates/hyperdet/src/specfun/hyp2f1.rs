//! Gauss hypergeometric function 2F1 for real parameters and real argument x <= 0,
//! plus the unit-interval evaluator the kernels call directly.

use super::gamma::{gamma_ratio, is_nonpositive_integer};
use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 600;
const REL_STOP: f64 = 1e-17;
/// Half-width of the parameter perturbation used when c - a - b is an integer.
const PERTURB: f64 = 2e-3;
/// Distance from an integer below which the connection formula is considered degenerate.
const NEAR_INTEGER: f64 = 1e-6;

/// Plain power series, |x| < 1.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::SingularGamma(c));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() < REL_STOP * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge in {MAX_TERMS} terms"
    )))
}

/// 2F1(a, b; c; y) for y in [0, 1).
pub fn hyp2f1_unit(a: f64, b: f64, c: f64, y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return domain(format!("unit-interval 2F1 needs y in [0, 1), got {y}"));
    }
    if y <= 0.5 {
        return hyp2f1_series(a, b, c, y);
    }
    let s = c - a - b;
    if (s - s.round()).abs() > NEAR_INTEGER {
        return connection_at_one(a, b, c, y);
    }
    // Degenerate exponent pair: the symmetric average over b +- d is even in d,
    // so two Richardson levels on d, 2d, 4d cancel the d^2 and d^4 terms.
    let avg = |d: f64| -> Result<f64> {
        Ok(0.5 * (connection_at_one(a, b + d, c, y)? + connection_at_one(a, b - d, c, y)?))
    };
    let s1 = avg(PERTURB)?;
    let s2 = avg(2.0 * PERTURB)?;
    let s4 = avg(4.0 * PERTURB)?;
    let r1 = (4.0 * s1 - s2) / 3.0;
    let r2 = (4.0 * s2 - s4) / 3.0;
    Ok((16.0 * r1 - r2) / 15.0)
}

/// Connection formula between the expansions at 0 and 1, valid for non-integer c - a - b.
fn connection_at_one(a: f64, b: f64, c: f64, y: f64) -> Result<f64> {
    let s = c - a - b;
    let e = 1.0 - y;
    let g1 = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let g2 = gamma_ratio(&[c, -s], &[a, b])?;
    let mut out = 0.0;
    if g1 != 0.0 {
        out += g1 * hyp2f1_series(a, b, 1.0 - s, e)?;
    }
    if g2 != 0.0 {
        out += g2 * e.powf(s) * hyp2f1_series(c - a, c - b, 1.0 + s, e)?;
    }
    Ok(out)
}

/// 2F1(a, b; c; x) for x <= 0.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::SingularGamma(c));
    }
    if !(x <= 0.0) {
        return domain(format!("2F1 is only provided for x <= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x >= -0.5 {
        return hyp2f1_series(a, b, c, x);
    }
    // Pfaff: 2F1(a,b;c;x) = (1-x)^(-a) 2F1(a, c-b; c; x/(x-1))
    let y = x / (x - 1.0);
    Ok((1.0 - x).powf(-a) * hyp2f1_unit(a, c - b, c, y)?)
}
