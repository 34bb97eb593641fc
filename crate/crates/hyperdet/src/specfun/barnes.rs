//! Barnes G-function for positive real arguments.

use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{domain, Result};

/// Glaisher-Kinkelin constant A.
pub const GLAISHER: f64 = 1.282_427_129_100_622_636_9;

/// Below this the recursion G(x+1) = Gamma(x) G(x) shifts the argument up.
const SHIFT_THRESHOLD: f64 = 8.0;

// B_{2k+2} / (4k(k+1)) for k = 1..10
const ASYMPTOTIC: [f64; 10] = [
    (-1.0 / 30.0) / 8.0,
    (1.0 / 42.0) / 24.0,
    (-1.0 / 30.0) / 48.0,
    (5.0 / 66.0) / 80.0,
    (-691.0 / 2730.0) / 120.0,
    (7.0 / 6.0) / 168.0,
    (-3617.0 / 510.0) / 224.0,
    (43867.0 / 798.0) / 288.0,
    (-174_611.0 / 330.0) / 360.0,
    (854_513.0 / 138.0) / 440.0,
];

/// ln G(1 + z) for z >= 7 from the large-argument expansion.
fn ln_g1_asymptotic(z: f64) -> f64 {
    let ln_z = z.ln();
    let z2 = z * z;
    let inv2 = 1.0 / z2;
    let mut tail = 0.0;
    let mut p = inv2;
    for c in ASYMPTOTIC {
        tail += c * p;
        p *= inv2;
    }
    (z2 / 2.0 - 1.0 / 12.0) * ln_z - 0.75 * z2 + 0.5 * z * (2.0 * PI).ln() - GLAISHER.ln()
        + 1.0 / 12.0
        + tail
}

/// ln G(x) for x > 0.
pub fn log_barnes_g(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("Barnes G needs a positive argument, got {x}"));
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < SHIFT_THRESHOLD {
        shift += ln_gamma(y)?;
        y += 1.0;
    }
    Ok(ln_g1_asymptotic(y - 1.0) - shift)
}

/// The bracket G[a_1, ..., a_m / b_1, ..., b_n].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BarnesRatioSpec {
    pub numerator_args: Vec<f64>,
    pub denominator_args: Vec<f64>,
}

impl BarnesRatioSpec {
    pub fn new(numerator_args: &[f64], denominator_args: &[f64]) -> Self {
        Self {
            numerator_args: numerator_args.to_vec(),
            denominator_args: denominator_args.to_vec(),
        }
    }
}

/// Sum of ln G over numerators minus the same over denominators.
pub fn log_barnes_ratio(spec: &BarnesRatioSpec) -> Result<f64> {
    let mut acc = 0.0;
    for &a in &spec.numerator_args {
        acc += log_barnes_g(a)?;
    }
    for &b in &spec.denominator_args {
        acc -= log_barnes_g(b)?;
    }
    Ok(acc)
}
