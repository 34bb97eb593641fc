//! Expansion coefficients at the singular endpoints, the conjectured connection
//! constants, and their numerical extraction.

mod extract;

pub use extract::{extract_constant, ExtractOptions, ExtractionReport};

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::kernels::KernelParams;
use crate::specfun::{digamma, gamma_ratio, log_barnes_ratio, sin_pi, BarnesRatioSpec};

/// |z + z'| below this selects the logarithmic expansion.
pub const LOG_CASE_THRESHOLD: f64 = 1e-8;
/// |z + z'| below this (but above the log threshold) converges slowly.
pub const SLOW_CONVERGENCE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    /// t -> 0 of D(t).
    T0,
    /// t -> 1 of D(t); the expansion variable is 1 - t.
    T1,
    /// s -> 0 of D_L(s).
    S0,
    /// xi -> 0 of D_M(xi).
    Xi0,
}

/// Leading behaviour C e^p [1 + ...] with e the distance to the endpoint.
///
/// Power case coefficient keys: `linear`, `a_plus`, `a_minus` with exponents 1, 1+S, 1-S
/// (S = z+z'). Log case keys: `a_prime`, `log_quad`, `log_lin` for
/// 1 + log_quad e (W^2 + 2W + 3) + log_lin e (W + 1), W = 1 - a' - ln e.
/// The t -> 0 model stores `kappa` with exponent 1+c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub endpoint: Endpoint,
    pub leading_exponent: f64,
    pub coefficients: BTreeMap<String, f64>,
    pub is_log_case: bool,
    /// z + z'.
    pub sum: f64,
    /// Set when 0 < |z+z'| is small enough that the power-case terms nearly cancel.
    pub slow_convergence: bool,
}

impl AsymptoticModel {
    pub fn coeff(&self, key: &str) -> f64 {
        self.coefficients.get(key).copied().unwrap_or(0.0)
    }

    /// Bracketed expansion without the constant C, at distance e from the endpoint.
    pub fn bracket(&self, e: f64) -> f64 {
        let lead = e.powf(self.leading_exponent);
        if self.endpoint == Endpoint::T0 {
            return 1.0 - self.coeff("kappa") * lead;
        }
        let inner = if self.is_log_case {
            let om = 1.0 - self.coeff("a_prime") - e.ln();
            1.0 + self.coeff("log_quad") * e * (om * om + 2.0 * om + 3.0) + self.coeff("log_lin") * e * (om + 1.0)
        } else {
            let s = self.sum;
            1.0 + self.coeff("linear") * e - self.coeff("a_plus") * e.powf(1.0 + s)
                - self.coeff("a_minus") * e.powf(1.0 - s)
        };
        lead * inner
    }

    /// Exponent of the first unmodelled correction.
    pub fn correction_exponent(&self) -> f64 {
        2.0 - 2.0 * self.sum
    }
}

/// kappa in D(t) = 1 - kappa t^(1+c) + O(t^(2+c)).
pub fn kappa(p: &KernelParams) -> Result<f64> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let c = p.c();
    let s = sin_pi(z) * sin_pi(zp) / (PI * PI);
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(s * gamma_ratio(&[1.0 + z + w, 1.0 + z + wp, 1.0 + zp + w, 1.0 + zp + wp], &[2.0 + c, 2.0 + c])?)
}

pub fn t0_expansion(p: &KernelParams) -> Result<AsymptoticModel> {
    let mut coefficients = BTreeMap::new();
    coefficients.insert("kappa".to_string(), kappa(p)?);
    Ok(AsymptoticModel {
        endpoint: Endpoint::T0,
        leading_exponent: 1.0 + p.c(),
        coefficients,
        is_log_case: false,
        sum: p.z + p.z_prime,
        slow_convergence: false,
    })
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

fn require_non_integer(items: &[(&str, f64)]) -> Result<()> {
    for (name, v) in items {
        if !v.is_finite() || is_integer(*v) {
            return domain(format!("{name} must not be an integer, got {v}"));
        }
    }
    Ok(())
}

fn require_sum_range(s: f64) -> Result<()> {
    if !(s > -LOG_CASE_THRESHOLD && s < 1.0) {
        return domain(format!("expansion needs 0 <= z+z' < 1, got {s}"));
    }
    Ok(())
}

/// Power-case pair a^(+/-) with optional w-type parameters entering as
/// 1+w+S/2(1 +/- 1) over w+S/2(1 -/+ 1).
fn a_pm(z: f64, zp: f64, ws: &[f64]) -> Result<(f64, f64)> {
    let s = z + zp;
    let mut num_p = vec![-s, -s, 1.0 + z, 1.0 + zp];
    let mut den_p = vec![2.0 + s, 2.0 + s, -z, -zp];
    let mut num_m = vec![s, s, 1.0 - z, 1.0 - zp];
    let mut den_m = vec![2.0 - s, 2.0 - s, z, zp];
    for &w in ws {
        num_p.push(1.0 + w + s);
        den_p.push(w);
        num_m.push(1.0 + w);
        den_m.push(w + s);
    }
    Ok((gamma_ratio(&num_p, &den_p)?, gamma_ratio(&num_m, &den_m)?))
}

fn build_model(
    endpoint: Endpoint,
    z: f64,
    zp: f64,
    ws: &[f64],
    linear: f64,
    log_terms: impl FnOnce() -> Result<(f64, f64, f64)>,
) -> Result<AsymptoticModel> {
    let s = z + zp;
    let mut coefficients = BTreeMap::new();
    let is_log_case = s.abs() < LOG_CASE_THRESHOLD;
    let leading_exponent = if is_log_case {
        let (a_prime, quad, lin) = log_terms()?;
        coefficients.insert("a_prime".into(), a_prime);
        coefficients.insert("log_quad".into(), quad);
        coefficients.insert("log_lin".into(), lin);
        -z * z
    } else {
        let (ap, am) = a_pm(z, zp, ws)?;
        coefficients.insert("linear".into(), linear);
        coefficients.insert("a_plus".into(), ap);
        coefficients.insert("a_minus".into(), am);
        z * zp
    };
    Ok(AsymptoticModel {
        endpoint,
        leading_exponent,
        coefficients,
        is_log_case,
        sum: if is_log_case { 0.0 } else { s },
        slow_convergence: !is_log_case && s.abs() < SLOW_CONVERGENCE_THRESHOLD,
    })
}

/// Expansion of D(t) as t -> 1.
pub fn t1_expansion(p: &KernelParams) -> Result<AsymptoticModel> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let s = z + zp;
    require_sum_range(s)?;
    require_non_integer(&[("z", z), ("z'", zp), ("w", w), ("w'", wp), ("z+z'+w", s + w), ("z+z'+w'", s + wp)])?;
    let linear = if s.abs() < LOG_CASE_THRESHOLD { 0.0 } else { z * zp * ((s + w) * (s + wp) + w * wp) / (s * s) };
    build_model(Endpoint::T1, z, zp, &[w, wp], linear, || {
        let a = digamma(1.0 + z)? + digamma(1.0 - z)? + digamma(1.0 + w)? + digamma(1.0 + wp)? - 4.0 * digamma(1.0)?;
        Ok((a, z * z * w * wp, z * z * (w + wp)))
    })
}

/// Coefficient of 1 - q ~ lambda_1 (1-t)^(1-z-z') as t -> 1.
pub fn lambda1(p: &KernelParams) -> Result<f64> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let s = z + zp;
    gamma_ratio(&[s, s, 1.0 - z, 1.0 - zp, w, 1.0 + wp], &[1.0 - s, 1.0 - s, z, zp, s + w, 1.0 + s + wp])
}

fn barnes(num: &[f64], den: &[f64]) -> Result<f64> {
    Ok(log_barnes_ratio(&BarnesRatioSpec::new(num, den))?.exp())
}

/// Conjectured constant C of the t -> 1 expansion.
pub fn conjectured_c(p: &KernelParams) -> Result<f64> {
    Ok(log_conjectured_c(p)?.exp())
}

pub fn log_conjectured_c(p: &KernelParams) -> Result<f64> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let s = z + zp;
    log_barnes_ratio(&BarnesRatioSpec::new(
        &[1.0 - z, 1.0 + z, 1.0 - zp, 1.0 + zp, 1.0 + w, 1.0 + wp, 1.0 + s + w, 1.0 + s + wp],
        &[1.0 - s, 1.0 + s, 1.0 + z + w, 1.0 + z + wp, 1.0 + zp + w, 1.0 + zp + wp],
    ))
}

/// The b = 0 specialization w' = w - z - z', written with its own bracket.
pub fn conjectured_c_b0(z: f64, zp: f64, w: f64) -> Result<f64> {
    let s = z + zp;
    barnes(
        &[1.0 - z, 1.0 + z, 1.0 - zp, 1.0 + zp, 1.0 + w, 1.0 + w, 1.0 + s + w, 1.0 - s + w],
        &[1.0 - s, 1.0 + s, 1.0 + z + w, 1.0 - z + w, 1.0 + zp + w, 1.0 - zp + w],
    )
}

/// Expansion of D_L(s) as s -> 0 and the conjectured C_L.
pub fn limit_constants_pv(z: f64, zp: f64, w: f64) -> Result<(AsymptoticModel, f64)> {
    let s = z + zp;
    require_sum_range(s)?;
    require_non_integer(&[("z", z), ("z'", zp), ("w", w), ("z+z'+w", s + w)])?;
    let linear = if s.abs() < LOG_CASE_THRESHOLD { 0.0 } else { z * zp * (s + 2.0 * w) / (s * s) };
    let model = build_model(Endpoint::S0, z, zp, &[w], linear, || {
        let a = digamma(1.0 + z)? + digamma(1.0 - z)? + digamma(1.0 + w)? - 4.0 * digamma(1.0)?;
        Ok((a, z * z * w, z * z))
    })?;
    let cl = barnes(
        &[1.0 - z, 1.0 + z, 1.0 - zp, 1.0 + zp, 1.0 + w, 1.0 + s + w],
        &[1.0 - s, 1.0 + s, 1.0 + z + w, 1.0 + zp + w],
    )?;
    Ok((model, cl))
}

/// Expansion of D_M(xi) as xi -> 0 and the conjectured C_M.
pub fn limit_constants_piii(z: f64, zp: f64) -> Result<(AsymptoticModel, f64)> {
    let s = z + zp;
    require_sum_range(s)?;
    require_non_integer(&[("z", z), ("z'", zp)])?;
    let linear = if s.abs() < LOG_CASE_THRESHOLD { 0.0 } else { 2.0 * z * zp / (s * s) };
    let model = build_model(Endpoint::Xi0, z, zp, &[], linear, || {
        let a = digamma(1.0 + z)? + digamma(1.0 - z)? - 4.0 * digamma(1.0)?;
        Ok((a, z * z, 0.0))
    })?;
    let cm = barnes(&[1.0 - z, 1.0 + z, 1.0 - zp, 1.0 + zp], &[1.0 - s, 1.0 + s])?;
    Ok((model, cm))
}

/// Tracy's exponents (alpha, beta) of the bosonic tau function at r -> 0.
pub fn tracy_beta(nu: f64) -> Result<(f64, f64)> {
    if !(nu >= 0.0 && nu < 1.0 / PI) {
        return domain(format!("nu must lie in [0, 1/pi), got {nu}"));
    }
    let sigma = 2.0 / PI * (PI * nu).asin();
    let alpha = 0.5 * sigma * sigma;
    let g = log_barnes_ratio(&BarnesRatioSpec::new(&[0.5, 0.5], &[0.5 * (1.0 + sigma), 0.5 * (1.0 - sigma)]))?;
    let beta = 3.0 * alpha * LN_2 + 0.5 * (1.0 - PI * PI * nu * nu).ln() - 2.0 * (0.5 * PI * sigma).cos().ln() - 2.0 * g;
    Ok((alpha, beta))
}

/// Both sides (as logarithms) of the Barnes identity
/// G[1+z,1+z,1-z,1-z / 1+2z,1-2z] = 2^(-4z^2) cos(pi z) G[1/2 x4 / 1/2+z,1/2+z,1/2-z,1/2-z].
pub fn barnes_identity_sides(z: f64) -> Result<(f64, f64)> {
    if !(z >= 0.0 && z < 0.5) {
        return domain(format!("identity is stated for z in [0, 1/2), got {z}"));
    }
    let lhs = log_barnes_ratio(&BarnesRatioSpec::new(&[1.0 + z, 1.0 + z, 1.0 - z, 1.0 - z], &[1.0 + 2.0 * z, 1.0 - 2.0 * z]))?;
    let rhs = -4.0 * z * z * LN_2
        + (PI * z).cos().ln()
        + log_barnes_ratio(&BarnesRatioSpec::new(&[0.5; 4], &[0.5 + z, 0.5 + z, 0.5 - z, 0.5 - z]))?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_vanishes_at_integer_z() {
        let p = KernelParams::new(1.0, 0.2, 0.4, 0.1).unwrap();
        assert_eq!(kappa(&p).unwrap(), 0.0);
    }

    #[test]
    fn lambda1_matches_a_minus_form() {
        let p = KernelParams::new(0.3, 0.2, 0.4, 0.1).unwrap();
        let m = t1_expansion(&p).unwrap();
        let s = 0.5;
        let alt = (1.0 - s) * (1.0 - s) / (p.w * (s + p.w_prime)) * m.coeff("a_minus");
        assert!((lambda1(&p).unwrap() - alt).abs() < 1e-12 * alt.abs());
    }

    #[test]
    fn tracy_beta_at_zero() {
        let (a, b) = tracy_beta(0.0).unwrap();
        assert_eq!(a, 0.0);
        assert!(b.abs() < 1e-14);
    }

    #[test]
    fn log_case_selected() {
        let p = KernelParams::new(0.3, -0.3, 0.6, 0.2).unwrap();
        let m = t1_expansion(&p).unwrap();
        assert!(m.is_log_case);
        assert!((m.leading_exponent + 0.09).abs() < 1e-15);
    }
}
