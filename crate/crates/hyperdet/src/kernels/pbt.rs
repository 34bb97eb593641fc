//! Parameter map from the Palmer-Beatty-Tracy tau function to the 2F1 kernel.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::KernelParams;
use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_ratio, sin_pi};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PBTParams {
    pub mu: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub b: f64,
}

impl PBTParams {
    pub fn check(&self) -> Result<()> {
        let in_range = |v: f64| v > -1.0 && v < 0.0;
        if !(self.mu > 0.0) || !in_range(self.nu1) || !in_range(self.nu2) || !self.b.is_finite() {
            return domain(format!("PBT parameters need mu > 0 and -1 < nu1, nu2 < 0, got {self:?}"));
        }
        Ok(())
    }
}

/// Candidate value of z + z' for a branch index.
///
/// cos pi(z+z') = cos pi(nu1+nu2) fixes z+z' up to sign and 2Z. With s0 the
/// representative in (0, 1], branches 0, 1, 2, ... enumerate the non-negative
/// candidates s0, 2-s0, 2+s0, 4-s0, ... in increasing order and branches -1, -2, ...
/// their negatives.
fn branch_sum(p: &PBTParams, branch: i64) -> f64 {
    let sigma = p.nu1 + p.nu2;
    let s0 = (-sigma).min(sigma + 2.0);
    let nonneg = |j: i64| {
        if j % 2 == 0 {
            s0 + j as f64
        } else {
            (j + 1) as f64 - s0
        }
    };
    if branch >= 0 {
        nonneg(branch)
    } else {
        -nonneg(-branch - 1)
    }
}

pub fn map_pbt_params(p: &PBTParams, branch: i64) -> Result<KernelParams> {
    p.check()?;
    let s = branch_sum(p, branch);
    let d = p.nu1 - p.nu2;
    let e = 2.0 + p.nu1 + p.nu2 - 2.0 * p.b;
    let ww = 2.0 * p.mu - s;
    KernelParams::new(0.5 * (s + d), 0.5 * (s - d), 0.5 * (ww + e), 0.5 * (ww - e))
        .map_err(|err| Error::NoAdmissibleBranch(format!("branch {branch} (z+z' = {s}): {err}")))
}

pub fn kappa_pbt(p: &PBTParams) -> Result<f64> {
    p.check()?;
    let PBTParams { mu, nu1, nu2, b } = *p;
    let pre = sin_pi(nu1) * sin_pi(nu2) / (PI * PI);
    Ok(pre
        * gamma_ratio(
            &[2.0 + mu + nu1 - b, mu - nu1 + b, 2.0 + mu + nu2 - b, mu - nu2 + b],
            &[2.0 + 2.0 * mu, 2.0 + 2.0 * mu],
        )?)
}

/// Painleve VI parameters of the PBT tau function, ordered (theta_0, theta_1, theta_t, theta_inf).
pub fn pbt_theta(p: &PBTParams) -> [f64; 4] {
    [1.0 + p.nu1 + p.nu2 - 2.0 * p.b, 0.0, 2.0 * p.mu, 1.0 + p.nu1 - p.nu2]
}

/// Parameter relabeling induced by s -> 1-t, u -> (1-t)/(1-q).
pub fn backlund_relabel(theta: [f64; 4]) -> [f64; 4] {
    [theta[2], theta[3] - 1.0, theta[1], theta[0] + 1.0]
}
