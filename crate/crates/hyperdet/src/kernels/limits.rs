//! Whittaker and Macdonald kernels on (0, inf), the two scaling limits of the 2F1 kernel.

use std::f64::consts::PI;

use super::{IntegrableKernel, KernelPoint};
use crate::error::{domain, Result};
use crate::quadrature::Interval;
use crate::specfun::{bessel_k, is_nonpositive_integer, ln_gamma, ln_whittaker_w, sin_pi};

fn is_integer(x: f64) -> bool {
    x == x.round()
}

/// K_L(x, y) = lambda_L (A(x) B(y) - B(x) A(y)) / (x - y) with
/// A = x^(-1/2) W_{1/2-m, mu}(x), B = x^(-1/2) W_{-1/2-m, mu}(x),
/// m = (z+z'+2w)/2, mu = (z-z')/2.
#[derive(Debug, Clone)]
pub struct WhittakerKernel {
    pub z: f64,
    pub z_prime: f64,
    pub w: f64,
    kappa_a: f64,
    kappa_b: f64,
    mu: f64,
    half_ln_lambda: f64,
    lambda_sign: f64,
}

pub fn build_whittaker_kernel(z: f64, z_prime: f64, w: f64) -> Result<WhittakerKernel> {
    // integer w and z+z'+w only matter for the small-s expansion, which checks them itself
    for (name, v) in [("z", z), ("z'", z_prime)] {
        if !v.is_finite() || is_integer(v) {
            return domain(format!("Whittaker kernel needs non-integer {name}, got {v}"));
        }
    }
    if !w.is_finite() {
        return domain(format!("Whittaker kernel needs finite w, got {w}"));
    }
    if !(z + z_prime + 2.0 * w + 2.0 > 0.0) {
        return domain("Whittaker kernel needs z+z'+2w+2 > 0");
    }
    if is_nonpositive_integer(1.0 + z + w) || is_nonpositive_integer(1.0 + z_prime + w) {
        return domain("Whittaker prefactor has a gamma pole");
    }
    let s = sin_pi(z) * sin_pi(z_prime) / (PI * PI);
    let ln = s.abs().ln() + ln_gamma(1.0 + z + w)? + ln_gamma(1.0 + z_prime + w)?;
    let sign = s.signum()
        * crate::specfun::gamma_sign(1.0 + z + w)
        * crate::specfun::gamma_sign(1.0 + z_prime + w);
    let m = 0.5 * (z + z_prime + 2.0 * w);
    Ok(WhittakerKernel {
        z,
        z_prime,
        w,
        kappa_a: 0.5 - m,
        kappa_b: -0.5 - m,
        mu: 0.5 * (z - z_prime),
        half_ln_lambda: 0.5 * ln,
        lambda_sign: sign,
    })
}

impl WhittakerKernel {
    pub fn lambda(&self) -> f64 {
        self.lambda_sign * (2.0 * self.half_ln_lambda).exp()
    }
}

impl IntegrableKernel for WhittakerKernel {
    fn point(&self, x: f64) -> Result<KernelPoint> {
        if !(x > 0.0) {
            return domain(format!("Whittaker kernel is defined on (0, inf), got {x}"));
        }
        let wa = ln_whittaker_w(self.kappa_a, self.mu, x)?;
        let wb = ln_whittaker_w(self.kappa_b, self.mu, x)?;
        let shift = self.half_ln_lambda - 0.5 * x.ln();
        let f = wa.sign * (wa.ln_abs + shift).exp();
        let g = self.lambda_sign * wb.sign * (wb.ln_abs + shift).exp();
        // x W_k' = (k - x/2) W_k - (mu^2 - (k - 1/2)^2) W_{k-1}  (used at k = kappa_a)
        // x W_k' = (x/2 - k) W_k - W_{k+1}                      (used at k = kappa_b)
        let s = self.lambda_sign;
        let ka = self.kappa_a;
        let kb = self.kappa_b;
        let c = self.mu * self.mu - (ka - 0.5) * (ka - 0.5);
        let df = ((ka - 0.5 * x) * f - c * s * g) / x - 0.5 * f / x;
        let dg = ((0.5 * x - kb) * g - s * f) / x - 0.5 * g / x;
        Ok(KernelPoint { f, g, df, dg })
    }

    fn domain(&self) -> Interval {
        Interval::new(0.0, f64::INFINITY)
    }

    fn tail_power(&self) -> f64 {
        self.z + self.z_prime + 2.0 * self.w + 2.0
    }
}

/// K_M(x, y) = (sin pi z sin pi z' / pi^2) (A(x) B(y) - B(x) A(y)) / (x - y) with
/// A = 2 sqrt(x) K_{nu+1}(2 sqrt(x)), B = 2 K_nu(2 sqrt(x)), nu = z' - z.
#[derive(Debug, Clone)]
pub struct MacdonaldKernel {
    pub z: f64,
    pub z_prime: f64,
    nu: f64,
    root: f64,
    sign: f64,
}

pub fn build_macdonald_kernel(z: f64, z_prime: f64) -> Result<MacdonaldKernel> {
    for (name, v) in [("z", z), ("z'", z_prime)] {
        if !v.is_finite() || is_integer(v) {
            return domain(format!("Macdonald kernel needs non-integer {name}, got {v}"));
        }
    }
    let pre = sin_pi(z) * sin_pi(z_prime) / (PI * PI);
    Ok(MacdonaldKernel { z, z_prime, nu: z_prime - z, root: pre.abs().sqrt(), sign: pre.signum() })
}

impl MacdonaldKernel {
    pub fn prefactor(&self) -> f64 {
        self.sign * self.root * self.root
    }
}

impl IntegrableKernel for MacdonaldKernel {
    fn point(&self, x: f64) -> Result<KernelPoint> {
        if !(x > 0.0) {
            return domain(format!("Macdonald kernel is defined on (0, inf), got {x}"));
        }
        let sx = x.sqrt();
        let r = 2.0 * sx;
        let nu = self.nu;
        let k0 = bessel_k(nu, r)?;
        let kp = bessel_k(nu + 1.0, r)?;
        let km = bessel_k(nu - 1.0, r)?;
        let a = r * kp;
        let b = 2.0 * k0;
        let da = (-r * k0 - nu * kp) / sx;
        let db = 2.0 * (-km - nu / r * k0) / sx;
        let (q, s) = (self.root, self.sign);
        Ok(KernelPoint { f: q * a, g: s * q * b, df: q * da, dg: s * q * db })
    }

    fn domain(&self) -> Interval {
        Interval::new(0.0, f64::INFINITY)
    }
}
