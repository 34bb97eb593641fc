//! The hypergeometric (2F1) kernel on (0, 1).
//!
//! With a = z+w', b = z'+w', c = z+z'+w+w' and X = x/(x-1),
//!   A(x) = x^(c/2) (1-x)^(-(a+b)/2) 2F1(a, b; c; X),
//!   B(x) = x^(1+c/2) (1-x)^(-1-(a+b)/2) 2F1(1+a, 1+b; 2+c; X),
//!   K(x, y) = lambda (A(x) B(y) - B(x) A(y)) / (y - x).
//! A Pfaff transformation turns both into 2F1 at x itself, which is what is evaluated.

use std::f64::consts::PI;

use super::{IntegrableKernel, KernelParams, KernelPoint};
use crate::error::{domain, Error, Result};
use crate::quadrature::Interval;
use crate::specfun::{gamma_sign, hyp2f1_unit, ln_gamma, sin_pi};

/// Below this |w - w'| the Tracy-Widom normalization is refused.
pub const DEGENERACY_GAP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct F21Kernel {
    pub params: KernelParams,
    a: f64,
    b: f64,
    c: f64,
    ln_abs_lambda: f64,
    lambda_sign: f64,
    tw: Option<TwNormalization>,
}

/// Coefficients of the linear system x(1-x)(phi, psi)' = (A0 + A1 x)(phi, psi) with
/// A0 = [[alpha0, beta0], [-gamma0, -alpha0]], A1 = diag(alpha1, -alpha1), and the
/// map (A, B) -> (phi, psi) that brings the kernel to this form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwNormalization {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta0: f64,
    pub gamma0: f64,
    /// Positive scale k of the pair; k^2 = |lambda (1+c) / (w - w')|.
    pub k: f64,
    /// Sign of -lambda (1+c) / (w - w').
    pub eps: f64,
    pub r1: f64,
    pub r2: f64,
}

impl TwNormalization {
    /// (phi, psi) from (A, B).
    pub fn phi_psi(&self, a: f64, b: f64) -> (f64, f64) {
        (self.k * (a + self.r1 * b), -self.eps * self.k * (a + self.r2 * b))
    }

    /// Right-hand side of x(1-x)(phi, psi)'.
    pub fn system(&self, x: f64, phi: f64, psi: f64) -> (f64, f64) {
        let al = self.alpha0 + self.alpha1 * x;
        (al * phi + self.beta0 * psi, -self.gamma0 * phi - al * psi)
    }

    /// Value of the first integral I_2 for the regular solution, alpha0^2 - beta0 gamma0.
    pub fn i2_regular(&self) -> f64 {
        self.alpha0 * self.alpha0 - self.beta0 * self.gamma0
    }
}

/// ln|lambda| and its sign.
fn lambda_parts(p: &KernelParams) -> Result<(f64, f64)> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let c = p.c();
    let s = sin_pi(z) * sin_pi(zp) / (PI * PI);
    let args = [1.0 + z + w, 1.0 + z + wp, 1.0 + zp + w, 1.0 + zp + wp];
    let mut ln = 0.0;
    let mut sign = s.signum();
    for x in args {
        ln += ln_gamma(x)?;
        sign *= gamma_sign(x);
    }
    ln -= ln_gamma(1.0 + c)? + ln_gamma(2.0 + c)?;
    if s == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok((ln + s.abs().ln(), sign))
}

/// The prefactor lambda of the kernel.
pub fn f21_lambda(p: &KernelParams) -> Result<f64> {
    let (ln, sign) = lambda_parts(p)?;
    Ok(if sign == 0.0 { 0.0 } else { sign * ln.exp() })
}

impl F21Kernel {
    /// Kernel without the Tracy-Widom normalization; valid also for w = w'.
    pub fn direct(p: &KernelParams) -> Result<Self> {
        p.check()?;
        let (ln_abs_lambda, lambda_sign) = lambda_parts(p)?;
        Ok(Self {
            params: *p,
            a: p.z + p.w_prime,
            b: p.z_prime + p.w_prime,
            c: p.c(),
            ln_abs_lambda,
            lambda_sign,
            tw: None,
        })
    }

    pub fn lambda(&self) -> f64 {
        if self.lambda_sign == 0.0 {
            0.0
        } else {
            self.lambda_sign * self.ln_abs_lambda.exp()
        }
    }

    pub fn tw(&self) -> Option<&TwNormalization> {
        self.tw.as_ref()
    }

    /// A, B and their derivatives at x in (0, 1).
    pub fn ab(&self, x: f64) -> Result<[f64; 4]> {
        if !(x > 0.0 && x < 1.0) {
            return domain(format!("2F1 kernel is defined on (0, 1), got x = {x}"));
        }
        let (a, b, c) = (self.a, self.b, self.c);
        let common = (0.5 * c * x.ln() + 0.5 * (a - b) * (-x).ln_1p()).exp();
        let fa = hyp2f1_unit(a, c - b, c, x)?;
        let fb = hyp2f1_unit(1.0 + a, 1.0 + c - b, 2.0 + c, x)?;
        let va = common * fa;
        let vb = common * x * fb;
        // x(1-x) A' = m(x) A - n x B,  x(1-x) B' = (1+c) x A - m(x) B
        let m = 0.5 * c + x * (0.5 * (a + b - c) - a * b / c);
        let n = a * b * (c - a) * (c - b) / (c * c * (1.0 + c));
        let den = x * (1.0 - x);
        let da = (m * va - n * x * vb) / den;
        let db = ((1.0 + c) * x * va - m * vb) / den;
        Ok([va, vb, da, db])
    }

    /// (phi, psi) of the Tracy-Widom pair at x.
    pub fn phi_psi(&self, x: f64) -> Result<(f64, f64)> {
        let tw = self.tw.as_ref().ok_or_else(|| {
            Error::DegenerateParams("Tracy-Widom pair is unavailable for w = w'".into())
        })?;
        let [a, b, _, _] = self.ab(x)?;
        Ok(tw.phi_psi(a, b))
    }

    /// Kernel value from the Tracy-Widom pair, used to cross-check the normalization.
    pub fn eval_tw(&self, x: f64, y: f64) -> Result<f64> {
        let (px, sx) = self.phi_psi(x)?;
        let (py, sy) = self.phi_psi(y)?;
        Ok((px * sy - sx * py) / (x - y))
    }
}

/// Hypergeometric kernel with its Tracy-Widom normalization.
pub fn build_f21_kernel(p: &KernelParams) -> Result<F21Kernel> {
    let mut k = F21Kernel::direct(p)?;
    let gap = p.w - p.w_prime;
    if gap.abs() <= DEGENERACY_GAP {
        return Err(Error::DegenerateParams(format!(
            "|w - w'| = {:.3e} leaves the leading coefficient non-diagonalizable",
            gap.abs()
        )));
    }
    let (a, b, c) = (k.a, k.b, k.c);
    let s = c - a - b; // = w - w'
    let signed = -k.lambda() * (1.0 + c) / s;
    let eps = if signed < 0.0 { -1.0 } else { 1.0 };
    k.tw = Some(TwNormalization {
        alpha0: -0.5 * c - a * b / s,
        alpha1: 0.5 * s,
        beta0: -eps * (c - a) * (c - b) / s,
        gamma0: -eps * a * b / s,
        k: signed.abs().sqrt(),
        eps,
        r1: (c - a) * (c - b) / (c * (1.0 + c)),
        r2: a * b / (c * (1.0 + c)),
    });
    Ok(k)
}

impl IntegrableKernel for F21Kernel {
    fn point(&self, x: f64) -> Result<KernelPoint> {
        if self.lambda_sign == 0.0 {
            return Ok(KernelPoint::ZERO);
        }
        let [a, b, da, db] = self.ab(x)?;
        // K = lambda (A(x)B(y) - B(x)A(y)) / (y - x): f = |lambda|^(1/2) B, g = sign * |lambda|^(1/2) A
        let r = (0.5 * self.ln_abs_lambda).exp();
        let s = self.lambda_sign;
        Ok(KernelPoint { f: r * b, g: s * r * a, df: r * db, dg: s * r * da })
    }

    fn domain(&self) -> Interval {
        Interval::new(0.0, 1.0)
    }
}
