//! Closed-form tau functions of three algebraic Painleve VI solutions, used as golden data.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::KernelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExampleId {
    /// Two-branch family with theta = (1, theta1, 0, theta1).
    Ex1 { theta1: f64 },
    /// Three-branch solution on the rational curve with s in (2, inf).
    Ex2,
    /// Four-branch solution with s in (0, 1).
    Ex3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicSolution {
    pub id: ExampleId,
    pub params: KernelParams,
    pub golden_c: f64,
    pub golden_kappa: f64,
    /// Correction exponent to use when extracting C from this solution.
    pub correction_exponent: f64,
    /// Fit window in 1 - t for that extraction.
    pub fit_window: (f64, f64),
}

impl AlgebraicSolution {
    pub fn ex1(theta1: f64) -> Result<Self> {
        if !(theta1.abs() < 0.5) {
            return domain(format!("theta1 must satisfy |theta1| < 1/2, got {theta1}"));
        }
        let a = (1.0 + 2.0 * theta1) / 4.0;
        let b = (1.0 - 2.0 * theta1) / 4.0;
        let e = (1.0 - 4.0 * theta1 * theta1) / 4.0;
        Ok(Self {
            id: ExampleId::Ex1 { theta1 },
            params: KernelParams::new(a, b, a, b)?,
            golden_c: 2f64.powf(e),
            golden_kappa: e / 32.0,
            correction_exponent: 0.5,
            fit_window: (1e-4, 1e-3),
        })
    }

    pub fn ex2() -> Self {
        Self {
            id: ExampleId::Ex2,
            params: KernelParams { z: 1.0 / 6.0, z_prime: 1.0 / 6.0, w: 7.0 / 6.0, w_prime: 0.5 },
            golden_c: 3f64.powf(15.0 / 8.0) * 2f64.powf(-17.0 / 6.0),
            golden_kappa: 16.0 / 19683.0,
            correction_exponent: 4.0 / 3.0,
            fit_window: (1e-3, 5e-2),
        }
    }

    pub fn ex3() -> Self {
        Self {
            id: ExampleId::Ex3,
            params: KernelParams { z: 5.0 / 12.0, z_prime: -1.0 / 12.0, w: 5.0 / 6.0, w_prime: -1.0 / 6.0 },
            golden_c: 2f64.powf(25.0 / 18.0) * 3f64.powf(-15.0 / 16.0),
            golden_kappa: -15.0 / 2048.0,
            correction_exponent: 4.0 / 3.0,
            fit_window: (1e-3, 5e-2),
        }
    }

    pub fn ln_tau(&self, t: f64) -> Result<f64> {
        match self.id {
            ExampleId::Ex1 { theta1 } => Ok(example1(theta1, t)?.ln()),
            ExampleId::Ex2 => example2_ln(t),
            ExampleId::Ex3 => example3_ln(t),
        }
    }

    pub fn tau(&self, t: f64) -> Result<f64> {
        Ok(self.ln_tau(t)?.exp())
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    Ok(())
}

/// [2 (1-t)^(1/4) / (1 + sqrt(1-t))]^((1 - 4 theta1^2)/4).
pub fn example1(theta1: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(theta1.abs() < 0.5) {
        return domain(format!("theta1 must satisfy |theta1| < 1/2, got {theta1}"));
    }
    let r = (-t).ln_1p();
    let u = (0.5 * r).exp();
    let ln = std::f64::consts::LN_2 + 0.25 * r - u.ln_1p();
    Ok(((1.0 - 4.0 * theta1 * theta1) / 4.0 * ln).exp())
}

/// d/dt ln of [`example1`], in closed form.
pub fn example1_log_derivative(theta1: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let u = (1.0 - t).sqrt();
    Ok((1.0 - 4.0 * theta1 * theta1) / 4.0 * (-0.25 / (1.0 - t) + 0.5 / (u * (1.0 + u))))
}

/// A monotone branch map t(s) known through ln t(s) and ln(1 - t(s)).
struct Branch {
    lo: f64,
    hi: f64,
    increasing: bool,
    ln_t: fn(f64) -> f64,
    d_ln_t: fn(f64) -> f64,
    ln_1mt: fn(f64) -> f64,
    d_ln_1mt: fn(f64) -> f64,
}

impl Branch {
    /// s with t(s) = t, by bisection followed by Newton polish.
    fn invert(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        // compare in the variable that keeps full relative precision
        let (f, df, target): (fn(f64) -> f64, fn(f64) -> f64, f64) = if t < 0.5 {
            (self.ln_t, self.d_ln_t, t.ln())
        } else {
            (self.ln_1mt, self.d_ln_1mt, (-t).ln_1p())
        };
        let sign = if (t < 0.5) == self.increasing { 1.0 } else { -1.0 };
        let g = |s: f64| sign * (f(s) - target);
        let (mut a, mut b) = (self.lo, self.hi);
        if !(g(a) < 0.0 && g(b) > 0.0) {
            return Err(Error::BranchInversionFailure(t));
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if g(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
            if (b - a) <= 1e-10 * m.abs() {
                break;
            }
        }
        let mut s = 0.5 * (a + b);
        for _ in 0..4 {
            let step = (f(s) - target) / df(s);
            let next = s - step;
            if !(next > a - (b - a) && next < b + (b - a)) {
                break;
            }
            s = next;
            if step.abs() <= 1e-15 * s.abs() {
                break;
            }
        }
        let residual = (f(s) - target).abs();
        if !(residual <= 1e-13 * (1.0 + target.abs())) {
            return Err(Error::BranchInversionFailure(t));
        }
        Ok(s)
    }
}

// parametrised by u = s - 2 so that small t keeps full precision
const EX2_BRANCH: Branch = Branch {
    lo: 1e-300,
    hi: 1e6,
    increasing: true,
    ln_t: |u| 2.0 * (u + 3.0).ln() + u.ln() - 2.0 * (u + 1.0).ln() - (u + 4.0).ln(),
    d_ln_t: |u| 2.0 / (u + 3.0) + 1.0 / u - 2.0 / (u + 1.0) - 1.0 / (u + 4.0),
    ln_1mt: |u| 4f64.ln() - 2.0 * (u + 1.0).ln() - (u + 4.0).ln(),
    d_ln_1mt: |u| -2.0 / (u + 1.0) - 1.0 / (u + 4.0),
};

const EX3_BRANCH: Branch = Branch {
    lo: 1e-9,
    hi: 1.0 - 1e-9,
    increasing: true,
    ln_t: |s| s.ln() + 3.0 * (2.0 - s).ln() - (3.0 - 2.0 * s).ln(),
    d_ln_t: |s| 1.0 / s - 3.0 / (2.0 - s) + 2.0 / (3.0 - 2.0 * s),
    ln_1mt: |s| 3.0 * (1.0 - s).ln() + (3.0 - s).ln() - (3.0 - 2.0 * s).ln(),
    d_ln_1mt: |s| -3.0 / (1.0 - s) - 1.0 / (3.0 - s) + 2.0 / (3.0 - 2.0 * s),
};

/// t(s) of the second example, on the branch s > 2.
pub fn example2_t_of_s(s: f64) -> f64 {
    (EX2_BRANCH.ln_t)(s - 2.0).exp()
}

/// t(s) of the third example.
pub fn example3_t_of_s(s: f64) -> f64 {
    (EX3_BRANCH.ln_t)(s).exp()
}

pub fn example2_ln(t: f64) -> Result<f64> {
    let u = EX2_BRANCH.invert(t)?;
    let s = u + 2.0;
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    Ok(15.0 / 8.0 * ln3 - 25.0 / 9.0 * ln2 + s.ln() + 8.0 / 9.0 * (s + 2.0).ln()
        - 15.0 / 8.0 * (s + 1.0).ln()
        - 7.0 / 72.0 * (s - 1.0).ln())
}

pub fn example3_ln(t: f64) -> Result<f64> {
    let s = EX3_BRANCH.invert(t)?;
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    Ok(5.0 / 12.0 * ln2 - 15.0 / 16.0 * ln3 + 15.0 / 16.0 * (3.0 - s).ln()
        - 5.0 / 12.0 * (2.0 - s).ln()
        - 5.0 / 48.0 * (1.0 - s).ln())
}

pub fn example2(t: f64) -> Result<f64> {
    Ok(example2_ln(t)?.exp())
}

pub fn example3(t: f64) -> Result<f64> {
    Ok(example3_ln(t)?.exp())
}
