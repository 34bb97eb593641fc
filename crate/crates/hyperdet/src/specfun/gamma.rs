//! Log-gamma, digamma, trigamma and gamma-bracket products on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_05;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// True when `x` is one of 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(pi x) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// cos(pi x) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x >= 10.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let mut corr = 0.0;
        let mut p = inv;
        for c in STIRLING {
            corr += c * p;
            p *= inv2;
        }
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr;
    }
    // Lanczos for Gamma(z + 1), z = x - 1
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// ln|Gamma(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::SingularGamma(x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= 0.5 {
        Ok(ln_gamma_positive(x))
    } else {
        let s = sin_pi(x).abs();
        Ok((PI / s).ln() - ln_gamma_positive(1.0 - x))
    }
}

/// Sign of Gamma(x) (zero at the poles).
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if is_nonpositive_integer(x) {
        0.0
    } else {
        sin_pi(x).signum()
    }
}

/// Gamma(x).
pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_sign(x) * ln_gamma(x)?.exp())
}

/// 1/Gamma(x), zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        // not a pole, so ln_gamma cannot fail
        gamma_sign(x) * (-ln_gamma(x).unwrap_or(f64::INFINITY)).exp()
    }
}

/// Digamma psi(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::SingularGamma(x));
    }
    if x < 0.5 {
        // psi(x) = psi(1 - x) - pi cot(pi x)
        let cot = cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut y = x;
    let mut acc = 0.0;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// Trigamma psi'(x).
pub fn trigamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::SingularGamma(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        return Ok(PI * PI / (s * s) - trigamma(1.0 - x)?);
    }
    let mut y = x;
    let mut acc = 0.0;
    while y < 10.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2
                            * (1.0 / 42.0
                                - inv2
                                    * (1.0 / 30.0
                                        - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    Ok(acc + series)
}

/// The bracket Gamma[a_1, ..., a_m / b_1, ..., b_n].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaRatioSpec {
    pub numerator_args: Vec<f64>,
    pub denominator_args: Vec<f64>,
}

impl GammaRatioSpec {
    pub fn new(numerator_args: &[f64], denominator_args: &[f64]) -> Self {
        Self {
            numerator_args: numerator_args.to_vec(),
            denominator_args: denominator_args.to_vec(),
        }
    }

    /// Signed value. A pole in the denominator makes the bracket vanish.
    pub fn value(&self) -> Result<f64> {
        if let Some(&x) = self.numerator_args.iter().find(|&&x| is_nonpositive_integer(x)) {
            return Err(Error::SingularGamma(x));
        }
        if self.denominator_args.iter().any(|&x| is_nonpositive_integer(x)) {
            return Ok(0.0);
        }
        let sign: f64 = self
            .numerator_args
            .iter()
            .chain(&self.denominator_args)
            .map(|&x| gamma_sign(x))
            .product();
        Ok(sign * log_gamma_ratio(self)?.exp())
    }
}

/// Sum of ln|Gamma| over numerators minus the same over denominators.
pub fn log_gamma_ratio(spec: &GammaRatioSpec) -> Result<f64> {
    let mut acc = 0.0;
    for &a in &spec.numerator_args {
        acc += ln_gamma(a)?;
    }
    for &b in &spec.denominator_args {
        acc -= ln_gamma(b)?;
    }
    Ok(acc)
}

/// Shorthand for `GammaRatioSpec::new(num, den).value()`.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    GammaRatioSpec::new(num, den).value()
}
