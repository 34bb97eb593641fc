//! Modified Bessel function of the second kind, real order and positive argument.

use crate::error::{domain, Error, Result};

const MAX_NODES: usize = 200_000;

/// e^x K_nu(x) from the trapezoid rule on int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt.
///
/// The integrand is entire and decays double-exponentially, so the trapezoid rule
/// converges geometrically in 1/h.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("K_nu needs x > 0, got {x}"));
    }
    let h = (0.5 / x.sqrt()).min(0.1);
    trapezoid_scaled(nu, x, h)
}

pub(crate) fn trapezoid_scaled(nu: f64, x: f64, h: f64) -> Result<f64> {
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    for k in 1..MAX_NODES {
        let v = f(k as f64 * h);
        sum += v;
        if v < 1e-18 * sum && x * ((k as f64 * h).cosh() - 1.0) > nu.abs() * k as f64 * h {
            return Ok(sum * h);
        }
    }
    Err(Error::NonConvergence(format!("K_{nu}({x}) quadrature did not terminate")))
}

/// K_nu(x).
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x)? * (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_order_closed_form() {
        for x in [0.05, 0.7, 2.0, 30.0] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let got = bessel_k(0.5, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn even_in_order() {
        assert_eq!(bessel_k(0.37, 1.1).unwrap(), bessel_k(-0.37, 1.1).unwrap());
    }

    #[test]
    fn recurrence() {
        // K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
        let (nu, x) = (0.8, 0.3);
        let lhs = bessel_k(nu + 1.0, x).unwrap();
        let rhs = bessel_k(nu - 1.0, x).unwrap() + 2.0 * nu / x * bessel_k(nu, x).unwrap();
        assert!(((lhs - rhs) / lhs).abs() < 1e-13);
    }
}
