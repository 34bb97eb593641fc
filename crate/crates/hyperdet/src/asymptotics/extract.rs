//! Least-squares extraction of the connection constant from samples near an endpoint.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{AsymptoticModel, Endpoint};
use crate::error::{domain, Error, Result};

/// Condition number of the design matrix above which the fit is refused.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractOptions {
    /// Window [lo, hi] in the distance e to the endpoint.
    pub window: (f64, f64),
    /// Correction exponent; defaults to the model's 2 - 2(z+z').
    pub fit_exponent: Option<f64>,
    /// Conjectured value to compare against.
    pub conjectured: f64,
}

impl ExtractOptions {
    pub fn new(conjectured: f64) -> Self {
        Self { window: (1e-3, 5e-2), fit_exponent: None, conjectured }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub extracted_c: f64,
    pub conjectured_c: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub fit_window: (f64, f64),
    /// One-sigma uncertainty of C from the fit covariance.
    pub fit_error: f64,
    /// Fitted coefficient e1 of the correction C e1 e^p.
    pub correction_coeff: f64,
    pub fit_exponent: f64,
    /// Slope of ln|E - C| against ln e, the observed decay of the residual.
    pub residual_decay_rate: f64,
    pub samples_used: usize,
    pub condition_number: f64,
}

/// Fit E(e) = D/bracket = C (1 + e1 e^p) over the samples in the window.
///
/// Samples are (x, D) where x is t for the t -> 1 endpoint and the distance itself otherwise.
pub fn extract_constant(samples: &[(f64, f64)], model: &AsymptoticModel, opts: &ExtractOptions) -> Result<ExtractionReport> {
    let (lo, hi) = opts.window;
    if !(lo > 0.0 && hi > lo) {
        return domain(format!("fit window must satisfy 0 < lo < hi, got ({lo}, {hi})"));
    }
    let p = opts.fit_exponent.unwrap_or_else(|| model.correction_exponent());
    let mut es = Vec::new();
    let mut ys = Vec::new();
    for &(x, d) in samples {
        let e = match model.endpoint {
            Endpoint::T1 => 1.0 - x,
            Endpoint::S0 | Endpoint::Xi0 => x,
            Endpoint::T0 => return domain("extraction works at the t -> 1, s -> 0 and xi -> 0 endpoints"),
        };
        // half-ulp slack so grid points computed as 1 - e stay inside
        if e >= lo * (1.0 - 1e-9) && e <= hi * (1.0 + 1e-9) && d.is_finite() {
            es.push(e);
            ys.push(d / model.bracket(e));
        }
    }
    let n = es.len();
    if n < 2 {
        return Err(Error::InsufficientGrid(format!("{n} samples inside the fit window")));
    }
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { es[i].powf(p) });
    let sv = x.clone().svd(true, true);
    let smax = sv.singular_values.max();
    let smin = sv.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditionedFit(cond));
    }
    let y = DVector::from_vec(ys.clone());
    let beta = sv.solve(&y, 0.0).map_err(|e| Error::NonConvergence(e.to_string()))?;
    let c = beta[0];
    let resid = &y - &x * &beta;
    let fit_error = if n > 2 {
        let s2 = resid.norm_squared() / (n - 2) as f64;
        let xtx = x.transpose() * &x;
        xtx.try_inverse().map(|inv| (s2 * inv[(0, 0)]).sqrt()).unwrap_or(f64::INFINITY)
    } else {
        0.0
    };
    // slope of ln|E - C| versus ln e
    let pts: Vec<(f64, f64)> = es
        .iter()
        .zip(&ys)
        .filter(|(_, &v)| (v - c).abs() > 0.0)
        .map(|(&e, &v)| (e.ln(), (v - c).abs().ln()))
        .collect();
    let residual_decay_rate = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx > 0.0 { sxy / sxx } else { f64::NAN }
    } else {
        f64::NAN
    };
    let abs_error = (c - opts.conjectured).abs();
    Ok(ExtractionReport {
        extracted_c: c,
        conjectured_c: opts.conjectured,
        abs_error,
        rel_error: abs_error / opts.conjectured.abs(),
        fit_window: (lo, hi),
        fit_error,
        correction_coeff: if c != 0.0 { beta[1] / c } else { f64::NAN },
        fit_exponent: p,
        residual_decay_rate,
        samples_used: n,
        condition_number: cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::t1_expansion;
    use crate::kernels::KernelParams;

    #[test]
    fn synthetic_model_recovers_one() {
        let p = KernelParams::new(0.3, 0.2, 0.4, 0.1).unwrap();
        let m = t1_expansion(&p).unwrap();
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let e = 1e-3 * (50f64).powf(i as f64 / 39.0);
                (1.0 - e, m.bracket(e))
            })
            .collect();
        let r = extract_constant(&samples, &m, &ExtractOptions::new(1.0)).unwrap();
        assert!(r.abs_error < 1e-10, "{r:?}");
    }
}
