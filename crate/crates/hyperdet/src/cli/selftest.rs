//! Golden checks run by `hyperdet selftest`. Each check reports a measured error and its tolerance.

use std::f64::consts::{LN_2, PI};

use super::{Report, Table};
use crate::asymptotics::{
    barnes_identity_sides, conjectured_c, extract_constant, kappa, limit_constants_piii, t1_expansion, tracy_beta,
    ExtractOptions,
};
use crate::error::Result;
use crate::fredholm::{fredholm_det_finite, fredholm_det_semiinfinite, Decay};
use crate::kernels::{build_f21_kernel, build_macdonald_kernel, KernelParams};
use crate::painleve::{integrate_tau_pvi, log_endpoint_grid, log_linear_grid, sigma_form_residual, sigma_m_curve, SigmaFamily};
use crate::reference::AlgebraicSolution;
use crate::specfun::{log_barnes_g, GLAISHER};

struct Check {
    name: &'static str,
    tolerance: f64,
    measure: fn() -> Result<f64>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn set1() -> KernelParams {
    KernelParams { z: 0.3, z_prime: 0.2, w: 0.4, w_prime: 0.1 }
}

const CHECKS: &[Check] = &[
    Check {
        name: "barnes_g_half",
        tolerance: 1e-10,
        measure: || {
            let exact = LN_2 / 24.0 + 0.125 - 0.25 * PI.ln() - 1.5 * GLAISHER.ln();
            Ok((log_barnes_g(0.5)? - exact).abs())
        },
    },
    Check {
        name: "barnes_identity_z0.3",
        tolerance: 1e-10,
        measure: || {
            let (l, r) = barnes_identity_sides(0.3)?;
            Ok((l - r).abs())
        },
    },
    Check {
        name: "tracy_beta_vs_cm_z0.3",
        tolerance: 1e-10,
        measure: || {
            let z = 0.3;
            let (_, beta) = tracy_beta((PI * z).sin() / PI)?;
            let (_, cm) = limit_constants_piii(z, z)?;
            Ok(rel((2.0 * z * z * LN_2 - beta).exp(), cm))
        },
    },
    Check {
        name: "kappa_ex2",
        tolerance: 1e-12,
        measure: || {
            let s = AlgebraicSolution::ex2();
            Ok(rel(kappa(&s.params)?, s.golden_kappa))
        },
    },
    Check {
        name: "kappa_ex3",
        tolerance: 1e-12,
        measure: || {
            let s = AlgebraicSolution::ex3();
            Ok(rel(kappa(&s.params)?, s.golden_kappa))
        },
    },
    Check {
        name: "conjectured_c_ex1",
        tolerance: 1e-10,
        measure: || {
            let s = AlgebraicSolution::ex1(0.25)?;
            Ok(rel(conjectured_c(&s.params)?, s.golden_c))
        },
    },
    Check {
        name: "conjectured_c_ex2",
        tolerance: 1e-10,
        measure: || {
            let s = AlgebraicSolution::ex2();
            Ok(rel(conjectured_c(&s.params)?, s.golden_c))
        },
    },
    Check {
        name: "conjectured_c_ex3",
        tolerance: 1e-10,
        measure: || {
            let s = AlgebraicSolution::ex3();
            Ok(rel(conjectured_c(&s.params)?, s.golden_c))
        },
    },
    Check {
        name: "fredholm_vs_ode_t0.5",
        tolerance: 1e-6,
        measure: || {
            let p = set1();
            let k = build_f21_kernel(&p)?;
            let d = fredholm_det_finite(&k, 0.5, 32, p.c())?;
            let curve = integrate_tau_pvi(&p, 1e-3, &[0.5], 1e-12)?;
            Ok((d.value - curve.ln_d[0].exp()).abs())
        },
    },
    Check {
        name: "first_integral_drift",
        tolerance: 1e-8,
        measure: || {
            let grid = log_endpoint_grid(0.01, 0.99, 50);
            let curve = integrate_tau_pvi(&set1(), 1e-3, &grid, 1e-12)?;
            Ok(curve.i1_drift.iter().chain(&curve.i2_drift).fold(0.0, |m, v| m.max(v.abs())))
        },
    },
    Check {
        name: "ex2_ln_tau_t0.5",
        tolerance: 1e-6,
        measure: || {
            let s = AlgebraicSolution::ex2();
            let curve = integrate_tau_pvi(&s.params, 1e-3, &[0.5], 1e-12)?;
            Ok((curve.ln_d[0] - s.ln_tau(0.5)?).abs())
        },
    },
    Check {
        name: "constant_extraction_set1",
        tolerance: 1e-3,
        measure: || {
            let p = set1();
            let grid = log_endpoint_grid(0.95, 0.999, 41);
            let curve = integrate_tau_pvi(&p, 1e-3, &grid, 1e-12)?;
            let samples: Vec<(f64, f64)> = grid.iter().zip(&curve.ln_d).map(|(&t, &l)| (t, l.exp())).collect();
            let r = extract_constant(&samples, &t1_expansion(&p)?, &ExtractOptions::new(conjectured_c(&p)?))?;
            Ok(r.rel_error)
        },
    },
    Check {
        name: "macdonald_constant",
        tolerance: 1e-3,
        measure: || {
            let (z, zp) = (0.3, 0.2);
            let k = build_macdonald_kernel(z, zp)?;
            let (model, cm) = limit_constants_piii(z, zp)?;
            let samples = (0..41)
                .map(|i| {
                    let e = 1e-3 * 50f64.powf(i as f64 / 40.0);
                    fredholm_det_semiinfinite(&k, e, 64, Decay::ExpSqrt).map(|d| (e, d.value))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(extract_constant(&samples, &model, &ExtractOptions::new(cm))?.rel_error)
        },
    },
    Check {
        name: "piii_sigma_residual",
        tolerance: 1e-4,
        measure: || {
            let (z, zp) = (0.3, 0.2);
            let k = build_macdonald_kernel(z, zp)?;
            let curve = sigma_m_curve(&k, &log_linear_grid(0.2, 10.0, 201), 60)?;
            Ok(sigma_form_residual(&curve, SigmaFamily::Piii { z, z_prime: zp })?.max)
        },
    },
];

pub(super) fn run() -> Report {
    let mut table = Table::new(&["check", "value", "tolerance", "pass"]);
    let mut failures = Vec::new();
    for c in CHECKS {
        let value = (c.measure)().unwrap_or(f64::NAN);
        let pass = value <= c.tolerance;
        if !pass {
            failures.push(c.name);
        }
        table.push(vec![c.name.into(), value.into(), c.tolerance.into(), pass.into()]);
    }
    let failed = (!failures.is_empty()).then(|| failures.join(", "));
    Report { table, failed, partial: None }
}
