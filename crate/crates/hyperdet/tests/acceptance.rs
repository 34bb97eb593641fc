//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperdet::asymptotics::{
    barnes_identity_sides, conjectured_c, extract_constant, kappa, limit_constants_piii, limit_constants_pv,
    t1_expansion, tracy_beta, ExtractOptions,
};
use hyperdet::fredholm::{fredholm_det_finite, fredholm_det_semiinfinite, Decay};
use hyperdet::kernels::{
    apply_symmetry, build_f21_kernel, build_macdonald_kernel, build_whittaker_kernel, kappa_pbt, map_pbt_params,
    F21Kernel, IntegrableKernel, KernelParams, PBTParams, Symmetry,
};
use hyperdet::painleve::{
    integrate_tau, integrate_tau_pvi, log_endpoint_grid, log_linear_grid, sigma_form_residual, sigma_l_curve,
    sigma_m_curve, SigmaFamily,
};
use hyperdet::reference::AlgebraicSolution;
use hyperdet::specfun::{ln_gamma, log_barnes_g, trigamma, CATALAN, GLAISHER};
use hyperdet::Result;

const GENERIC: [(f64, f64, f64, f64); 3] = [(0.3, 0.2, 0.4, 0.1), (0.45, 0.1, 0.7, -0.2), (0.25, 0.25, 0.9, 0.35)];
const LOG_CASE: (f64, f64, f64, f64) = (0.3, -0.3, 0.6, 0.2);

fn params(v: (f64, f64, f64, f64)) -> KernelParams {
    KernelParams::new(v.0, v.1, v.2, v.3).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, value: f64, tol: f64) {
        let ok = value <= tol;
        self.pass &= ok;
        self.lines.push(format!("{} {}: {value:.3e} (tol {tol:.0e})", if ok { "ok  " } else { "FAIL" }, label.into()));
    }

    fn info(&mut self, s: impl Into<String>) {
        self.lines.push(format!("info {}", s.into()));
    }
}

fn crit1() -> Result<Outcome> {
    let mut o = Outcome::new();
    let la = GLAISHER.ln();
    let s3 = 3f64.sqrt();
    let third = |x: f64, k: f64| {
        3f64.ln() / 72.0 + PI / (18.0 * s3) - k * ln_gamma(x).unwrap() - 4.0 / 3.0 * la
            - trigamma(x).unwrap() / (12.0 * PI * s3)
            + 1.0 / 9.0
    };
    let sixth = |x: f64, k: f64| {
        -(12f64.ln()) / 144.0 + PI / (20.0 * s3) - k * ln_gamma(x).unwrap() - 5.0 / 6.0 * la
            - trigamma(x).unwrap() / (40.0 * PI * s3)
            + 5.0 / 72.0
    };
    let specials = [
        (0.5, LN_2 / 24.0 - PI.ln() / 4.0 - 1.5 * la + 0.125),
        (1.0 / 3.0, third(1.0 / 3.0, 2.0 / 3.0)),
        (2.0 / 3.0, third(2.0 / 3.0, 1.0 / 3.0)),
        (1.0 / 6.0, sixth(1.0 / 6.0, 5.0 / 6.0)),
        (5.0 / 6.0, sixth(5.0 / 6.0, 1.0 / 6.0)),
        (0.25, -0.75 * ln_gamma(0.25)? - 9.0 / 8.0 * la + 3.0 / 32.0 - CATALAN / (4.0 * PI)),
        (0.75, -0.25 * ln_gamma(0.75)? - 9.0 / 8.0 * la + 3.0 / 32.0 + CATALAN / (4.0 * PI)),
    ];
    let mut worst = 0.0f64;
    for (x, want) in specials {
        worst = worst.max((log_barnes_g(x)? - want).abs());
    }
    o.check("Barnes G special values", worst, 1e-10);

    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let nf = n as f64;
        for x in [0.3, 0.4, 0.9, 1.7] {
            let mut rhs = (nf * nf * x * x / 2.0 - nf * x) * nf.ln() - (nf - 1.0) * (nf * x - 1.0) / 2.0 * (2.0 * PI).ln()
                + 5.0 / 12.0 * nf.ln()
                - (nf * nf - 1.0) / 12.0
                + (nf * nf - 1.0) * la;
            for j in 0..n {
                for k in 0..n {
                    rhs += log_barnes_g(x + (j + k) as f64 / nf)?;
                }
            }
            worst = worst.max((rhs - log_barnes_g(nf * x)?).abs());
        }
    }
    o.check("multiplication formula n=2,3 (with ln n)", worst, 1e-10);

    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let nf = n as f64;
        for x in [0.3, 0.7, 1.9] {
            let mut rhs = -(nf - 1.0) / 2.0 * (2.0 * PI).ln() + (nf * x - 0.5) * nf.ln();
            for k in 0..n {
                rhs += ln_gamma(x + k as f64 / nf)?;
            }
            worst = worst.max((ln_gamma(nf * x)? - rhs).abs());
        }
    }
    for x in [0.1, 1.0 / 3.0, 0.5, 0.8] {
        let rhs = PI * PI / (PI * x).sin().powi(2);
        worst = worst.max(((trigamma(x)? + trigamma(1.0 - x)?) - rhs).abs() / rhs);
    }
    o.check("gamma multiplication and trigamma reflection", worst, 1e-12);
    Ok(o)
}

fn crit2() -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = [0.2, 0.5, 0.8];
    for (i, v) in GENERIC.iter().enumerate() {
        let p = params(*v);
        let k = build_f21_kernel(&p)?;
        let curve = integrate_tau_pvi(&p, 1e-3, &grid, 1e-12)?;
        let mut worst = 0.0f64;
        for (j, &t) in grid.iter().enumerate() {
            let d = fredholm_det_finite(&k, t, 32, p.c())?.value;
            worst = worst.max((d - curve.ln_d[j].exp()).abs());
        }
        o.check(format!("set {} |D_Fredholm - D_ODE|", i + 1), worst, 1e-6);
    }
    Ok(o)
}

fn small_t_ratio(p: &KernelParams, k: &F21Kernel, t: f64) -> Result<f64> {
    let d = fredholm_det_finite(k, t, 32, p.c())?;
    Ok(-d.log_value.exp_m1() / t.powf(1.0 + p.c()) / kappa(p)?)
}

fn crit3() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (i, v) in GENERIC.iter().enumerate() {
        let p = params(*v);
        let k = build_f21_kernel(&p)?;
        let r1 = small_t_ratio(&p, &k, 1e-3)?;
        o.check(format!("set {} (1-D)/(kappa t^(1+c)) - 1 at t=1e-3", i + 1), (r1 - 1.0).abs(), 1e-3);
        let r2 = small_t_ratio(&p, &k, 5e-4)?;
        let r3 = small_t_ratio(&p, &k, 1e-4)?;
        o.info(format!(
            "set {}: ratio-1 at 5e-4 {:.3e}, at 1e-4 {:.3e}, linear Richardson from 1e-3/5e-4 {:.3e}",
            i + 1,
            r2 - 1.0,
            r3 - 1.0,
            2.0 * r2 - r1 - 1.0
        ));
    }
    Ok(o)
}

fn extract_golden(sol: &AlgebraicSolution) -> Result<f64> {
    let (lo, hi) = sol.fit_window;
    let grid = log_endpoint_grid(1.0 - hi, 1.0 - lo, 41);
    let c = integrate_tau(&sol.params, 1e-3, &grid, 1e-12)?;
    let samples: Vec<(f64, f64)> = grid.iter().zip(&c.ln_d).map(|(&t, &l)| (t, l.exp())).collect();
    let opts =
        ExtractOptions { window: sol.fit_window, fit_exponent: Some(sol.correction_exponent), conjectured: sol.golden_c };
    Ok(extract_constant(&samples, &t1_expansion(&sol.params)?, &opts)?.extracted_c)
}

fn crit4() -> Result<Outcome> {
    let mut o = Outcome::new();
    let sols = [
        ("Ex1 theta=0", AlgebraicSolution::ex1(0.0)?),
        ("Ex1 theta=1/4", AlgebraicSolution::ex1(0.25)?),
        ("Ex2", AlgebraicSolution::ex2()),
        ("Ex3", AlgebraicSolution::ex3()),
    ];
    let grid = log_endpoint_grid(0.1, 0.99, 60);
    let closed = [2f64.powf(0.25), 2f64.powf(3.0 / 16.0), 3f64.powf(15.0 / 8.0) * 2f64.powf(-17.0 / 6.0), 2f64.powf(25.0 / 18.0) * 3f64.powf(-15.0 / 16.0)];
    for ((name, sol), want) in sols.iter().zip(closed) {
        let c = integrate_tau(&sol.params, 1e-3, &grid, 1e-12)?;
        let mut worst = 0.0f64;
        for (i, &t) in grid.iter().enumerate() {
            worst = worst.max((c.ln_d[i] - sol.ln_tau(t)?).abs());
        }
        o.check(format!("{name} ln D vs closed form on [0.1, 0.99]"), worst, 1e-6);
        o.check(format!("{name} extracted C"), rel(extract_golden(sol)?, want), 1e-4);
        o.check(format!("{name} conjectured C"), rel(conjectured_c(&sol.params)?, want), 1e-10);
    }
    Ok(o)
}

fn crit5() -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = log_endpoint_grid(0.95, 0.999, 41);
    let sets = GENERIC.iter().copied().chain([LOG_CASE]);
    for (i, v) in sets.enumerate() {
        let p = params(v);
        let curve = integrate_tau(&p, 1e-3, &grid, 1e-12)?;
        let samples: Vec<(f64, f64)> = grid.iter().zip(&curve.ln_d).map(|(&t, &l)| (t, l.exp())).collect();
        let model = t1_expansion(&p)?;
        let r = extract_constant(&samples, &model, &ExtractOptions::new(conjectured_c(&p)?))?;
        let label = if model.is_log_case { "log-case set".to_string() } else { format!("set {}", i + 1) };
        o.check(format!("{label} {v:?} |C_ext - C_conj|/C"), r.rel_error, 1e-3);
    }
    Ok(o)
}

fn crit6() -> Result<Outcome> {
    let mut o = Outcome::new();
    let (z, zp, w) = (0.3, 0.2, 0.4);
    let kl = build_whittaker_kernel(z, zp, w)?;
    let km = build_macdonald_kernel(z, zp)?;

    let c = sigma_l_curve(&kl, &log_linear_grid(0.5, 20.0, 201), 60)?;
    o.check("PV sigma-form scaled residual on [0.5, 20]", sigma_form_residual(&c, SigmaFamily::Pv { z, z_prime: zp, w })?.max, 1e-4);
    let c = sigma_m_curve(&km, &log_linear_grid(0.2, 10.0, 201), 60)?;
    o.check("PIII sigma-form scaled residual on [0.2, 10]", sigma_form_residual(&c, SigmaFamily::Piii { z, z_prime: zp })?.max, 1e-4);

    let es: Vec<f64> = (0..41).map(|i| 5e-2 * (1e-3f64 / 5e-2).powf(i as f64 / 40.0)).collect();
    let (ml, cl) = limit_constants_pv(z, zp, w)?;
    let sl = es.iter().map(|&e| Ok((e, fredholm_det_semiinfinite(&kl, e, 64, Decay::Exp)?.value))).collect::<Result<Vec<_>>>()?;
    o.check("extracted C_L", extract_constant(&sl, &ml, &ExtractOptions::new(cl))?.rel_error, 1e-3);
    let (mm, cm) = limit_constants_piii(z, zp)?;
    let sm = es.iter().map(|&e| Ok((e, fredholm_det_semiinfinite(&km, e, 64, Decay::ExpSqrt)?.value))).collect::<Result<Vec<_>>>()?;
    o.check("extracted C_M", extract_constant(&sm, &mm, &ExtractOptions::new(cm))?.rel_error, 1e-3);

    let s = 40.0f64;
    let d = fredholm_det_semiinfinite(&kl, s, 64, Decay::Exp)?;
    let tail = kl.lambda() * (-s).exp() * s.powf(-z - zp - 2.0 * w - 2.0);
    o.check("1 - D_L vs tail at s=40", (-d.log_value.exp_m1() / tail - 1.0).abs(), 0.02);
    let x = 60.0f64;
    let tail = kl.lambda() * (-x).exp() * x.powf(-z - zp - 2.0 * w - 2.0);
    o.check("K_L(x,x) vs tail at x=60", (kl.diag(x)? / tail - 1.0).abs(), 0.05);
    let xi = 25.0f64;
    let d = fredholm_det_semiinfinite(&km, xi, 64, Decay::ExpSqrt)?;
    let pre = (PI * z).sin() * (PI * zp).sin() / (4.0 * PI);
    let tail = pre * (-4.0 * xi.sqrt()).exp() / xi.sqrt() * (1.0 + (4.0 * (z - zp).powi(2) - 3.0) / (8.0 * xi.sqrt()));
    o.check("1 - D_M vs tail at xi=25", (-d.log_value.exp_m1() / tail - 1.0).abs(), 0.01);
    Ok(o)
}

fn crit7() -> Result<Outcome> {
    let mut o = Outcome::new();
    for z in [0.1, 0.3, 0.45] {
        let (l, r) = barnes_identity_sides(z)?;
        o.check(format!("Barnes identity z={z}"), (l - r).abs(), 1e-10);
        let (_, cm) = limit_constants_piii(z, z)?;
        let (_, beta) = tracy_beta((PI * z).sin() / PI)?;
        o.check(format!("exp(beta) vs C_M(z,z) z={z}"), rel((2.0 * z * z * LN_2 - beta).exp(), cm), 1e-10);
    }
    Ok(o)
}

fn ratios_first_order(vals: &[f64], target: f64) -> f64 {
    let errs: Vec<f64> = vals.iter().map(|v| rel(*v, target)).collect();
    errs.windows(2).map(|w| (w[0] / w[1] - 2.0).abs()).fold(0.0, f64::max)
}

fn crit8() -> Result<Outcome> {
    let mut o = Outcome::new();
    let nodes = [0.05, 0.2, 0.45, 0.7, 0.9];
    let (mut sym, mut s1, mut s2, mut drift) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in GENERIC {
        let p = params(v);
        let k = F21Kernel::direct(&p)?;
        let q = F21Kernel::direct(&apply_symmetry(&p, Symmetry::S2)?)?;
        for &x in &nodes {
            for &y in &nodes {
                let a = k.eval(x, y)?;
                sym = sym.max((a - k.eval(y, x)?).abs() / a.abs().max(1e-3));
                s2 = s2.max((a - q.eval(x, y)?).abs());
            }
        }
        let d0 = fredholm_det_finite(&k, 0.6, 32, p.c())?.value;
        for s in [Symmetry::S1a, Symmetry::S1b] {
            let q = apply_symmetry(&p, s)?;
            s1 = s1.max((fredholm_det_finite(&F21Kernel::direct(&q)?, 0.6, 32, q.c())?.value - d0).abs());
        }
        let c = integrate_tau_pvi(&p, 1e-3, &log_endpoint_grid(0.01, 0.999, 100), 1e-12)?;
        drift = c.i1_drift.iter().chain(&c.i2_drift).fold(drift, |m, v| m.max(v.abs()));
    }
    o.check("kernel symmetry K(x,y) = K(y,x)", sym, 1e-12);
    o.check("S1 determinant invariance", s1, 1e-9);
    o.check("S2 kernel invariance", s2, 1e-9);
    o.check("TW first-integral drift", drift, 1e-8);

    let mut worst = 0.0f64;
    for pbt in [
        PBTParams { mu: 0.6, nu1: -0.3, nu2: -0.45, b: 0.2 },
        PBTParams { mu: 1.3, nu1: -0.7, nu2: -0.1, b: -0.4 },
        PBTParams { mu: 0.9, nu1: -0.25, nu2: -0.6, b: 0.55 },
    ] {
        let b = kappa_pbt(&pbt)?;
        worst = worst.max(rel(kappa(&map_pbt_params(&pbt, 0)?)?, b));
    }
    o.check("kappa = kappa_PBT", worst, 1e-10);

    let (z, zp, w) = (0.3, 0.2, 0.4);
    let (x, y) = (0.5, 1.2);
    let scales = [250.0, 500.0, 1000.0, 2000.0];
    let kl = build_whittaker_kernel(z, zp, w)?;
    let vals = scales
        .iter()
        .map(|&wp| Ok(F21Kernel::direct(&KernelParams::new(z, zp, w, wp)?)?.eval(1.0 - x / wp, 1.0 - y / wp)? / wp))
        .collect::<Result<Vec<_>>>()?;
    o.check("w' -> inf error ratio |r - 2|", ratios_first_order(&vals, kl.eval(x, y)?), 0.2);
    let km = build_macdonald_kernel(z, zp)?;
    let vals = scales
        .iter()
        .map(|&ww| Ok(build_whittaker_kernel(z, zp, ww)?.eval(x / ww, y / ww)? / ww))
        .collect::<Result<Vec<_>>>()?;
    o.check("w -> inf error ratio |r - 2|", ratios_first_order(&vals, km.eval(x, y)?), 0.2);
    Ok(o)
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    // run after `--list` style probes from the test runner without doing work
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 8] = [
        (1, "Barnes and gamma layer", Duration::from_secs(1), crit1),
        (2, "Fredholm vs ODE", Duration::from_secs(60), crit2),
        (3, "small-t kappa", Duration::MAX, crit3),
        (4, "algebraic solutions", Duration::from_secs(120), crit4),
        (5, "constant at generic parameters", Duration::MAX, crit5),
        (6, "PV/PIII limits", Duration::MAX, crit6),
        (7, "Barnes identity and Tracy beta", Duration::MAX, crit7),
        (8, "property suites", Duration::MAX, crit8),
    ];
    let mut failures = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (pass, lines) = match result {
            Ok(o) => (o.pass, o.lines),
            Err(e) => (false, vec![format!("FAIL error: {e}")]),
        };
        let in_time = took <= budget;
        let ok = pass && in_time;
        failures += usize::from(!ok);
        let timing =
            if budget == Duration::MAX { format!("{took:.2?}") } else { format!("{took:.2?}, budget {budget:.0?}") };
        println!("criterion {n}: {} {name} ({timing})", if ok { "PASS" } else { "FAIL" });
        for l in lines {
            println!("    {l}");
        }
        if !in_time {
            println!("    FAIL runtime exceeded");
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
