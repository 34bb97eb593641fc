use hyperdet::fredholm::{
    det_with_rule, finite_log_derivative, finite_rule, fredholm_det_finite, fredholm_det_semiinfinite, Decay,
};
use hyperdet::kernels::{build_f21_kernel, build_macdonald_kernel, FnKernel, KernelParams, KernelPoint};
use hyperdet::quadrature::Interval;
use proptest::prelude::*;

fn set1() -> KernelParams {
    KernelParams::new(0.3, 0.2, 0.4, 0.1).unwrap()
}

/// K = 1 in integrable form: f = x, g = 1 gives (x - y)/(x - y).
fn unit_kernel() -> FnKernel<impl Fn(f64) -> KernelPoint + Sync> {
    FnKernel { point_fn: |x: f64| KernelPoint { f: x, g: 1.0, df: 1.0, dg: 0.0 }, domain: Interval::new(0.0, 1.0) }
}

// [TRIVIAL] rank one kernel with eigenvalue t
#[test]
fn rank_one_kernel() {
    let k = unit_kernel();
    for t in [0.1, 0.5, 0.9] {
        let d = fredholm_det_finite(&k, t, 8, 0.0).unwrap();
        assert!((d.value - (1.0 - t)).abs() < 1e-14, "t={t}: {}", d.value);
    }
}

// [DERIVED] self-convergence under n: 64 -> 128 -> 256
#[test]
fn self_convergence_at_half() {
    let p = set1();
    let k = build_f21_kernel(&p).unwrap();
    let vals: Vec<f64> =
        [64, 128, 256].iter().map(|&n| det_with_rule(&k, &finite_rule(0.5, n, p.c()).unwrap()).unwrap().0.exp()).collect();
    assert!((vals[0] - vals[1]).abs() <= 1e-9 && (vals[1] - vals[2]).abs() <= 1e-9, "{vals:?}");
}

// [DERIVED] the log-derivative from the resolvent matches a difference quotient of ln D
#[test]
fn log_derivative_matches_finite_difference() {
    let p = set1();
    let k = build_f21_kernel(&p).unwrap();
    let t = 0.6;
    let h = 1e-4;
    let lnd = |t: f64| fredholm_det_finite(&k, t, 48, p.c()).unwrap().log_value;
    let fd = (lnd(t + h) - lnd(t - h)) / (2.0 * h);
    let r = finite_log_derivative(&k, t, 48, p.c()).unwrap();
    assert!((fd - r).abs() <= 1e-7 * r.abs(), "{fd} vs {r}");
}

// [DERIVED] D(t) = 1 - kappa t^(1+c) + ... decreases for kappa > 0
#[test]
fn determinant_decreases_in_t() {
    let p = set1();
    let k = build_f21_kernel(&p).unwrap();
    let vals: Vec<f64> =
        (1..20).map(|i| fredholm_det_finite(&k, i as f64 * 0.05, 32, p.c()).unwrap().value).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
}

#[test]
fn macdonald_determinant_tends_to_one() {
    let k = build_macdonald_kernel(0.3, 0.2).unwrap();
    let near = fredholm_det_semiinfinite(&k, 0.5, 48, Decay::ExpSqrt).unwrap().value;
    let far = fredholm_det_semiinfinite(&k, 25.0, 48, Decay::ExpSqrt).unwrap().value;
    assert!(near < far && far < 1.0 && 1.0 - far < 1e-8);
}

#[test]
fn rejects_out_of_range_t() {
    let k = build_f21_kernel(&set1()).unwrap();
    assert!(fredholm_det_finite(&k, 1.0, 16, 1.0).is_err());
    assert!(fredholm_det_finite(&k, 0.0, 16, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // ln D is accurate even where 1 - D is below machine epsilon
    #[test]
    fn small_t_log_matches_kappa(t in 1e-5f64..1e-3) {
        let p = set1();
        let k = build_f21_kernel(&p).unwrap();
        let d = fredholm_det_finite(&k, t, 24, p.c()).unwrap();
        let lead = hyperdet::asymptotics::kappa(&p).unwrap() * t.powf(1.0 + p.c());
        prop_assert!(((-d.log_value) / lead - 1.0).abs() < 5.0 * t, "t={} {} vs {}", t, -d.log_value, lead);
    }
}
