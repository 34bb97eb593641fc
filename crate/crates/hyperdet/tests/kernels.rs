use hyperdet::asymptotics::kappa;
use hyperdet::fredholm::fredholm_det_finite;
use hyperdet::kernels::{
    apply_symmetry, build_f21_kernel, build_macdonald_kernel, build_whittaker_kernel, kappa_pbt, map_pbt_params,
    F21Kernel, IntegrableKernel, KernelParams, PBTParams, Symmetry,
};
use proptest::prelude::*;

fn set(i: usize) -> KernelParams {
    let v = [(0.3, 0.2, 0.4, 0.1), (0.45, 0.1, 0.7, -0.2), (0.25, 0.25, 0.9, 0.35)][i];
    KernelParams::new(v.0, v.1, v.2, v.3).unwrap()
}

const NODES: [f64; 5] = [0.05, 0.2, 0.45, 0.7, 0.9];

fn max_kernel_gap(a: &dyn IntegrableKernel, b: &dyn IntegrableKernel) -> f64 {
    let mut m = 0.0f64;
    for &x in &NODES {
        for &y in &NODES {
            m = m.max((a.eval(x, y).unwrap() - b.eval(x, y).unwrap()).abs());
        }
    }
    m
}

// [DERIVED] kernel values are unchanged by the S2 map
#[test]
fn s2_kernel_invariance() {
    for i in 0..3 {
        let p = set(i);
        let q = apply_symmetry(&p, Symmetry::S2).unwrap();
        let gap = max_kernel_gap(&F21Kernel::direct(&p).unwrap(), &F21Kernel::direct(&q).unwrap());
        assert!(gap <= 1e-9, "set {i}: {gap:e}");
    }
}

// [DERIVED] the TW factorization reproduces the direct kernel
#[test]
fn tw_factorization_matches_direct_kernel() {
    for i in 0..3 {
        let p = set(i);
        let gap = max_kernel_gap(&build_f21_kernel(&p).unwrap(), &F21Kernel::direct(&p).unwrap());
        assert!(gap <= 1e-10, "set {i}: {gap:e}");
    }
}

// [DERIVED] D(t) is invariant under z <-> z' and w <-> w'
#[test]
fn s1_determinant_invariance() {
    for i in 0..3 {
        let p = set(i);
        let d0 = fredholm_det_finite(&F21Kernel::direct(&p).unwrap(), 0.6, 32, p.c()).unwrap().value;
        for s in [Symmetry::S1a, Symmetry::S1b] {
            let q = apply_symmetry(&p, s).unwrap();
            let d = fredholm_det_finite(&F21Kernel::direct(&q).unwrap(), 0.6, 32, q.c()).unwrap().value;
            assert!((d - d0).abs() <= 1e-9, "set {i} {s:?}: {d} vs {d0}");
        }
    }
}

#[test]
fn kappa_symmetries() {
    for i in 0..3 {
        let p = set(i);
        let k = kappa(&p).unwrap();
        for s in [Symmetry::S1a, Symmetry::S1b, Symmetry::S2] {
            let q = apply_symmetry(&p, s).unwrap();
            assert!((kappa(&q).unwrap() - k).abs() <= 1e-12 * k.abs(), "set {i} {s:?}");
        }
    }
}

// [DERIVED] independent PBT formula for kappa
#[test]
fn kappa_matches_pbt() {
    let cases = [
        PBTParams { mu: 0.6, nu1: -0.3, nu2: -0.45, b: 0.2 },
        PBTParams { mu: 1.3, nu1: -0.7, nu2: -0.1, b: -0.4 },
        PBTParams { mu: 0.9, nu1: -0.25, nu2: -0.6, b: 0.55 },
    ];
    for pbt in cases {
        let p = map_pbt_params(&pbt, 0).unwrap();
        let a = kappa(&p).unwrap();
        let b = kappa_pbt(&pbt).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "{pbt:?}: {a} vs {b}");
    }
}

fn relative_errors(vals: &[f64], target: f64) -> Vec<f64> {
    vals.iter().map(|v| ((v - target) / target).abs()).collect()
}

fn assert_first_order(errs: &[f64]) {
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.8..=2.2).contains(&ratio), "errors {errs:?} do not halve");
    }
}

// [DERIVED] first-order convergence of the w' -> inf and w -> inf scaling limits
#[test]
fn scaling_limits_converge_at_first_order() {
    let (z, zp, w) = (0.3, 0.2, 0.4);
    let (x, y) = (0.5, 1.2);
    let kl = build_whittaker_kernel(z, zp, w).unwrap();
    let target = kl.eval(x, y).unwrap();
    let scales = [250.0, 500.0, 1000.0, 2000.0];
    let vals: Vec<f64> = scales
        .iter()
        .map(|&wp| {
            let k = F21Kernel::direct(&KernelParams::new(z, zp, w, wp).unwrap()).unwrap();
            k.eval(1.0 - x / wp, 1.0 - y / wp).unwrap() / wp
        })
        .collect();
    assert_first_order(&relative_errors(&vals, target));

    let km = build_macdonald_kernel(z, zp).unwrap();
    let target = km.eval(x, y).unwrap();
    let vals: Vec<f64> = scales
        .iter()
        .map(|&ww| build_whittaker_kernel(z, zp, ww).unwrap().eval(x / ww, y / ww).unwrap() / ww)
        .collect();
    assert_first_order(&relative_errors(&vals, target));
}

#[test]
fn invalid_parameters_rejected() {
    assert!(KernelParams::new(0.3, 0.2, -1.3, 0.1).is_err());
    assert!(KernelParams::new(-0.3, -0.2, 0.1, 0.1).is_err());
    assert!(build_macdonald_kernel(1.0, 0.2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_symmetric(
        z in 0.05f64..0.45, zp in 0.05f64..0.45, w in 0.1f64..1.0, wp in -0.3f64..0.8,
        x in 0.01f64..0.99, y in 0.01f64..0.99,
    ) {
        let p = KernelParams::new(z, zp, w, wp).unwrap();
        let k = F21Kernel::direct(&p).unwrap();
        let a = k.eval(x, y).unwrap();
        let b = k.eval(y, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-3));
    }

    #[test]
    fn s2_kappa_invariance(z in 0.05f64..0.45, zp in 0.05f64..0.45, w in 0.1f64..1.0, wp in 0.0f64..0.8) {
        let p = KernelParams::new(z, zp, w, wp).unwrap();
        let q = apply_symmetry(&p, Symmetry::S2).unwrap();
        let (a, b) = (kappa(&p).unwrap(), kappa(&q).unwrap());
        prop_assert!((a - b).abs() <= 1e-11 * a.abs());
    }
}
