//! Adaptive Dormand-Prince 5(4) integrator that lands exactly on requested output points.

use crate::error::{Error, Result};

pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, x: f64, y: &[f64], dy: &mut [f64]) -> Result<()>;

    /// Extra acceptance test on a step that already passed the error control,
    /// e.g. conservation of a first integral.
    fn accept_step(&self, _x0: f64, _y0: &[f64], _x1: f64, _y1: &[f64]) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; 0 picks one from the interval length.
    pub h_init: f64,
    /// Steps below this (relative to |x|+1) abort with StepSizeUnderflow.
    pub h_min_rel: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-13, h_init: 0.0, h_min_rel: 1e-14, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    /// Output points actually reached.
    pub xs: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub accepted: usize,
    pub rejected: usize,
    /// Set when the integration stopped before the last output point.
    pub failure: Option<Error>,
}

impl OdeSolution {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus the embedded fourth-order ones
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Work {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y1: Vec<f64>,
}

/// One trial step of size h from (x, y) with k1 = f(x, y) already in `w.k[0]`.
/// Leaves the candidate in `w.y1`, f(x+h, y1) in `w.k[6]` and returns the scaled error norm.
fn trial(sys: &dyn OdeSystem, x: f64, y: &[f64], h: f64, w: &mut Work, o: &OdeOptions) -> Result<f64> {
    let n = y.len();
    let stage = |w: &mut Work, coeffs: &[f64]| {
        for i in 0..n {
            let mut acc = 0.0;
            for (j, c) in coeffs.iter().enumerate() {
                acc += c * w.k[j][i];
            }
            w.tmp[i] = y[i] + h * acc;
        }
    };
    let call = |w: &mut Work, xs: f64, idx: usize| -> Result<()> {
        let (tmp, k) = (&w.tmp, &mut w.k[idx]);
        sys.rhs(xs, tmp, k)
    };
    stage(w, &[A21]);
    call(w, x + C2 * h, 1)?;
    stage(w, &[A31, A32]);
    call(w, x + C3 * h, 2)?;
    stage(w, &[A41, A42, A43]);
    call(w, x + C4 * h, 3)?;
    stage(w, &[A51, A52, A53, A54]);
    call(w, x + C5 * h, 4)?;
    stage(w, &[A61, A62, A63, A64, A65]);
    call(w, x + h, 5)?;
    stage(w, &[B1, 0.0, B3, B4, B5, B6]);
    w.y1.copy_from_slice(&w.tmp);
    {
        let (y1, k) = (&w.y1, &mut w.k[6]);
        sys.rhs(x + h, y1, k)?;
    }
    let mut err2 = 0.0;
    for i in 0..n {
        let e = h
            * (E1 * w.k[0][i] + E3 * w.k[2][i] + E4 * w.k[3][i] + E5 * w.k[4][i] + E6 * w.k[5][i]
                + E7 * w.k[6][i]);
        let sc = o.atol + o.rtol * y[i].abs().max(w.y1[i].abs());
        err2 += (e / sc) * (e / sc);
    }
    let err = (err2 / n as f64).sqrt();
    Ok(if err.is_finite() { err } else { f64::INFINITY })
}

/// Integrate from (x0, y0) through the increasing or decreasing sequence `outputs`.
/// Nonconvergence is reported inside the solution together with the partial output.
pub fn integrate(sys: &dyn OdeSystem, x0: f64, y0: &[f64], outputs: &[f64], o: &OdeOptions) -> Result<OdeSolution> {
    let n = sys.dim();
    if y0.len() != n {
        return crate::error::domain(format!("initial state has length {}, system needs {n}", y0.len()));
    }
    let mut sol = OdeSolution { xs: Vec::new(), ys: Vec::new(), accepted: 0, rejected: 0, failure: None };
    let Some(&last) = outputs.last() else {
        return Ok(sol);
    };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    if outputs.windows(2).any(|p| (p[1] - p[0]) * dir < 0.0) || (outputs[0] - x0) * dir < 0.0 {
        return crate::error::domain("output points must be monotone and start after x0");
    }
    let mut w = Work { k: std::array::from_fn(|_| vec![0.0; n]), tmp: vec![0.0; n], y1: vec![0.0; n] };
    let mut x = x0;
    let mut y = y0.to_vec();
    sys.rhs(x, &y, &mut w.k[0])?;
    let mut h = if o.h_init > 0.0 { o.h_init } else { 1e-3 * (last - x0).abs().max(1e-12) };
    let mut steps = 0usize;
    for &target in outputs {
        while (target - x) * dir > 0.0 {
            if steps >= o.max_steps {
                sol.failure = Some(Error::NonConvergence(format!("step budget exhausted at x = {x}")));
                return Ok(sol);
            }
            steps += 1;
            let remaining = (target - x).abs();
            let hit = h >= remaining * (1.0 - 1e-12);
            let hs = if hit { remaining } else { h };
            let err = trial(sys, x, &y, dir * hs, &mut w, o)?;
            let x1 = if hit { target } else { x + dir * hs };
            let ok = err <= 1.0 && sys.accept_step(x, &y, x1, &w.y1);
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if ok {
                sol.accepted += 1;
                x = x1;
                y.copy_from_slice(&w.y1);
                w.k.swap(0, 6);
                if !hit || hs >= h {
                    h = hs * factor;
                }
            } else {
                sol.rejected += 1;
                h = hs * if err <= 1.0 { 0.5 } else { factor.min(0.9) };
                if h < o.h_min_rel * (x.abs() + 1.0) {
                    sol.failure = Some(Error::StepSizeUnderflow { t: x });
                    return Ok(sol);
                }
            }
        }
        sol.xs.push(x);
        sol.ys.push(y.clone());
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;
    impl OdeSystem for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _x: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let o = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let xs = [1.0, 2.5, 10.0];
        let s = integrate(&Oscillator, 0.0, &[0.0, 1.0], &xs, &o).unwrap();
        assert!(s.completed());
        for (x, y) in s.xs.iter().zip(&s.ys) {
            assert!((y[0] - x.sin()).abs() < 1e-10);
            assert!((y[1] - x.cos()).abs() < 1e-10);
        }
        assert_eq!(s.xs, xs);
    }

    #[test]
    fn backward_integration() {
        let o = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let s = integrate(&Oscillator, 1.0, &[1f64.sin(), 1f64.cos()], &[0.0], &o).unwrap();
        assert!(s.ys[0][0].abs() < 1e-11);
    }

    struct Blowup;
    impl OdeSystem for Blowup {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _x: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = y[0] * y[0];
            Ok(())
        }
    }

    #[test]
    fn underflow_is_reported_with_partial_output() {
        let s = integrate(&Blowup, 0.0, &[1.0], &[0.5, 2.0], &OdeOptions::default()).unwrap();
        assert_eq!(s.xs.len(), 1);
        assert!(s.failure.is_some());
    }
}
