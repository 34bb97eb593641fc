//! Integrable kernels K(x, y) = (f(x) g(y) - g(x) f(y)) / (x - y).

mod f21;
mod limits;
mod params;
mod pbt;

pub use f21::{build_f21_kernel, f21_lambda, F21Kernel, TwNormalization, DEGENERACY_GAP};
pub use limits::{build_macdonald_kernel, build_whittaker_kernel, MacdonaldKernel, WhittakerKernel};
pub use params::{apply_symmetry, KernelParams, Symmetry};
pub use pbt::{backlund_relabel, kappa_pbt, map_pbt_params, pbt_theta, PBTParams};

use crate::error::Result;
use crate::quadrature::Interval;

/// Values of the pair (f, g) and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub f: f64,
    pub g: f64,
    pub df: f64,
    pub dg: f64,
}

impl KernelPoint {
    pub const ZERO: Self = Self { f: 0.0, g: 0.0, df: 0.0, dg: 0.0 };

    /// Diagonal value f'g - g'f.
    pub fn diag(&self) -> f64 {
        self.df * self.g - self.dg * self.f
    }
}

/// Off-diagonal value from two precomputed points.
pub fn kernel_value(x: f64, px: &KernelPoint, y: f64, py: &KernelPoint) -> f64 {
    if x == y {
        px.diag()
    } else {
        (px.f * py.g - px.g * py.f) / (x - y)
    }
}

pub trait IntegrableKernel: Sync {
    /// (f, g, f', g') at x. The derivatives come from the kernel's linear ODE system.
    fn point(&self, x: f64) -> Result<KernelPoint>;

    fn domain(&self) -> Interval;

    /// Power of x in the decay of the kernel at infinity (semi-infinite kernels only).
    fn tail_power(&self) -> f64 {
        0.0
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let px = self.point(x)?;
        if x == y {
            return Ok(px.diag());
        }
        let py = self.point(y)?;
        Ok(kernel_value(x, &px, y, &py))
    }

    fn diag(&self, x: f64) -> Result<f64> {
        Ok(self.point(x)?.diag())
    }
}

/// A kernel assembled from closures, for tests and quick experiments.
pub struct FnKernel<F>
where
    F: Fn(f64) -> KernelPoint + Sync,
{
    pub point_fn: F,
    pub domain: Interval,
}

impl<F> IntegrableKernel for FnKernel<F>
where
    F: Fn(f64) -> KernelPoint + Sync,
{
    fn point(&self, x: f64) -> Result<KernelPoint> {
        Ok((self.point_fn)(x))
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}
