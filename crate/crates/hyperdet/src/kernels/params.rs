use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::is_nonpositive_integer;

/// The quadruple (z, z', w, w') of the hypergeometric kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub z: f64,
    pub z_prime: f64,
    pub w: f64,
    pub w_prime: f64,
}

impl KernelParams {
    /// Validated constructor: the four sums z+w, z+w', z'+w, z'+w' must avoid the
    /// negative integers and c = z+z'+w+w' must be positive.
    pub fn new(z: f64, z_prime: f64, w: f64, w_prime: f64) -> Result<Self> {
        let p = Self { z, z_prime, w, w_prime };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let all = [self.z, self.z_prime, self.w, self.w_prime];
        if all.iter().any(|v| !v.is_finite()) {
            return domain(format!("non-finite kernel parameters {all:?}"));
        }
        for (name, s) in [
            ("z+w", self.z + self.w),
            ("z+w'", self.z + self.w_prime),
            ("z'+w", self.z_prime + self.w),
            ("z'+w'", self.z_prime + self.w_prime),
        ] {
            if s < 0.0 && is_nonpositive_integer(s) {
                return domain(format!("{name} = {s} is a negative integer"));
            }
        }
        if !(self.c() > 0.0) {
            return domain(format!("z+z'+w+w' = {} must be positive", self.c()));
        }
        Ok(())
    }

    /// c = z + z' + w + w'.
    pub fn c(&self) -> f64 {
        self.z + self.z_prime + self.w + self.w_prime
    }

    /// Painleve VI parameters (theta_0, theta_1, theta_t, theta_inf).
    pub fn theta(&self) -> [f64; 4] {
        [self.c(), self.z - self.z_prime, 0.0, self.w - self.w_prime]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.z, self.z_prime, self.w, self.w_prime]
    }
}

/// The parameter symmetries of the determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// z <-> z'
    S1a,
    /// w <-> w'
    S1b,
    /// (z, z', w, w') -> (-z, -z', w'+z+z', w+z+z')
    S2,
    /// (z+1, z'+1, w-1, w'-1)
    S3Plus,
    /// (z-1, z'-1, w+1, w'+1)
    S3Minus,
}

pub fn apply_symmetry(p: &KernelParams, which: Symmetry) -> Result<KernelParams> {
    let KernelParams { z, z_prime: zp, w, w_prime: wp } = *p;
    let s = z + zp;
    let (a, b, c, d) = match which {
        Symmetry::S1a => (zp, z, w, wp),
        Symmetry::S1b => (z, zp, wp, w),
        Symmetry::S2 => (-z, -zp, wp + s, w + s),
        Symmetry::S3Plus => (z + 1.0, zp + 1.0, w - 1.0, wp - 1.0),
        Symmetry::S3Minus => (z - 1.0, zp - 1.0, w + 1.0, wp + 1.0),
    };
    KernelParams::new(a, b, c, d)
}
