//! Real-argument special functions.

pub mod barnes;
pub mod bessel;
pub mod gamma;
pub mod hyp2f1;
pub mod whittaker;

pub use barnes::{log_barnes_g, log_barnes_ratio, BarnesRatioSpec, GLAISHER};
pub use bessel::{bessel_k, bessel_k_scaled};
pub use gamma::{
    cos_pi, digamma, gamma, gamma_ratio, gamma_sign, is_nonpositive_integer, ln_gamma, log_gamma_ratio,
    recip_gamma, sin_pi, trigamma, GammaRatioSpec, CATALAN, EULER_GAMMA,
};
pub use hyp2f1::{hyp2f1, hyp2f1_series, hyp2f1_unit};
pub use whittaker::{ln_tricomi_u, ln_whittaker_w, tricomi_u, whittaker_w, LogScaled};
