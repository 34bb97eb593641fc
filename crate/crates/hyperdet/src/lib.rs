//! Fredholm determinants of the hypergeometric, Whittaker and Macdonald kernels,
//! their Painleve tau-function descriptions, and numerical extraction of the
//! connection constants at the far endpoint.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod ode;
pub mod painleve;
pub mod quadrature;
pub mod reference;
pub mod specfun;

pub use error::{Error, Result};
