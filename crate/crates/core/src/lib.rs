//! Numerical toolkit for spectral exponential sums, the fourth moment of the
//! Riemann zeta function and the transformation formulas that connect them.

pub mod arithmetic;
pub mod cache;
pub mod error;
pub mod expsum;
pub mod numeric;
pub mod report;
pub mod saddle;
pub mod motohashi;
pub mod spectral_data;
pub mod trace;
pub mod specfun;
pub mod zeta;

pub use error::{Error, Result};
pub use numeric::QuadratureSpec;
