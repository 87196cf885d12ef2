//! Special functions and the weight functions built from them.

pub mod bessel;
pub mod gamma;
pub mod gaussian;
pub mod hyper;
pub mod weights;

pub use bessel::{
    bessel_j_difference, bessel_j_difference_integral, bessel_j_imag_order, BesselIntegralValue, BesselValue,
};
pub use gamma::{digamma, digamma_leading, gamma, log_gamma, stirling_error_bound, stirling_gamma, stirling_leading};
pub use gaussian::{gaussian_moment, gaussian_poly, PolynomialReal};
pub use hyper::{hyp2f1_central, hyp2f1_central_with, hyp2f1_series, hyp_asymptotic};
pub use weights::{h_weight, q_weight, WeightParams, DEFAULT_POLE_SHIFT};
