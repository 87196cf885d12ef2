//! Motohashi's transformation of the cubic spectral moment: ĥ, Ψ±, and the
//! terms ℋ₁–ℋ₇.

pub mod kernel;
pub mod mellin;
pub mod psi;
pub mod terms;
pub mod transform;

pub use kernel::{evenness_defect, peak, FnKernel, GaussianKernel, Kernel, Reflected, Scaled, WeightKernel, ZeroKernel};
pub use mellin::MellinTable;
pub use psi::{
    kappa, kappa_mb, psi_minus, psi_minus_double, psi_minus_shifted, psi_minus_triple, psi_plus, psi_plus_double,
    psi_plus_hypergeometric, psi_plus_with, PsiOptions, PsiValue,
};
pub use terms::{default_trunc, h_term, required_table_limit, spectral_rhs, spectral_rhs_terms, HTermValue, Motohashi, FD_STEP, TRUNC_EPS};
pub use transform::{
    h_hat, h_hat_d1_complex_step, h_hat_derivatives_closed, h_hat_derivatives_fd, h_prime_at_minus_half_i, HatDerivatives,
};
