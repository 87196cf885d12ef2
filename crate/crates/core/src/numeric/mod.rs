pub mod cheb;
pub mod quad;
pub mod sum;

use num_complex::Complex64;

pub use cheb::ChebPanels;
pub use quad::{gauss_legendre, integrate, integrate_panels, integrate_real, uniform_breaks, QuadResult, QuadratureSpec};
pub use sum::{par_map, par_sum_complex, par_sum_f64, sum_complex, sum_f64, ComplexSum, Neumaier};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// First derivative by central differences with one Richardson step.
/// Returns the estimate and the gap to the unextrapolated value.
pub fn richardson_d1<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> (Complex64, f64) {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    let est = (fine * 4.0 - coarse) / 3.0;
    (est, (est - fine).norm())
}

/// Second derivative by central differences with one Richardson step.
pub fn richardson_d2<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> (Complex64, f64) {
    let f0 = f(x);
    let d = |h: f64| (f(x + h) - f0 * 2.0 + f(x - h)) / (h * h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    let est = (fine * 4.0 - coarse) / 3.0;
    (est, (est - fine).norm())
}
