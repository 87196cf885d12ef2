//! Even test functions h(r) fed to the transforms.

use std::sync::Arc;

use num_complex::Complex64;

use crate::specfun::{h_weight, WeightParams};

/// Relative size below which a kernel value counts as zero when sizing
/// integration windows.
pub const NEGLIGIBLE: f64 = 1e-18;

/// An even function h(r), analytic in a horizontal strip around the real axis.
pub trait Kernel: Send + Sync {
    fn eval(&self, r: Complex64) -> Complex64;

    /// Interval [a, b] ⊂ [0, ∞) carrying the mass of h on the positive axis.
    fn support(&self) -> (f64, f64);

    /// Dominant oscillation frequency of h on its support.
    fn frequency(&self) -> f64 {
        0.0
    }

    /// h is regular for |Im r| < strip.
    fn strip(&self) -> f64 {
        f64::INFINITY
    }

    /// Number of points −i(k + 1/2), k = 0, 1, ..., at which h vanishes.
    fn tanh_zeros(&self) -> u32 {
        0
    }

    fn at(&self, r: f64) -> Complex64 {
        self.eval(Complex64::new(r, 0.0))
    }
}

/// h_ℓ(r; T, K, G) built from [`WeightParams`].
#[derive(Debug, Clone, Copy)]
pub struct WeightKernel {
    pub params: WeightParams,
}

impl WeightKernel {
    pub fn new(params: WeightParams) -> Self {
        Self { params }
    }
}

impl Kernel for WeightKernel {
    fn eval(&self, r: Complex64) -> Complex64 {
        h_weight(&self.params, r)
    }

    fn support(&self) -> (f64, f64) {
        let p = &self.params;
        let growth = 2.0 * (p.ell as f64 + 1.0) * (p.k + p.g + 1.0).ln();
        let w = p.g * ((1.0 / NEGLIGIBLE).ln() + growth).sqrt();
        ((p.k - w).max(0.0), p.k + w)
    }

    fn frequency(&self) -> f64 {
        (4.0 * self.params.t / self.params.k).ln()
    }

    fn strip(&self) -> f64 {
        self.params.pole_shift.sqrt() * self.params.n as f64
    }

    fn tanh_zeros(&self) -> u32 {
        self.params.n
    }
}

/// a·(e^{−((r−c)/w)²} + e^{−((r+c)/w)²}), or a·e^{−(r/w)²} when c = 0.
#[derive(Debug, Clone, Copy)]
pub struct GaussianKernel {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl GaussianKernel {
    pub fn centered(width: f64) -> Self {
        Self { center: 0.0, width, amplitude: 1.0 }
    }

    pub fn pair(center: f64, width: f64) -> Self {
        Self { center, width, amplitude: 1.0 }
    }
}

impl Kernel for GaussianKernel {
    fn eval(&self, r: Complex64) -> Complex64 {
        let g = |d: Complex64| (-(d * d) / (self.width * self.width)).exp();
        if self.center == 0.0 {
            g(r) * self.amplitude
        } else {
            (g(r - self.center) + g(r + self.center)) * self.amplitude
        }
    }

    fn support(&self) -> (f64, f64) {
        let w = self.width * (1.0 / NEGLIGIBLE).ln().sqrt();
        ((self.center - w).max(0.0), self.center + w)
    }
}

/// A closure-backed kernel with declared support and regularity.
#[derive(Clone)]
pub struct FnKernel {
    f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    support: (f64, f64),
    strip: f64,
    tanh_zeros: u32,
}

impl FnKernel {
    pub fn new<F>(f: F, support: (f64, f64)) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), support, strip: f64::INFINITY, tanh_zeros: 0 }
    }

    pub fn with_strip(mut self, strip: f64) -> Self {
        self.strip = strip;
        self
    }

    pub fn with_tanh_zeros(mut self, n: u32) -> Self {
        self.tanh_zeros = n;
        self
    }
}

impl Kernel for FnKernel {
    fn eval(&self, r: Complex64) -> Complex64 {
        (self.f)(r)
    }
    fn support(&self) -> (f64, f64) {
        self.support
    }
    fn strip(&self) -> f64 {
        self.strip
    }
    fn tanh_zeros(&self) -> u32 {
        self.tanh_zeros
    }
}

/// c·h.
pub struct Scaled<'a> {
    pub inner: &'a dyn Kernel,
    pub factor: Complex64,
}

impl Kernel for Scaled<'_> {
    fn eval(&self, r: Complex64) -> Complex64 {
        self.inner.eval(r) * self.factor
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn frequency(&self) -> f64 {
        self.inner.frequency()
    }
    fn strip(&self) -> f64 {
        self.inner.strip()
    }
    fn tanh_zeros(&self) -> u32 {
        self.inner.tanh_zeros()
    }
}

/// r ↦ h(−r).
pub struct Reflected<'a>(pub &'a dyn Kernel);

impl Kernel for Reflected<'_> {
    fn eval(&self, r: Complex64) -> Complex64 {
        self.0.eval(-r)
    }
    fn support(&self) -> (f64, f64) {
        self.0.support()
    }
    fn frequency(&self) -> f64 {
        self.0.frequency()
    }
    fn strip(&self) -> f64 {
        self.0.strip()
    }
    fn tanh_zeros(&self) -> u32 {
        self.0.tanh_zeros()
    }
}

pub struct ZeroKernel;

impl Kernel for ZeroKernel {
    fn eval(&self, _r: Complex64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn support(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// Largest |h| sampled on the support.
pub fn peak(h: &dyn Kernel) -> f64 {
    let (a, b) = h.support();
    if b <= a {
        return 0.0;
    }
    (0..=400).map(|i| h.at(a + (b - a) * i as f64 / 400.0).norm()).fold(0.0, f64::max)
}

/// Maximum relative asymmetry |h(r) − h(−r)| / max|h| on a sample of the
/// support.
pub fn evenness_defect(h: &dyn Kernel) -> f64 {
    let (a, b) = h.support();
    let scale = peak(h).max(f64::MIN_POSITIVE);
    (0..=200)
        .map(|i| {
            let r = a + (b - a) * i as f64 / 200.0;
            (h.at(r) - h.at(-r)).norm() / scale
        })
        .fold(0.0, f64::max)
}
