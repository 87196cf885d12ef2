//! ĥ(s) = ∫ r h(r) Γ(s+ir)/Γ(1−s+ir) dr, its derivatives at 1/2, and
//! precomputed r-grids for Fourier-type inner integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, integrate_panels, richardson_d1, richardson_d2, uniform_breaks, QuadResult, QuadratureSpec};
use crate::specfun::{digamma, log_gamma};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Breakpoints over the kernel support, fine enough that every panel sees a
/// bounded number of oscillations at total frequency `freq`.
pub(crate) fn support_breaks(h: &dyn Kernel, freq: f64) -> Vec<f64> {
    let (a, b) = h.support();
    if b <= a {
        return Vec::new();
    }
    uniform_breaks(a, b, (6.0 / freq.max(1.0)).min(2.0))
}

fn integrate_support<F>(h: &dyn Kernel, freq: f64, f: F, quad: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    integrate_panels(f, &support_breaks(h, freq), quad)
}

/// ∫_ℝ r h(r) e^{c} Γ(s+ir)/Γ(1−s+ir) dr with the prefactor e^{c} folded into
/// the exponent; h even lets the integral run over r > 0 only.
pub(crate) fn h_hat_scaled(h: &dyn Kernel, s: Complex64, log_pref: Complex64, quad: &QuadratureSpec) -> Result<QuadResult> {
    if s.re <= 0.0 {
        return Err(Error::domain(format!("ĥ(s) needs Re s > 0, got {s}")));
    }
    let freq = h.frequency() + (1.0 + s.im.abs()).ln() + 2.0;
    let f = |r: f64| {
        let ir = I * r;
        let g = |ir: Complex64| match (log_gamma(s + ir), log_gamma(1.0 - s + ir)) {
            (Ok(a), Ok(b)) => (log_pref + a - b).exp(),
            _ => Complex64::new(f64::NAN, 0.0),
        };
        h.at(r) * r * (g(ir) - g(-ir))
    };
    integrate_support(h, freq, f, quad)
}

pub fn h_hat(h: &dyn Kernel, s: Complex64, quad: &QuadratureSpec) -> Result<QuadResult> {
    h_hat_scaled(h, s, ZERO, quad)
}

/// (ĥ)′(1/2) and (ĥ)″(1/2) with error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatDerivatives {
    pub d1: Complex64,
    pub d2: Complex64,
    pub d1_err: f64,
    pub d2_err: f64,
}

/// ∫_0^∞ r |h(r)| dr by a midpoint sum; sets the roundoff scale of ĥ on
/// Re s = 1/2, where the Γ-ratio has modulus 1.
fn radial_mass(h: &dyn Kernel) -> f64 {
    let (a, b) = h.support();
    if b <= a {
        return 0.0;
    }
    let n = 2000;
    let dr = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * dr).map(|r| r * h.at(r).norm() * dr).sum()
}

/// Quadrature spec for ĥ near s = 1/2: relative tolerance tightened, absolute
/// tolerance floored at the roundoff of the Γ-ratio.
fn hat_spec(h: &dyn Kernel, quad: &QuadratureSpec) -> QuadratureSpec {
    let spec = quad.tighter_rel(1e-2);
    QuadratureSpec { abs_tol: spec.abs_tol.max(1e-13 * radial_mass(h)), ..spec }
}

/// Central differences with one Richardson step at step `step`, checked
/// against a second run at `2·step`. The error also carries the quadrature
/// error of ĥ, amplified by the difference weights.
pub fn h_hat_derivatives_fd(h: &dyn Kernel, step: f64, quad: &QuadratureSpec) -> Result<HatDerivatives> {
    let inner = hat_spec(h, quad);
    let cell = std::cell::RefCell::new(None::<Error>);
    let q_err = std::cell::Cell::new(0.0f64);
    let eval = |x: f64| match h_hat(h, Complex64::new(x, 0.0), &inner) {
        Ok(v) => {
            q_err.set(q_err.get().max(v.abs_err));
            v.value
        }
        Err(e) => {
            cell.borrow_mut().get_or_insert(e);
            ZERO
        }
    };
    let (d1, g1) = richardson_d1(eval, 0.5, step);
    let (d2, g2) = richardson_d2(eval, 0.5, step);
    let (d1b, _) = richardson_d1(eval, 0.5, 2.0 * step);
    let (d2b, _) = richardson_d2(eval, 0.5, 2.0 * step);
    if let Some(e) = cell.into_inner() {
        return Err(e);
    }
    let qe = q_err.get();
    Ok(HatDerivatives {
        d1,
        d2,
        d1_err: g1 + (d1 - d1b).norm() + 3.0 * qe / step,
        d2_err: g2 + (d2 - d2b).norm() + 23.0 * qe / (step * step),
    })
}

/// (ĥ)′(1/2) by differencing along the imaginary direction, s = 1/2 ± iε.
pub fn h_hat_d1_complex_step(h: &dyn Kernel, eps: f64, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let inner = hat_spec(h, quad);
    let cell = std::cell::RefCell::new(None::<Error>);
    let eval = |y: f64| match h_hat(h, Complex64::new(0.5, y), &inner) {
        Ok(v) => v.value,
        Err(e) => {
            cell.borrow_mut().get_or_insert(e);
            ZERO
        }
    };
    let (d, gap) = richardson_d1(eval, 0.0, eps);
    if let Some(e) = cell.into_inner() {
        return Err(e);
    }
    Ok((d / I, gap))
}

/// Closed forms at s = 1/2, where the Γ-ratio is 1:
/// (ĥ)′ = 2πi ∫_0^∞ r h tanh(πr) dr, (ĥ)″ = 8πi ∫_0^∞ r h tanh(πr) Re ψ(1/2+ir) dr.
pub fn h_hat_derivatives_closed(h: &dyn Kernel, quad: &QuadratureSpec) -> Result<HatDerivatives> {
    let freq = h.frequency();
    let a = integrate_support(h, freq, |r| h.at(r) * r * (PI * r).tanh(), quad)?;
    let b = integrate_support(
        h,
        freq,
        |r| {
            let psi = digamma(Complex64::new(0.5, r)).map(|z| z.re).unwrap_or(f64::NAN);
            h.at(r) * r * (PI * r).tanh() * psi
        },
        quad,
    )?;
    Ok(HatDerivatives {
        d1: a.value * I * (2.0 * PI),
        d2: b.value * I * (8.0 * PI),
        d1_err: 2.0 * PI * a.abs_err,
        d2_err: 8.0 * PI * b.abs_err,
    })
}

/// h′(−i/2) by Richardson differences parallel to the real axis.
pub fn h_prime_at_minus_half_i(h: &dyn Kernel) -> (Complex64, f64) {
    richardson_d1(|x| h.eval(Complex64::new(x, -0.5)), 0.0, 1e-3)
}

/// Gauss–Legendre grid over the kernel support, with the kernel values and an
/// extra radial factor folded into the weights:
/// F(λ) ≈ ∫_0^∞ m(r) r h(r) e^{iλr} dr.
pub(crate) struct RadialTable {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    /// |λ| up to which the grid resolves e^{iλr}.
    pub band: f64,
}

impl RadialTable {
    pub fn new(h: &dyn Kernel, band: f64, factor: impl Fn(f64) -> f64) -> Self {
        let (gx, gw) = gauss_legendre(16);
        let breaks = support_breaks(h, h.frequency() + band);
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for p in breaks.windows(2) {
            let (c, hw) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (x, w) in gx.iter().zip(&gw) {
                let r = c + hw * x;
                nodes.push(r);
                values.push(h.at(r) * (r * factor(r) * w * hw));
            }
        }
        Self { nodes, values, band }
    }

    /// Σ |values|, the size of the roundoff in any table sum.
    pub fn scale(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// Σ values·cos(λ r) and Σ values·sin(λ r).
    pub fn cos_sin(&self, lambda: f64) -> (Complex64, Complex64) {
        let mut c = ZERO;
        let mut s = ZERO;
        for (r, v) in self.nodes.iter().zip(&self.values) {
            let (sn, cs) = (lambda * r).sin_cos();
            c += v * cs;
            s += v * sn;
        }
        (c, s)
    }
}

