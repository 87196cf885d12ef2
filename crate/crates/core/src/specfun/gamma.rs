//! log Γ, Stirling's expansion and the digamma function.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// B_{2k} for k = 1..=10.
pub(crate) const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

pub const MAX_STIRLING_ORDER: usize = 9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Radius beyond which the full ten-term series is used directly.
const SHIFT_RADIUS: f64 = 15.0;

fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

fn stirling_series(z: Complex64, terms: usize) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().take(terms) {
        let k = (k + 1) as f64;
        acc += pow * (b / (2.0 * k * (2.0 * k - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + acc
}

/// Principal branch of log Γ(s).
///
/// Shifts s upward until |s| ≥ 15 and Re s ≥ 1/2, then applies Stirling's
/// series with ten Bernoulli terms (truncation below 1e-17 there).
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if !s.is_finite() {
        return Err(Error::invalid("log_gamma argument must be finite"));
    }
    if is_pole(s) {
        return Err(Error::domain(format!("Γ has a pole at {}", s.re)));
    }
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.5 || z.norm() < SHIFT_RADIUS {
        shift += z.ln();
        z += 1.0;
    }
    let mut v = stirling_series(z, BERNOULLI.len()) - shift;
    if s.im == 0.0 && s.re > 0.0 {
        v.im = 0.0;
    }
    Ok(v)
}

pub fn gamma(s: Complex64) -> Result<Complex64> {
    Ok(log_gamma(s)?.exp())
}

/// Stirling's formula for Γ(s) with `order` Bernoulli correction terms,
/// valid for Im s ≥ 10.
///
/// For 0 ≤ Re s ≤ 2 the relative error is at most
/// |B_{2n+2}| / ((2n+2)(2n+1)) · |s|^{−2n−1} · 2^{n+1}, n = order,
/// which is ≤ 1/(12·t)·2 for order 0 and decays like t^{−2·order−1}.
pub fn stirling_gamma(s: Complex64, order: usize) -> Result<Complex64> {
    if s.im < 10.0 {
        return Err(Error::domain(format!("stirling_gamma needs Im s ≥ 10, got {}", s.im)));
    }
    if order > MAX_STIRLING_ORDER {
        return Err(Error::invalid(format!("stirling order at most {MAX_STIRLING_ORDER}")));
    }
    Ok(stirling_series(s, order).exp())
}

/// Error constant c in |relative error| ≤ c for `stirling_gamma(s, order)`.
pub fn stirling_error_bound(s: Complex64, order: usize) -> f64 {
    let n = order.min(MAX_STIRLING_ORDER);
    let k = (n + 1) as f64;
    let b = BERNOULLI[n].abs() / (2.0 * k * (2.0 * k - 1.0));
    // 1/cos^{2k}(arg s / 2) ≤ 2^k for |arg s| ≤ π/2.
    2.0 * b * s.norm().powi(-(2 * n as i32 + 1)) * 2f64.powi(n as i32 + 1)
}

/// Leading behaviour √(2π) t^{σ−1/2} e^{−πt/2} e^{i(t log t − t + π(σ−1/2)/2)}
/// for s = σ + it, t → +∞.
pub fn stirling_leading(s: Complex64) -> Result<Complex64> {
    if s.im < 10.0 {
        return Err(Error::domain(format!("stirling_leading needs Im s ≥ 10, got {}", s.im)));
    }
    let (sigma, t) = (s.re, s.im);
    let modulus = LN_SQRT_2PI + (sigma - 0.5) * t.ln() - 0.5 * PI * t;
    let phase = t * t.ln() - t + 0.5 * PI * (sigma - 0.5);
    Ok(Complex64::from_polar(modulus.exp(), phase))
}

/// ψ(s) = Γ′/Γ(s).
pub fn digamma(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::domain(format!("ψ has a pole at {}", s.re)));
    }
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.5 || z.norm() < SHIFT_RADIUS {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        acc += pow * (b / (2.0 * (k + 1) as f64));
        pow *= inv2;
    }
    Ok(z.ln() - inv * 0.5 - acc - shift)
}

/// log s − 1/(2s), the two-term form of the digamma asymptotics.
pub fn digamma_leading(s: Complex64) -> Complex64 {
    s.ln() - s.inv() * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!((gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-14);
        assert!((gamma(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
        let g = gamma(c(0.5, 1.0)).unwrap().norm();
        assert!((g * g - PI / (PI).cosh()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Domain(_))));
        assert!(log_gamma(c(-2.5, 0.0)).is_ok());
    }

    #[test]
    fn digamma_one() {
        let v = digamma(c(1.0, 0.0)).unwrap();
        assert!((v.re + crate::numeric::EULER_GAMMA).abs() < 1e-14);
    }
}
