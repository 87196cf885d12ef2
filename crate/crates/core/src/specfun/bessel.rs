//! J_{2ir}(x) for real r and x > 0, and the integral form of
//! J_{2ir}(x) − J_{−2ir}(x).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_panels, uniform_breaks, ComplexSum, QuadratureSpec};
use crate::specfun::gamma::log_gamma;

/// Largest argument for which the double-precision power series is trusted.
pub const BESSEL_MAX_X: f64 = 30.0;
/// Largest |r| accepted by the power series.
pub const BESSEL_MAX_R: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselValue {
    pub value: Complex64,
    /// Bound on series tail plus accumulated rounding.
    pub err: f64,
}

fn check_range(r: f64, x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("Bessel argument must be positive, got {x}")));
    }
    if x > BESSEL_MAX_X || r.abs() > BESSEL_MAX_R {
        return Err(Error::NumericFailure {
            message: format!("Bessel series outside trusted range x ≤ {BESSEL_MAX_X}, |r| ≤ {BESSEL_MAX_R} (x={x}, r={r})"),
            residual: f64::INFINITY,
            partial: None,
        });
    }
    Ok(())
}

/// J_ν(x) = Σ_k (−1)^k (x/2)^{ν+2k} / (k! Γ(ν+k+1)), ν = 2ir.
pub fn bessel_j_imag_order(r: f64, x: f64) -> Result<BesselValue> {
    check_range(r, x)?;
    let nu = Complex64::new(0.0, 2.0 * r);
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - log_gamma(nu + 1.0)?).exp();
    let q = -half * half;
    let mut acc = ComplexSum::new();
    let mut abs_sum = 0.0;
    let mut k = 0usize;
    loop {
        acc.add(term);
        abs_sum += term.norm();
        let kf = k as f64;
        let next = term * q / ((kf + 1.0) * (nu + kf + 1.0));
        let ratio = half * half / ((kf + 2.0) * (nu + kf + 2.0).norm());
        if kf + 1.0 > half && ratio < 0.5 && next.norm() <= 1e-17 * abs_sum {
            let tail = next.norm() / (1.0 - ratio);
            acc.add(next);
            let value = acc.value();
            let err = tail + 8.0 * f64::EPSILON * (abs_sum + next.norm());
            return Ok(BesselValue { value, err });
        }
        term = next;
        k += 1;
        if k > 2000 {
            return Err(Error::numeric("Bessel series did not terminate", term.norm()));
        }
    }
}

/// J_{2ir}(x) − J_{−2ir}(x) from two power series.
pub fn bessel_j_difference(r: f64, x: f64) -> Result<BesselValue> {
    let a = bessel_j_imag_order(r, x)?;
    let b = bessel_j_imag_order(-r, x)?;
    Ok(BesselValue { value: a.value - b.value, err: a.err + b.err })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselIntegralValue {
    pub value: Complex64,
    /// Quadrature error of the truncated integral.
    pub quad_err: f64,
    /// Size x^{−1}(|r|+1) e^{π|r| − u_max/2} of the discarded range |u| > u_max.
    pub truncation_envelope: f64,
}

/// −(2i/π) sinh(πr) ∫_{−u_max}^{u_max} cos(x cosh u) cos(2ru) du, which tends to
/// J_{2ir}(x) − J_{−2ir}(x) as u_max → ∞. Choose u_max = log²K̃ to mirror
/// the truncation |u| ≤ log² K̃.
pub fn bessel_j_difference_integral(r: f64, x: f64, u_max: f64, quad: &QuadratureSpec) -> Result<BesselIntegralValue> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("Bessel argument must be positive, got {x}")));
    }
    if !(u_max > 0.0) {
        return Err(Error::invalid("u_max must be positive"));
    }
    let (integral, err) = cos_cosh_integral(r, x, u_max, quad)?;
    let pref = -2.0 / PI * (PI * r).sinh();
    Ok(BesselIntegralValue {
        value: Complex64::new(0.0, pref * 2.0 * integral),
        quad_err: (pref * 2.0).abs() * err,
        truncation_envelope: (r.abs() + 1.0) / x * (PI * r.abs() - 0.5 * u_max).exp(),
    })
}

/// ∫_0^{u_max} cos(x cosh u) cos(2ru) du.
///
/// Up to the point u_0 where x cosh u_0 reaches V_0 the integrand is resolved
/// directly. Beyond, with v = x cosh u the integral becomes
/// ∫ cos(v) g(v) dv, g(v) = cos(2r acosh(v/x))/√(v²−x²), and each tail
/// ∫_V^∞ e^{iv} g(v) dv is moved onto the vertical ray v = V + is.
fn cos_cosh_integral(r: f64, x: f64, u_max: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let v0 = (4.0 * x).max(60.0).max(8.0 * r.abs());
    let u0 = (v0 / x).acosh().min(u_max);
    // Local frequency x sinh u + 2|r| at the far end.
    let freq = x * u0.sinh() + 2.0 * r.abs() + 1.0;
    let breaks = uniform_breaks(0.0, u0, (2.0 * PI / freq) / 2.0);
    let head = integrate_panels(
        |u| Complex64::new((x * u.cosh()).cos() * (2.0 * r * u).cos(), 0.0),
        &breaks,
        quad,
    )?;
    let mut total = head.value.re;
    let mut err = head.abs_err;
    if u_max > u0 {
        let t0 = ray_tail(r, x, x * u0.cosh(), quad)?;
        let t1 = ray_tail(r, x, x * u_max.cosh(), quad)?;
        total += t0.0 - t1.0;
        err += t0.1 + t1.1;
    }
    Ok((total, err))
}

/// Re ∫_V^∞ e^{iv} g(v) dv = Re[i e^{iV} ∫_0^∞ e^{−s} g(V + is) ds].
fn ray_tail(r: f64, x: f64, v: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let g = |w: Complex64| {
        let ac = (w / x).acosh();
        (ac * (2.0 * r)).cos() / ((w - x).sqrt() * (w + x).sqrt())
    };
    let res = integrate(|s| (-s).exp() * g(Complex64::new(v, s)), 0.0, 45.0, quad)?;
    let phase = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, v.rem_euclid(2.0 * PI));
    Ok(((phase * res.value).re, res.abs_err))
}
