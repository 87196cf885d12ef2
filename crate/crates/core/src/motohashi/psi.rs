//! Ψ⁺(x; h) and Ψ⁻(x; h) through their integral representations.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::kernel::Kernel;
use super::transform::RadialTable;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, integrate_panels, uniform_breaks, QuadratureSpec};
use crate::specfun::{hyp2f1_central, log_gamma};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Frequencies beyond the kernel's own that the radial tables resolve. The
/// tanh and sech factors only give transforms decaying like e^{−|λ|/2}.
const TABLE_BAND: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub value: Complex64,
    pub abs_err: f64,
    /// Second, independent representation.
    pub check: Complex64,
    pub check_err: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PsiOptions {
    /// Replace tanh(πr) by sgn(r).
    pub sign_for_tanh: bool,
}

fn tanh_or_sign(opts: PsiOptions) -> impl Fn(f64) -> f64 + Sync {
    move |r: f64| if opts.sign_for_tanh { r.signum() } else { (PI * r).tanh() }
}

/// ∫_0^∞ r |h(r)| m(r) dr, the scale against which roundoff is judged.
fn mass(h: &dyn Kernel, m: impl Fn(f64) -> f64) -> f64 {
    let (a, b) = h.support();
    if b <= a {
        return 0.0;
    }
    let n = 2000;
    let dr = (b - a) / n as f64;
    (0..n).map(|i| {
        let r = a + (i as f64 + 0.5) * dr;
        r * h.at(r).norm() * m(r) * dr
    }).sum()
}

fn agree(a: Complex64, ea: f64, b: Complex64, eb: f64, floor: f64, quad: &QuadratureSpec) -> bool {
    let tol = ea + eb + quad.abs_tol + quad.rel_tol * a.norm().max(b.norm()) + floor;
    (a - b).norm() <= 10.0 * tol
}

fn disagreement(what: &str, x: f64, a: Complex64, b: Complex64) -> Error {
    Error::NumericFailure {
        message: format!("{what}({x}): representations disagree: {a} vs {b}"),
        residual: (a - b).norm(),
        partial: Some(a.re),
    }
}

/// θ-breakpoints on [0, π/2] for integrands that depend on θ through
/// ln Z(θ), with Z → 0 at both ends: uniform in the middle, geometric toward
/// the ends until ln Z < −band. Also returns the two cut points.
fn theta_breaks(lnz: impl Fn(f64) -> f64, band: f64) -> (Vec<f64>, f64, f64) {
    let step = FRAC_PI_2 / 32.0;
    let geometric = |end: &dyn Fn(f64) -> f64| {
        let mut out = Vec::new();
        let mut t = step;
        while t > 1e-300 {
            t *= 0.8;
            out.push(t);
            if lnz(end(t)) < -band {
                break;
            }
        }
        out
    };
    let lo = geometric(&|t| t);
    let hi = geometric(&|t| FRAC_PI_2 - t);
    let mut breaks = vec![0.0];
    breaks.extend(lo.iter().rev());
    breaks.extend((1..32).map(|i| step * i as f64));
    breaks.extend(hi.iter().map(|t| FRAC_PI_2 - t));
    breaks.push(FRAC_PI_2);
    (breaks, *lo.last().unwrap(), *hi.last().unwrap())
}

/// The outer quadrature spec, with the absolute tolerance raised to the
/// roundoff level of a table sum of size `scale`.
fn outer_spec(quad: &QuadratureSpec, scale: f64) -> QuadratureSpec {
    QuadratureSpec { abs_tol: quad.abs_tol.max(1e-12 * scale), ..*quad }
}

/// Ψ⁺ through the double integral
/// 2π ∫_0^1 {y(1−y)(1+y/x)}^{−1/2} ∫ r h(r) tanh(πr) {y(1−y)/(x+y)}^{ir} dr dy,
/// with y = sin²θ removing the endpoint singularities.
pub fn psi_plus_double(x: f64, h: &dyn Kernel, quad: &QuadratureSpec, opts: PsiOptions) -> Result<(Complex64, f64)> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("Ψ⁺ needs x > 0, got {x}")));
    }
    let m = tanh_or_sign(opts);
    let table = RadialTable::new(h, h.frequency() + TABLE_BAND, &m);
    let lnz = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let y = s * s;
        (y * c * c / (x + y)).ln()
    };
    let (breaks, lo, hi) = theta_breaks(lnz, table.band);
    let f = |theta: f64| {
        let lz = lnz(theta);
        if !(lz >= -table.band) {
            return ZERO;
        }
        let y = theta.sin().powi(2);
        table.cos_sin(lz).0 * (8.0 * PI / (1.0 + y / x).sqrt())
    };
    let tail = 8.0 * PI * (lo + hi) * table.cos_sin(-table.band).0.norm();
    let r = integrate_panels(f, &breaks, &outer_spec(quad, 8.0 * PI * table.scale()))?;
    Ok((r.value, r.abs_err + tail))
}

/// Ψ⁺ through the hypergeometric form
/// 4π ∫_0^∞ r h(r) tanh(πr) Re{Γ²(1/2+ir)/Γ(1+2ir) F(1/2+ir, 1/2+ir; 1+2ir; −1/x) x^{−ir}} dr.
pub fn psi_plus_hypergeometric(x: f64, h: &dyn Kernel, quad: &QuadratureSpec, opts: PsiOptions) -> Result<(Complex64, f64)> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("Ψ⁺ needs x > 0, got {x}")));
    }
    let m = tanh_or_sign(opts);
    let lx = x.ln();
    let failure = std::sync::Mutex::new(None::<Error>);
    let f = |r: f64| {
        let g = (|| -> Result<Complex64> {
            let a = log_gamma(Complex64::new(0.5, r))?;
            let b = log_gamma(Complex64::new(1.0, 2.0 * r))?;
            Ok((2.0 * a - b - I * (r * lx)).exp() * hyp2f1_central(r, x)?)
        })();
        match g {
            Ok(g) => h.at(r) * (4.0 * PI * r * m(r) * g.re),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                ZERO
            }
        }
    };
    let freq = h.frequency() + lx.abs() + 2.0;
    let r = integrate_panels(f, &super::transform::support_breaks(h, freq), quad)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok((r.value, r.abs_err))
}

/// Ψ⁺(x; h) from the double integral, checked against the hypergeometric
/// representation.
pub fn psi_plus(x: f64, h: &dyn Kernel, quad: &QuadratureSpec) -> Result<PsiValue> {
    psi_plus_with(x, h, quad, PsiOptions::default())
}

pub fn psi_plus_with(x: f64, h: &dyn Kernel, quad: &QuadratureSpec, opts: PsiOptions) -> Result<PsiValue> {
    let (a, ea) = psi_plus_double(x, h, quad, opts)?;
    let (b, eb) = psi_plus_hypergeometric(x, h, quad, opts)?;
    let floor = 1e-12 * 8.0 * PI * FRAC_PI_2 * mass(h, |_| 1.0);
    if !agree(a, ea, b, eb, floor, quad) {
        return Err(disagreement("Ψ⁺", x, a, b));
    }
    Ok(PsiValue { value: a, abs_err: ea + floor, check: b, check_err: eb + floor })
}

/// Ψ⁻ for x > 1 through
/// 2πi ∫_0^1 (y(1−y)(1−y/x))^{−1/2} ∫ r h(r)/cosh(πr) {y(1−y)/(x−y)}^{ir} dr dy.
pub fn psi_minus_double(x: f64, h: &dyn Kernel, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::domain(format!("this representation of Ψ⁻ needs x > 1, got {x}")));
    }
    let m = |r: f64| 1.0 / (PI * r).cosh();
    let table = RadialTable::new(h, h.frequency() + TABLE_BAND, m);
    let lnz = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let y = s * s;
        (y * c * c / (x - y)).ln()
    };
    let (breaks, lo, hi) = theta_breaks(lnz, table.band);
    let weight = |theta: f64| -8.0 * PI / (1.0 - theta.sin().powi(2) / x).sqrt();
    let f = |theta: f64| {
        let lz = lnz(theta);
        if !(lz >= -table.band) {
            return ZERO;
        }
        table.cos_sin(lz).1 * weight(theta)
    };
    let tail = (lo + hi) * weight(FRAC_PI_2).abs() * table.cos_sin(-table.band).1.norm();
    let r = integrate_panels(f, &breaks, &outer_spec(quad, weight(FRAC_PI_2).abs() * table.scale()))?;
    Ok((r.value, r.abs_err + tail))
}

/// Intervals of the real line carrying the mass of h on both sides of 0.
pub(crate) fn two_sided_breaks(h: &dyn Kernel, freq: f64) -> Vec<Vec<f64>> {
    let (a, b) = h.support();
    if b <= a {
        return Vec::new();
    }
    let w = (6.0 / freq.max(1.0)).min(2.0);
    if a <= 0.0 {
        vec![uniform_breaks(-b, b, w)]
    } else {
        vec![uniform_breaks(-b, -a, w), uniform_breaks(a, b, w)]
    }
}

/// The same Ψ⁻ with the inner r-line moved to Im r = −1:
/// ∫_ℝ = ∫_{ℝ−i} − 2πi Res_{r=−i/2}, Res = h(−i/2) Z^{1/2} / (2π).
pub fn psi_minus_shifted(x: f64, h: &dyn Kernel, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::domain(format!("this representation of Ψ⁻ needs x > 1, got {x}")));
    }
    if h.strip() <= 1.0 {
        return Err(Error::domain("kernel not regular up to Im r = −1"));
    }
    let h_res = h.eval(Complex64::new(0.0, -0.5));
    let phi = |u: f64| {
        let r = Complex64::new(u, -1.0);
        r * h.eval(r) / (PI * u).cosh()
    };
    let (gx, gw) = gauss_legendre(16);
    let band = h.frequency() + TABLE_BAND;
    let mut nodes = Vec::new();
    let mut vals = Vec::new();
    for br in two_sided_breaks(h, h.frequency() + band) {
        for p in br.windows(2) {
            let (c, hw) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (xg, w) in gx.iter().zip(&gw) {
                let u = c + hw * xg;
                nodes.push(u);
                vals.push(phi(u) * (w * hw));
            }
        }
    }
    let line = |lz: f64| {
        let mut acc = ZERO;
        for (u, v) in nodes.iter().zip(&vals) {
            acc += v * Complex64::from_polar(1.0, u * lz);
        }
        acc
    };
    let lnz = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let y = s * s;
        (y * c * c / (x - y)).ln()
    };
    let (breaks, _, _) = theta_breaks(lnz, band);
    let weight = |theta: f64| 4.0 * PI * I / (1.0 - theta.sin().powi(2) / x).sqrt();
    let scale: f64 = vals.iter().map(|v| v.norm()).sum();
    let f = |theta: f64| {
        let lz = lnz(theta);
        if lz == f64::NEG_INFINITY {
            return ZERO;
        }
        let z = lz.exp();
        // Past the band the line integral is below roundoff and carries a factor Z.
        let l = if lz >= -band { line(lz) * z } else { ZERO };
        (-l - I * h_res * z.sqrt()) * weight(theta)
    };
    let r = integrate_panels(f, &breaks, &outer_spec(quad, weight(FRAC_PI_2).norm() * scale))?;
    Ok((r.value, r.abs_err))
}

/// Secant and tangent of πs evaluated without overflow for large |Im s|.
pub(crate) fn sec_tan_pi(s: Complex64) -> (Complex64, Complex64) {
    // Work with e^{±2πis}, choosing the sign that makes it small.
    let sign = if s.im >= 0.0 { 1.0 } else { -1.0 };
    let e1 = (I * PI * s * sign).exp();
    let e2 = e1 * e1;
    let sec = 2.0 * e1 / (1.0 + e2);
    let tan = -I * (e2 - 1.0) / (e2 + 1.0) * sign;
    (sec, tan)
}

/// κ(z) = ∫_{(β)} z^s Γ²(1/2−s) / (Γ(1−2s) cos πs) ds on Re s = −3/4, ds = i dt.
pub fn kappa_mb(z: f64, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    const BETA: f64 = -0.75;
    const T_MAX: f64 = 16.0;
    let lz = z.ln();
    let failure = std::sync::Mutex::new(None::<Error>);
    let f = |t: f64| {
        let s = Complex64::new(BETA, t);
        let v = (|| -> Result<Complex64> {
            let lg = 2.0 * log_gamma(0.5 - s)? - log_gamma(1.0 - 2.0 * s)?;
            Ok((lg + s * lz).exp() * sec_tan_pi(s).0 * I)
        })();
        v.unwrap_or_else(|e| {
            failure.lock().unwrap().get_or_insert(e);
            ZERO
        })
    };
    let w = (3.0 / (1.0 + lz.abs())).min(1.0);
    let r = integrate_panels(f, &uniform_breaks(-T_MAX, T_MAX, w), quad)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok((r.value, r.abs_err))
}

/// κ(z) in closed form: −2i z^{−1/2} ∫_0^1 u(1−u)/(z + u(1−u)) du, which
/// the line integral in [`kappa_mb`] reduces to after writing the Γ-quotient
/// as a Beta integral.
pub fn kappa(z: f64) -> Result<Complex64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!("κ(z) needs z > 0, got {z}")));
    }
    let bracket = if z > 4.0 {
        // Σ (−1)^k B(k+2, k+2) z^{−k−1}
        let mut term = 1.0 / (6.0 * z);
        let mut sum = term;
        let mut k = 0.0;
        while term.abs() > 1e-17 * sum.abs() {
            term *= -(k + 2.0) / (2.0 * (2.0 * k + 5.0) * z);
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        let q = (1.0 + 4.0 * z).sqrt();
        // q − 1 = 4z/(q + 1) keeps tiny z accurate.
        1.0 - 2.0 * z / q * ((q + 1.0) / (2.0 * z)).ln_1p()
    };
    Ok(Complex64::new(0.0, -2.0 * bracket / z.sqrt()))
}

/// Ψ⁻ for 0 < x < 1 through the triple integral
/// ∫_0^∞ κ(x y(1+y)) (y(1+y))^{−1} ∫_ℝ r h(r) (y/(1+y))^{ir} dr dy, with y = e^v.
/// The r-line is moved to Im r = −1, which trades the y^{−1/2} growth of κ at
/// y → 0 for a factor y/(1+y).
pub fn psi_minus_triple(x: f64, h: &dyn Kernel, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("this representation of Ψ⁻ needs 0 < x < 1, got {x}")));
    }
    if h.strip() <= 1.0 {
        return Err(Error::domain("kernel not regular up to Im r = −1"));
    }
    let v_min = -(h.frequency() + 60.0);
    let v_max = 12.0;
    let band = -v_min + 1.0;
    let (gx, gw) = gauss_legendre(16);
    let mut nodes = Vec::new();
    let mut vals = Vec::new();
    for br in two_sided_breaks(h, band) {
        for p in br.windows(2) {
            let (c, hw) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (xg, w) in gx.iter().zip(&gw) {
                let u = c + hw * xg;
                let r = Complex64::new(u, -1.0);
                nodes.push(u);
                vals.push(r * h.eval(r) * (w * hw));
            }
        }
    }
    let failure = std::sync::Mutex::new(None::<Error>);
    let f = |v: f64| {
        let y = v.exp();
        let lam = -(1.0 / y).ln_1p();
        let mut line = ZERO;
        for (u, w) in nodes.iter().zip(&vals) {
            line += w * Complex64::from_polar(1.0, u * lam);
        }
        match kappa(x * y * (1.0 + y)) {
            Ok(k) => k * line * (y / ((1.0 + y) * (1.0 + y))),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                ZERO
            }
        }
    };
    // Largest |κ| y/(1+y)² over the range, times the table size, sets the
    // roundoff floor of the integrand.
    let envelope = (0..=400)
        .map(|i| {
            let y = (v_min + (v_max - v_min) * i as f64 / 400.0).exp();
            kappa(x * y * (1.0 + y)).map_or(0.0, |k| k.norm() * y / ((1.0 + y) * (1.0 + y)))
        })
        .fold(0.0, f64::max);
    let scale = vals.iter().map(|v| v.norm()).sum::<f64>() * envelope;
    let r = integrate_panels(f, &uniform_breaks(v_min, v_max, 0.5), &outer_spec(quad, scale))?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok((r.value, r.abs_err))
}

/// Ψ⁻(x; h) for x > 0, x ≠ 1. For x > 1 the direct and contour-shifted
/// double integrals are both evaluated and compared; for x < 1 the triple
/// integral is used and `check` repeats it at a tighter tolerance.
pub fn psi_minus(x: f64, h: &dyn Kernel, quad: &QuadratureSpec) -> Result<PsiValue> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("Ψ⁻ needs x > 0, got {x}")));
    }
    if x == 1.0 {
        return Err(Error::domain("Ψ⁻(1; h) needs a closed form not implemented here"));
    }
    if x > 1.0 {
        let (a, ea) = psi_minus_double(x, h, quad)?;
        let (b, eb) = psi_minus_shifted(x, h, quad)?;
        let floor = 1e-12 * 8.0 * PI * FRAC_PI_2 * mass(h, |r| 1.0 / (PI * r).cosh());
        if !agree(a, ea, b, eb, floor, quad) {
            return Err(disagreement("Ψ⁻", x, a, b));
        }
        return Ok(PsiValue { value: a, abs_err: ea + floor, check: b, check_err: eb + floor });
    }
    // The triple integral sits on the far side of the pole of sec(πs) at
    // s = −1/2; its residue is 2π h(−i/2) x^{−1/2}, zero for kernels that
    // vanish at ±i/2.
    let res = h.eval(Complex64::new(0.0, -0.5)) * (2.0 * PI / x.sqrt());
    let (a, ea) = psi_minus_triple(x, h, quad)?;
    let (b, eb) = psi_minus_triple(x, h, &quad.tighter_rel(1e-2))?;
    if !agree(a, ea, b, eb, 0.0, quad) {
        return Err(disagreement("Ψ⁻", x, a, b));
    }
    Ok(PsiValue { value: a + res, abs_err: ea, check: b + res, check_err: eb })
}
