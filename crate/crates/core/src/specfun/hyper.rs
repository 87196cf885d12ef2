//! F(1/2+ir, 1/2+ir; 1+2ir; −1/x) and its large-r asymptotics.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HYP_TOL: f64 = 1e-14;
pub const HYP_MAX_TERMS: usize = 500;

/// Plain Gauss series Σ (a)_k (b)_k / ((c)_k k!) z^k for |z| < 1.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, z: Complex64, tol: f64, max_terms: usize) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain("Gauss series needs |z| < 1"));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() <= tol * sum.norm().max(1e-300) && k > 2 {
            return Ok(sum);
        }
    }
    Err(Error::NumericFailure {
        message: format!("Gauss series did not converge in {max_terms} terms"),
        residual: term.norm(),
        partial: Some(sum.re),
    })
}

pub fn hyp2f1_central(r: f64, x: f64) -> Result<Complex64> {
    hyp2f1_central_with(r, x, HYP_TOL, HYP_MAX_TERMS)
}

/// F(a, a; 2a; −1/x), a = 1/2 + ir, through the quadratic transformation
///
/// F(a, a; 2a; z) = ((1+√(1−z))/2)^{−2a} F(a, 1/2; a+1/2; w²),
/// w = (1−√(1−z))/(1+√(1−z)),
///
/// and the power series in w², stopped once the geometric tail bound
/// |t_{k+1}|/(1−w²) drops below `tol`.
pub fn hyp2f1_central_with(r: f64, x: f64, tol: f64, max_terms: usize) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("hyp2f1_central needs finite x > 0, got {x}")));
    }
    let a = Complex64::new(0.5, r);
    let root = (1.0 + 1.0 / x).sqrt();
    let w = (1.0 - root) / (1.0 + root);
    let w2 = w * w;
    let pref = (-2.0 * a * (0.5 * (1.0 + root)).ln()).exp();
    let c = a + 0.5;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (0.5 + kf) / ((c + kf) * (kf + 1.0)) * w2;
        sum += term;
        // |a+k| ≤ |c+k| and (k+1/2)/(k+1) < 1, so the ratio of later terms is below w².
        if term.norm() * w2 / (1.0 - w2) <= tol {
            return Ok(pref * sum);
        }
    }
    Err(Error::NumericFailure {
        message: format!("hyp2f1_central: no convergence in {max_terms} terms (r={r}, x={x})"),
        residual: term.norm() / (1.0 - w2),
        partial: Some((pref * sum).re),
    })
}

/// Two-term asymptotics of F(1/2+ir, 1/2+ir; 1+2ir; −1/y²) for r → ∞:
///
/// (2y)^{2ir} (y+√(1+y²))^{−2ir} (y²/(1+y²))^{1/4} · (1 − (Q − 1)/(8ir)),
/// Q = (2y²+1)/(2y√(1+y²)).
///
/// Valid for y ≥ 2, r ≥ 30.
pub fn hyp_asymptotic(r: f64, y: f64) -> Result<Complex64> {
    if !(y >= 2.0 && r >= 30.0) {
        return Err(Error::domain(format!("hyp_asymptotic valid for y ≥ 2, r ≥ 30 (got y={y}, r={r})")));
    }
    let s = (1.0 + y * y).sqrt();
    let phase = 2.0 * r * ((2.0 * y).ln() - (y + s).ln());
    let modulus = (y * y / (1.0 + y * y)).powf(0.25);
    let q = (2.0 * y * y + 1.0) / (2.0 * y * s);
    let corr = Complex64::new(1.0, 0.0) - (q - 1.0) / Complex64::new(0.0, 8.0 * r);
    Ok(Complex64::from_polar(modulus, phase) * corr)
}
