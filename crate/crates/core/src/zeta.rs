//! ζ(s) near the critical line, the fourth moment and its smoothed variant,
//! and the smoothed approximate functional equation for |ζ(1/2+ir)|².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arithmetic::{sigma_power, DivisorTable};
use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, uniform_breaks, ComplexSum, QuadratureSpec, EULER_GAMMA};
use crate::report::ExpSumResult;
use crate::specfun::gamma::{log_gamma, BERNOULLI};
use crate::specfun::WeightParams;

/// Largest |t| accepted by `zeta_critical`.
pub const ZETA_T_MAX: f64 = 1e5;
/// Largest T accepted by the fourth-moment integrals.
pub const MOMENT_T_MAX: f64 = 5e3;
/// Euler–Maclaurin correction terms.
pub const EM_CORRECTIONS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    EulerMaclaurin,
    RiemannSiegel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaSample {
    pub t: f64,
    pub value: Complex64,
    pub method: ZetaMethod,
    pub err_bound: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ζ(s) for Re s > 0, s ≠ 1, by Euler–Maclaurin summation with `n` terms and
/// `m` corrections. Returns the value and a bound combining the remainder
/// estimate |s+2m+1|/(σ+2m+1)·|T_{m+1}| with a rounding estimate.
pub fn zeta_em(s: Complex64, n: usize, m: usize) -> Result<(Complex64, f64)> {
    if !(s.re > 0.0) {
        return Err(Error::domain("zeta_em needs Re s > 0"));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::domain("ζ has a pole at s = 1"));
    }
    if m + 1 > BERNOULLI.len() || n < 2 {
        return Err(Error::invalid("zeta_em: need n ≥ 2 and at most 9 corrections"));
    }
    let mut acc = ComplexSum::new();
    for k in 1..n {
        acc.add((-s * (k as f64).ln()).exp());
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    acc.add(n_s * nf / (s - 1.0));
    acc.add(n_s * 0.5);
    // T_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut poch = s;
    let mut npow = n_s / nf;
    let mut last = Complex64::new(0.0, 0.0);
    for j in 1..=m + 1 {
        let tj = poch * npow * (BERNOULLI[j - 1] / factorial(2 * j));
        if j <= m {
            acc.add(tj);
        } else {
            last = tj;
        }
        poch *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        npow /= nf * nf;
    }
    let sigma = s.re;
    let remainder = (s + (2 * m + 1) as f64).norm() / (sigma + (2 * m + 1) as f64) * last.norm();
    let harmonic = ln_n + EULER_GAMMA;
    let rounding = f64::EPSILON * (1.0 + s.im.abs() * ln_n) * (harmonic * nf.powf((1.0 - sigma).max(0.0))).sqrt();
    Ok((acc.value(), remainder + rounding))
}

/// ζ(1/2 + it) by Euler–Maclaurin with ⌈3|t|⌉ + 20 terms.
pub fn zeta_critical(t: f64) -> Result<ZetaSample> {
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    if t.abs() > ZETA_T_MAX {
        return Err(Error::resource(
            format!("|t| = {} exceeds the zeta ceiling {ZETA_T_MAX}", t.abs()),
            Some(t.abs().ceil() as u64),
        ));
    }
    let n = (3.0 * t.abs()).ceil() as usize + 20;
    let (v, err) = zeta_em(Complex64::new(0.5, t.abs()), n, EM_CORRECTIONS)?;
    let value = if t < 0.0 { v.conj() } else { v };
    Ok(ZetaSample { t, value, method: ZetaMethod::EulerMaclaurin, err_bound: err.max(f64::MIN_POSITIVE) })
}

/// θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(0.25, 0.5 * t))?.im - 0.5 * t * PI.ln())
}

/// ζ(1/2 + it) from the Riemann–Siegel formula with the first correction term,
/// for t ≥ 200. The bound is Gabcke's 0.127·(t/2π)^{−3/4}.
pub fn zeta_riemann_siegel(t: f64) -> Result<ZetaSample> {
    if !(t >= 200.0) {
        return Err(Error::domain("Riemann–Siegel path needs t ≥ 200"));
    }
    if t > ZETA_T_MAX {
        return Err(Error::resource(format!("t = {t} exceeds the zeta ceiling"), Some(t.ceil() as u64)));
    }
    let tau = t / (2.0 * PI);
    let a = tau.sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let theta = riemann_siegel_theta(t)?;
    let mut acc = ComplexSum::new();
    for k in 1..=n {
        let kf = k as f64;
        acc.add(Complex64::new(2.0 * (theta - t * kf.ln()).cos() / kf.sqrt(), 0.0));
    }
    let c0 = |p: f64| (2.0 * PI * (p * p - p - 1.0 / 16.0)).cos() / (2.0 * PI * p).cos();
    let c0v = if (2.0 * PI * p).cos().abs() < 1e-6 {
        0.5 * (c0(p - 1e-4) + c0(p + 1e-4))
    } else {
        c0(p)
    };
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let z = acc.value().re + sign * tau.powf(-0.25) * c0v;
    Ok(ZetaSample {
        t,
        value: Complex64::from_polar(z, -theta),
        method: ZetaMethod::RiemannSiegel,
        err_bound: 0.127 * tau.powf(-0.75),
    })
}

/// ζ(1 + 2ir), r ≠ 0.
pub fn zeta_one_line(r: f64) -> Result<Complex64> {
    if r == 0.0 {
        return Err(Error::domain("ζ(1+2ir) has a pole at r = 0"));
    }
    if !r.is_finite() || 2.0 * r.abs() > ZETA_T_MAX {
        return Err(Error::resource("r beyond the zeta ceiling", None));
    }
    let n = (6.0 * r.abs()).ceil() as usize + 20;
    let (v, _) = zeta_em(Complex64::new(1.0, 2.0 * r.abs()), n, EM_CORRECTIONS)?;
    let cap = 20.0 * (2.0 * r.abs() + 2.0).ln();
    if 1.0 / v.norm() > cap {
        return Err(Error::numeric(format!("|1/ζ(1+2ir)| exceeds {cap} at r = {r}"), 1.0 / v.norm()));
    }
    Ok(if r < 0.0 { v.conj() } else { v })
}

/// ζ′(2) by complex-step differentiation of the Euler–Maclaurin sum.
pub fn zeta_prime_two() -> f64 {
    let h = 1e-30;
    let (v, _) = zeta_em(Complex64::new(2.0, h), 200, EM_CORRECTIONS).expect("fixed valid arguments");
    v.im / h
}

/// Coefficients of P₄(x) = Σ a_j x^j in ∫_0^T |ζ|⁴ = T P₄(log T) + E₂(T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCoefficients {
    pub a4: f64,
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    /// Where a2, a1, a0 came from; "unset" when they are zero placeholders.
    pub provenance: String,
}

impl Default for MomentCoefficients {
    fn default() -> Self {
        let a4 = 1.0 / (2.0 * PI * PI);
        let a3 = 2.0 * (4.0 * EULER_GAMMA - 1.0 - (2.0 * PI).ln() - 12.0 * zeta_prime_two() / (PI * PI)) / (PI * PI);
        Self { a4, a3, a2: 0.0, a1: 0.0, a0: 0.0, provenance: "unset".into() }
    }
}

impl MomentCoefficients {
    pub fn with_lower(a2: f64, a1: f64, a0: f64, provenance: impl Into<String>) -> Self {
        Self { a2, a1, a0, provenance: provenance.into(), ..Self::default() }
    }

    pub fn p4(&self, x: f64) -> f64 {
        (((self.a4 * x + self.a3) * x + self.a2) * x + self.a1) * x + self.a0
    }
}

fn zeta4(t: f64) -> Complex64 {
    match zeta_critical(t) {
        Ok(z) => Complex64::new(z.value.norm_sqr().powi(2), 0.0),
        Err(_) => Complex64::new(f64::NAN, 0.0),
    }
}

/// ∫_a^b |ζ(1/2+it)|⁴ dt on unit panels.
pub fn fourth_moment_between(a: f64, b: f64, quad: &QuadratureSpec) -> Result<ExpSumResult> {
    quad.validate()?;
    if !(a >= 0.0 && b >= a) {
        return Err(Error::invalid(format!("need 0 ≤ a ≤ b, got [{a}, {b}]")));
    }
    if b > MOMENT_T_MAX {
        return Err(Error::resource(format!("T = {b} exceeds the moment ceiling {MOMENT_T_MAX}"), Some(b.ceil() as u64)));
    }
    if a == b {
        return Ok(ExpSumResult::zero());
    }
    let breaks = unit_breaks(a, b);
    let res = integrate_panels(|t| zeta4(t), &breaks, quad)?;
    Ok(ExpSumResult::real(res.value.re, res.abs_err, res.evals as u64)
        .with_meta("range", format!("[{a}, {b}]"))
        .with_meta("panels", breaks.len() - 1))
}

/// Breakpoints at the integers inside (a, b), so that results over adjacent
/// ranges share panels.
fn unit_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut v = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        v.push(k);
        k += 1.0;
    }
    v.push(b);
    v
}

/// ∫_0^T |ζ(1/2+it)|⁴ dt.
pub fn fourth_moment(t: f64, quad: &QuadratureSpec) -> Result<ExpSumResult> {
    fourth_moment_between(0.0, t, quad)
}

/// E₂(T) = ∫_0^T |ζ|⁴ − T P₄(log T).
pub fn e2(t: f64, coeffs: &MomentCoefficients, quad: &QuadratureSpec) -> Result<f64> {
    let m = fourth_moment(t, quad)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(m.value.re - t * coeffs.p4(t.ln()))
}

/// (1/(√π G)) ∫ |ζ(1/2+iT+it)|⁴ e^{−(t/G)²} dt over |t| ≤ G√(log(1/tol)).
pub fn smoothed_fourth_moment(t: f64, g: f64, quad: &QuadratureSpec) -> Result<ExpSumResult> {
    quad.validate()?;
    if !(g > 0.0) {
        return Err(Error::invalid("G must be positive"));
    }
    let tol = quad.rel_tol.clamp(1e-300, 1e-3);
    let w = g * (1.0 / tol).ln().sqrt();
    if t.abs() + w > ZETA_T_MAX {
        return Err(Error::resource("smoothing window exceeds the zeta ceiling", None));
    }
    let breaks = uniform_breaks(-w, w, g.min(4.0) / 4.0);
    let norm = 1.0 / (PI.sqrt() * g);
    let res = integrate_panels(|u| zeta4(t + u) * (-(u / g).powi(2)).exp(), &breaks, quad)?;
    Ok(ExpSumResult::real(norm * res.value.re, norm * res.abs_err, res.evals as u64)
        .with_meta("window", w))
}

/// Σ_{f≤3K} σ_{2ir}(f) f^{−1/2−ir}.
pub fn sigma_zeta_partial(r: f64, k: f64, table: &DivisorTable) -> Result<Complex64> {
    let top = (3.0 * k).floor().max(0.0) as usize;
    if top == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    table.require(top)?;
    let a = Complex64::new(0.0, 2.0 * r);
    let mut acc = ComplexSum::new();
    for f in 1..=top {
        let ff = f as f64;
        acc.add(sigma_power(table, f, a)? * Complex64::new(-0.5, -r).scale(ff.ln()).exp());
    }
    Ok(acc.value())
}

/// (Y, h, M) of the smoothed approximate functional equation at height k:
/// Y = (1+δ)k²/(4π²), h = C log k, M = ⌊(1+δ)Y⌋.
pub fn lemma2_window(k: f64, delta: f64, c: f64) -> (f64, f64, usize) {
    let y = (1.0 + delta) * k * k / (4.0 * PI * PI);
    let h = c * k.ln();
    (y, h, ((1.0 + delta) * y).floor() as usize)
}

/// Σ_{m≤(1+δ)Y} σ_{2ir}(m) m^{−1/2−ir} e^{−(m/Y)^h}, an approximation to
/// |ζ(1/2+ir)|² for |r| ≥ 5.
pub fn approx_zeta_square(r: f64, params: &WeightParams, table: &DivisorTable) -> Result<f64> {
    if !(r.abs() >= 5.0) {
        return Err(Error::domain(format!("approx_zeta_square needs |r| ≥ 5, got {r}")));
    }
    let (y, h, m) = lemma2_window(r.abs(), params.delta, params.c_lemma2);
    table.require(m)?;
    let a = Complex64::new(0.0, 2.0 * r);
    let mut acc = ComplexSum::new();
    let mut abs = 0.0;
    for n in 1..=m {
        let nf = n as f64;
        let term = sigma_power(table, n, a)? * Complex64::new(-0.5, -r).scale(nf.ln()).exp() * (-(nf / y).powf(h)).exp();
        abs += term.norm();
        acc.add(term);
    }
    let v = acc.value();
    if v.im.abs() > 1e-9 * abs.max(1.0) {
        return Err(Error::numeric("approx_zeta_square: imaginary part above tolerance", v.im));
    }
    Ok(v.re)
}
