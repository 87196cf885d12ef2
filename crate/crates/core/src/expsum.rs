//! Spectral exponential sums and their arithmetic counterparts.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::DivisorTable;
use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, sum_complex, sum_f64, uniform_breaks, ComplexSum, QuadratureSpec};
use crate::report::{ComparisonReport, ExpSumResult};
use crate::spectral_data::{hecke_central_value, SpectralDataset};
use crate::specfun::WeightParams;
use crate::zeta::{smoothed_fourth_moment, MomentCoefficients};

/// A discrete-spectrum point with its central value H_j(1/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub kappa: f64,
    pub alpha: f64,
    pub h_half: f64,
}

/// Unspecified constants of Theorem 1 and (5.24).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermConsts {
    pub c1: f64,
    pub c2: f64,
    pub c0: f64,
}

impl Default for MainTermConsts {
    fn default() -> Self {
        Self { c1: 1.0, c2: 4.0, c0: 1.0 }
    }
}

impl MainTermConsts {
    fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c2 > self.c1 && self.c0.is_finite()) {
            return Err(Error::invalid(format!("need 0 < C1 < C2, got C1 = {}, C2 = {}", self.c1, self.c2)));
        }
        Ok(())
    }
}

fn check_power(m: u8) -> Result<i32> {
    if !(1..=3).contains(&m) {
        return Err(Error::invalid(format!("power m must be 1, 2 or 3, got {m}")));
    }
    Ok(m as i32)
}

fn require_complete(ds: &SpectralDataset, kappa: f64, what: &str) -> Result<()> {
    if !ds.is_complete_to(kappa) {
        return Err(Error::validation(format!(
            "{what} needs a dataset complete to κ = {kappa}; it claims {:?}",
            ds.complete_up_to
        )));
    }
    Ok(())
}

/// Central values for the forms with lo < κ ≤ hi, by the Lemma 2 sum.
pub fn spectral_points(ds: &SpectralDataset, lo: f64, hi: f64, params: &WeightParams) -> Result<Vec<SpectralPoint>> {
    let forms: Vec<_> = ds.window(lo, hi).collect();
    let pts: Vec<Result<SpectralPoint>> = forms
        .par_iter()
        .map(|f| Ok(SpectralPoint { kappa: f.kappa, alpha: f.alpha, h_half: hecke_central_value(f, params)? }))
        .collect();
    pts.into_iter().collect()
}

fn window_check(k: f64, k2: f64) -> Result<()> {
    if !(k > 0.0 && k < k2 && k2 <= 2.0 * k) {
        return Err(Error::invalid(format!("need 0 < K < K′ ≤ 2K, got K = {k}, K′ = {k2}")));
    }
    Ok(())
}

/// S_m(K;K′,t) = Σ_{K<κ≤K′} α H^m cos(κ log(4et/κ)) over given points.
pub fn spectral_s_m_points(points: &[SpectralPoint], m: u8, k: f64, k2: f64, t: f64) -> Result<ExpSumResult> {
    let p = check_power(m)?;
    window_check(k, k2)?;
    if !(t > 0.0) {
        return Err(Error::invalid("t must be positive"));
    }
    let terms: Vec<f64> = points
        .iter()
        .filter(|q| q.kappa > k && q.kappa <= k2)
        .map(|q| q.alpha * q.h_half.powi(p) * (q.kappa * (4.0 * E * t / q.kappa).ln()).cos())
        .collect();
    let abs: f64 = terms.iter().map(|v| v.abs()).sum();
    Ok(ExpSumResult::real(sum_f64(terms.iter().copied()), 4.0 * f64::EPSILON * abs, terms.len() as u64)
        .with_meta("window", format!("({k}, {k2}]"))
        .with_meta("m", m))
}

/// S_m(K;K′,t) from a dataset complete to K′.
pub fn spectral_s_m(ds: &SpectralDataset, m: u8, k: f64, k2: f64, t: f64, params: &WeightParams) -> Result<ExpSumResult> {
    check_power(m)?;
    window_check(k, k2)?;
    require_complete(ds, k2, "S_m")?;
    let pts = spectral_points(ds, k, k2, params)?;
    spectral_s_m_points(&pts, m, k, k2, t).map(|r| r.with_meta("central_values", "Lemma 2 sum"))
}

/// T·c0·Re Σ_{f≤3K} f^{1/2} Σ_{C1Tf/K ≤ m ≤ C2Tf/K} m^{−3/2} d(m)d(m+f) e^{iTf/m}.
pub fn divisor_side_main(k: f64, t: f64, consts: &MainTermConsts, table: &DivisorTable) -> Result<ExpSumResult> {
    consts.validate()?;
    if !(k > 0.0 && t > 0.0) {
        return Err(Error::invalid("K and T must be positive"));
    }
    let top = (3.0 * k).floor() as usize;
    let omitted = "phi_l corrections for l >= 1";
    if top == 0 {
        return Ok(ExpSumResult::zero().with_meta("omitted", omitted));
    }
    let range = |f: usize| {
        let ff = f as f64;
        ((consts.c1 * t * ff / k).ceil().max(1.0) as usize, (consts.c2 * t * ff / k).floor() as usize)
    };
    let need = range(top).1 + top;
    table.require(need)?;
    let rows: Vec<(Complex64, f64, u64)> = (1..=top)
        .into_par_iter()
        .map(|f| {
            let (lo, hi) = range(f);
            let mut acc = ComplexSum::new();
            let mut abs = 0.0;
            for m in lo..=hi {
                let mf = m as f64;
                let w = (table.d(m) * table.d(m + f)) as f64 / (mf * mf.sqrt());
                acc.add(Complex64::from_polar(w, t * f as f64 / mf));
                abs += w;
            }
            let s = (f as f64).sqrt();
            (acc.value() * s, abs * s, (hi + 1).saturating_sub(lo) as u64)
        })
        .collect();
    let total = sum_complex(rows.iter().map(|r| r.0)) * (t * consts.c0);
    let trivial = sum_f64(rows.iter().map(|r| r.1)) * t * consts.c0.abs();
    let terms = rows.iter().map(|r| r.2).sum();
    Ok(ExpSumResult::real(total.re, 8.0 * f64::EPSILON * trivial, terms)
        .with_meta("omitted", omitted)
        .with_meta("trivial_bound", trivial)
        .with_meta("envelope", t.sqrt() * k.powf(1.5))
        .with_meta("consts", format!("C1={} C2={} c0={}", consts.c1, consts.c2, consts.c0)))
}

/// T·Σ_{C1T/K ≤ m ≤ C2T/K} m^{−3/2} d(m)d(m+1) e^{iT/m}, reported against
/// T^{1/2}K^{1/2} (m_exp = 2) or T^{1/2}K^{1/4} (m_exp = 1).
pub fn theorem2_rhs(m_exp: u8, k: f64, t: f64, consts: &MainTermConsts, table: &DivisorTable) -> Result<ExpSumResult> {
    consts.validate()?;
    if m_exp != 1 && m_exp != 2 {
        return Err(Error::invalid(format!("Theorem 2 covers H and H², got power {m_exp}")));
    }
    if !(k > 0.0 && t > 0.0) {
        return Err(Error::invalid("K and T must be positive"));
    }
    let lo = (consts.c1 * t / k).ceil().max(1.0) as usize;
    let hi = (consts.c2 * t / k).floor() as usize;
    let envelope = t.sqrt() * k.powf(if m_exp == 2 { 0.5 } else { 0.25 });
    if hi < lo {
        return Ok(ExpSumResult::zero().with_meta("envelope", envelope));
    }
    table.require(hi + 1)?;
    let term = |m: usize| {
        let mf = m as f64;
        ((table.d(m) * table.d(m + 1)) as f64 / (mf * mf.sqrt()), t / mf)
    };
    let mut acc = ComplexSum::new();
    let mut abs = 0.0;
    for m in lo..=hi {
        let (w, ph) = term(m);
        acc.add(Complex64::from_polar(w, ph));
        abs += w;
    }
    let v = acc.value() * t;
    Ok(ExpSumResult::new(v, 8.0 * f64::EPSILON * abs * t, (hi - lo + 1) as u64)
        .with_meta("trivial_bound", abs * t)
        .with_meta("envelope", envelope)
        .with_meta("ratio", v.norm() / envelope))
}

/// S(T,Δ) = π√(T/2) Σ α H³ κ^{−3/2} cos(κ log(κ/(4eT))) e^{−(Δκ/T)²/4}, over
/// κ ≤ TΔ^{−1} log T.
pub fn s_t_delta_points(points: &[SpectralPoint], t: f64, delta: f64) -> Result<ExpSumResult> {
    if !(t > 1.0 && delta > 0.0) {
        return Err(Error::invalid("need T > 1 and Δ > 0"));
    }
    let cut = s_t_delta_cutoff(t, delta);
    let terms: Vec<f64> = points
        .iter()
        .filter(|p| p.kappa <= cut)
        .map(|p| {
            let g = (-0.25 * (delta * p.kappa / t).powi(2)).exp();
            p.alpha * p.h_half.powi(3) * p.kappa.powf(-1.5) * (p.kappa * (p.kappa / (4.0 * E * t)).ln()).cos() * g
        })
        .collect();
    let pref = PI * (0.5 * t).sqrt();
    let abs: f64 = terms.iter().map(|v| v.abs()).sum();
    Ok(ExpSumResult::real(pref * sum_f64(terms.iter().copied()), 4.0 * f64::EPSILON * pref * abs, terms.len() as u64)
        .with_meta("cutoff", cut)
        .with_meta("gauss_at_cutoff", (-0.25 * (delta * cut / t).powi(2)).exp()))
}

pub fn s_t_delta_cutoff(t: f64, delta: f64) -> f64 {
    t / delta * t.ln()
}

pub fn s_t_delta(ds: &SpectralDataset, t: f64, delta: f64, params: &WeightParams) -> Result<ExpSumResult> {
    if !(t > 1.0 && delta > 0.0) {
        return Err(Error::invalid("need T > 1 and Δ > 0"));
    }
    let cut = s_t_delta_cutoff(t, delta);
    require_complete(ds, cut, "S(T,Δ)")?;
    s_t_delta_points(&spectral_points(ds, 0.0, cut, params)?, t, delta)
}

/// Smooth ramp 0 → 1 on [0, 1] built from e^{−1/u}.
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

/// φ(t): 1 on [T, 2T], 0 outside [T/2, 5T/2], C^∞ ramps in between.
pub fn smooth_bump(t: f64, big_t: f64) -> f64 {
    if !(big_t > 0.0) {
        return f64::NAN;
    }
    let u = t / big_t;
    if u <= 1.0 {
        smooth_step(2.0 * (u - 0.5))
    } else {
        smooth_step(2.0 * (2.5 - u))
    }
}

/// ∫ S_m(K;K′,t)² dt over [T, 2T], or φ(t)-weighted over [T/2, 5T/2].
pub fn mean_square_s_points(
    points: &[SpectralPoint],
    m: u8,
    k: f64,
    k2: f64,
    t: f64,
    quad: &QuadratureSpec,
    bump: bool,
) -> Result<ExpSumResult> {
    let p = check_power(m)?;
    window_check(k, k2)?;
    if !(t > 0.0) {
        return Err(Error::invalid("T must be positive"));
    }
    let pts: Vec<(f64, f64, f64)> = points
        .iter()
        .filter(|q| q.kappa > k && q.kappa <= k2)
        .map(|q| (q.kappa, q.alpha * q.h_half.powi(p), q.kappa * (4.0 * E / q.kappa).ln()))
        .collect();
    let (a, b) = if bump { (0.5 * t, 2.5 * t) } else { (t, 2.0 * t) };
    if pts.is_empty() {
        return Ok(ExpSumResult::zero());
    }
    let s = |u: f64| sum_f64(pts.iter().map(|&(kap, w, c)| w * (c + kap * u.ln()).cos()));
    let step = 2.0 * PI * a / k2 / 16.0;
    let breaks = uniform_breaks(a, b, step);
    let r = integrate_panels(
        |u| {
            let v = s(u);
            let phi = if bump { smooth_bump(u, t) } else { 1.0 };
            Complex64::new(phi * v * v, 0.0)
        },
        &breaks,
        quad,
    )?;
    Ok(ExpSumResult::real(r.value.re, r.abs_err, pts.len() as u64)
        .with_meta("range", format!("[{a}, {b}]"))
        .with_meta("envelope", t * k.powi(3))
        .with_meta("bump", bump))
}

pub fn mean_square_s(
    ds: &SpectralDataset,
    m: u8,
    k: f64,
    k2: f64,
    t: f64,
    params: &WeightParams,
    quad: &QuadratureSpec,
    bump: bool,
) -> Result<ExpSumResult> {
    check_power(m)?;
    window_check(k, k2)?;
    require_complete(ds, k2, "mean square of S_m")?;
    mean_square_s_points(&spectral_points(ds, k, k2, params)?, m, k, k2, t, quad, bump)
}

/// Options for [`moment_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheckOptions {
    /// D of the admissible G-range and of the log^{3D+9} T envelope.
    pub d: f64,
    /// The verdict tests |lhs − rhs| ≤ slack · envelope.
    pub slack: f64,
    /// Gaussian factor below which the spectral sum is cut.
    pub tol: f64,
    pub coeffs: MomentCoefficients,
}

impl Default for MomentCheckOptions {
    fn default() -> Self {
        Self { d: 1.0, slack: 1.0, tol: 1e-12, coeffs: MomentCoefficients::default() }
    }
}

/// Smoothed fourth moment against the main term P₄(log T) + P₄′(log T) plus
/// π/√(2T) Σ α H³ κ^{−1/2} sin(κ log(κ/4eT)) e^{−(Gκ/T)²/4}.
pub fn moment_check(
    ds: &SpectralDataset,
    t: f64,
    g: f64,
    params: &WeightParams,
    opts: &MomentCheckOptions,
    quad: &QuadratureSpec,
) -> Result<ComparisonReport> {
    if !(t > 1.0 && g > 0.0) {
        return Err(Error::invalid("need T > 1 and G > 0"));
    }
    let l = t.ln();
    let cut = 2.0 * t / g * (1.0 / opts.tol).ln().sqrt();
    let complete = ds.is_complete_to(cut);
    let lhs = smoothed_fourth_moment(t, g, quad)?;
    let c = &opts.coeffs;
    let dp4 = ((4.0 * c.a4 * l + 3.0 * c.a3) * l + 2.0 * c.a2) * l + c.a1;
    let main = c.p4(l) + dp4;
    let pts = spectral_points(ds, 0.0, cut, params)?;
    let spec = sum_f64(pts.iter().map(|p| {
        p.alpha
            * p.h_half.powi(3)
            * p.kappa.powf(-0.5)
            * (p.kappa * (p.kappa / (4.0 * E * t)).ln()).sin()
            * (-0.25 * (g * p.kappa / t).powi(2)).exp()
    })) * PI
        / (2.0 * t).sqrt();
    let envelope = l.powf(3.0 * opts.d + 9.0);
    let mut rep = ComparisonReport::new(lhs.value.re, main + spec, envelope, opts.slack, !complete);
    if !complete {
        rep.notes.push(format!("dataset not complete to κ = {cut:.1}; spectral sum is partial"));
    }
    if !(t.sqrt() / l.powf(opts.d) <= g && g <= t / l) {
        rep.notes.push(format!("G = {g} outside the advisory range [T^(1/2) log^(-D) T, T/log T]"));
    }
    if c.provenance == "unset" {
        rep.notes.push("a2, a1, a0 unset: main term uses a4, a3 only".to_string());
    }
    rep.notes.push(format!("spectral terms: {}, spectral sum {spec:e}", pts.len()));
    Ok(rep)
}
