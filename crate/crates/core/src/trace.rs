//! Two-sided evaluation of the first Bruggeman–Kuznetsov trace formula
//!
//! Σ_j α_j t_j(m)t_j(n) f(κ_j) + (1/π)∫ σ_{2ir}(m)σ_{2ir}(n)(mn)^{−ir}|ζ(1+2ir)|^{−2} f(r) dr
//!   = π^{−2} δ_{m,n} ∫ r tanh(πr) f(r) dr + Σ_ℓ ℓ^{−1} S(m,n;ℓ) f₊(4π√(mn)/ℓ).

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{build_divisor_table, gcd, kloosterman, sigma_twisted, DivisorTable};
use crate::error::{Error, Result};
use crate::motohashi::Kernel;
use crate::numeric::{integrate_panels, sum_f64, uniform_breaks, QuadratureSpec};
use crate::spectral_data::{SpectralDataset, FIRST_CUSP_KAPPA};
use crate::specfun::bessel::BESSEL_MAX_X;
use crate::specfun::{bessel_j_difference_integral, bessel_j_imag_order, log_gamma};
use crate::zeta::zeta_one_line;

pub const DEFAULT_L_CAP: u64 = 500;
/// Largest tolerated |Im f₊| relative to max(1, |Re f₊|).
pub const IMAG_RESIDUE: f64 = 1e-8;
/// Upper end of the u-range in the integral path; the discarded tail is
/// O(e^{−U}).
const U_MAX: f64 = 40.0;
const PANEL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCaps {
    pub l_cap: u64,
    /// Absolute tolerance on the bound for the unseen discrete spectrum.
    pub tol: f64,
    /// Upper end of the r-integrals; defaults to the kernel's support.
    pub r_window: Option<f64>,
}

impl Default for TraceCaps {
    fn default() -> Self {
        Self { l_cap: DEFAULT_L_CAP, tol: 1e-6, r_window: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceTruncation {
    pub l_cap: u64,
    pub r_window: f64,
    pub dataset_cutoff: Option<f64>,
    pub forms_used: usize,
    /// Majorant for forms above the completeness cutoff.
    pub discrete_tail_bound: f64,
    /// Weil-bound majorant for Σ_{ℓ > l_cap}.
    pub kloosterman_tail_bound: f64,
    /// Quadrature and Bessel error summed over both sides.
    pub numeric_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub m: u64,
    pub n: u64,
    pub discrete: f64,
    pub continuous: f64,
    pub delta_term: f64,
    pub kloosterman_sum: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub truncation: TraceTruncation,
    /// Empty when the discrete tail bound is within `caps.tol`.
    pub flags: Vec<String>,
}

impl TraceReport {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.lhs.abs().max(self.rhs.abs()).max(f64::MIN_POSITIVE)
    }

    /// Total of the truncation bounds and numeric errors.
    pub fn error_budget(&self) -> f64 {
        let t = &self.truncation;
        t.discrete_tail_bound + t.kloosterman_tail_bound + t.numeric_err
    }

    pub fn is_complete(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::validation(self.flags.join("; ")))
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!("f₊ needs x > 0, got {x}")));
    }
    if x > BESSEL_MAX_X {
        return Err(Error::domain(format!("f₊ uses the Bessel series, valid for x ≤ {BESSEL_MAX_X}; got {x}")));
    }
    Ok(())
}

fn window(f: &dyn Kernel, caps: Option<&TraceCaps>) -> f64 {
    caps.and_then(|c| c.r_window).unwrap_or_else(|| f.support().1)
}

/// ∫_0^b g(r) dr over panels of width 1/2, where g may fail.
fn half_line<G>(g: G, b: f64, quad: &QuadratureSpec) -> Result<(Complex64, f64)>
where
    G: Fn(f64) -> Result<(Complex64, f64)> + Sync,
{
    if b <= 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let failure = Mutex::new(None::<Error>);
    let worst = Mutex::new(0.0f64);
    let r = integrate_panels(
        |r| match g(r) {
            Ok((v, e)) => {
                if e > 0.0 {
                    let mut w = worst.lock().unwrap();
                    *w = w.max(e);
                }
                v
            }
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &uniform_breaks(0.0, b, PANEL),
        quad,
    )?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    // Pointwise errors are integrated with a step bound: max over the sampled
    // nodes times the length.
    let pointwise = worst.into_inner().unwrap() * b;
    Ok((r.value, r.abs_err + pointwise))
}

fn real_part(v: Complex64, what: &str) -> Result<f64> {
    if v.im.abs() > IMAG_RESIDUE * v.re.abs().max(1.0) {
        return Err(Error::numeric(format!("{what} is not real: {v}"), v.im.abs()));
    }
    Ok(v.re)
}

/// f₊(x) = (2i/π) ∫ r/cosh(πr) J_{2ir}(x) f(r) dr from the power series, folded
/// onto r ≥ 0. Returns the value and its error bound.
pub fn f_plus_series(f: &dyn Kernel, x: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    check_x(x)?;
    let g = |r: f64| -> Result<(Complex64, f64)> {
        let a = bessel_j_imag_order(r, x)?;
        let b = bessel_j_imag_order(-r, x)?;
        let w = r / (PI * r).cosh();
        let (fp, fm) = (f.at(r), f.at(-r));
        let v = (a.value * fp - b.value * fm) * w;
        Ok((v, w * (a.err * fp.norm() + b.err * fm.norm())))
    };
    let (v, e) = half_line(g, window(f, None), quad)?;
    let v = v * Complex64::new(0.0, 2.0 / PI);
    Ok((real_part(v, "f₊")?, 2.0 / PI * e))
}

pub fn f_plus(f: &dyn Kernel, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    f_plus_series(f, x, quad).map(|p| p.0)
}

/// f₊ through the cos(x cosh u) cos(2ru) integral for J_{2ir} − J_{−2ir};
/// needs an even kernel.
pub fn f_plus_integral(f: &dyn Kernel, x: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    check_x(x)?;
    let g = |r: f64| -> Result<(Complex64, f64)> {
        if r == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let d = bessel_j_difference_integral(r, x, U_MAX, quad)?;
        let w = r / (PI * r).cosh();
        let fr = f.at(r);
        // |∫_U^∞ cos(x cosh u) cos(2ru) du| ≲ (1 + 2r)/(x sinh U), scaled by
        // (4/π) tanh(πr).
        let tail = 4.0 / PI * (1.0 + 2.0 * r) / (x * U_MAX.sinh());
        Ok((d.value * fr * w, (w * d.quad_err + r * tail) * fr.norm()))
    };
    let (v, e) = half_line(g, window(f, None), quad)?;
    let v = v * Complex64::new(0.0, 2.0 / PI);
    Ok((real_part(v, "f₊")?, 2.0 / PI * e))
}

/// (1/π) ∫ σ_{2ir}(m)σ_{2ir}(n)(mn)^{−ir} |ζ(1+2ir)|^{−2} f(r) dr.
pub fn continuous_term(table: &DivisorTable, m: u64, n: u64, f: &dyn Kernel, b: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let g = |r: f64| -> Result<(Complex64, f64)> {
        if r == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let s = sigma_twisted(table, m as usize, r)? * sigma_twisted(table, n as usize, r)?;
        let z = zeta_one_line(r)?.norm_sqr();
        Ok(((f.at(r) + f.at(-r)) * (s / z), 0.0))
    };
    let (v, e) = half_line(g, b, quad)?;
    Ok((real_part(v / PI, "continuous term")?, e / PI))
}

/// (1/π²) ∫ r tanh(πr) f(r) dr, or with sgn(r) in place of tanh(πr).
pub fn delta_integral(f: &dyn Kernel, b: f64, quad: &QuadratureSpec, sign_for_tanh: bool) -> Result<(f64, f64)> {
    let g = |r: f64| -> Result<(Complex64, f64)> {
        let t = if sign_for_tanh { 1.0 } else { (PI * r).tanh() };
        Ok(((f.at(r) + f.at(-r)) * (r * t), 0.0))
    };
    let (v, e) = half_line(g, b, quad)?;
    Ok((real_part(v / (PI * PI), "delta term")?, e / (PI * PI)))
}

fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut s, mut k) = (1.0, 1.0, 0.0);
    while term > 1e-17 * s {
        k += 1.0;
        term *= q / (k * k);
        s += term;
    }
    s
}

/// Σ_{ℓ > l} d(ℓ) ℓ^{−s} for s > 1: explicit up to 64l, then partial
/// summation with Σ_{ℓ≤t} d(ℓ) ≤ t(log t + 1).
fn divisor_tail(table: &DivisorTable, l: u64, s: f64) -> f64 {
    let y = table.limit() as u64;
    let head = sum_f64((l + 1..=y).map(|k| table.d(k as usize) as f64 * (k as f64).powf(-s)));
    let yf = y as f64;
    let c = s - 1.0;
    head + s * yf.powf(-c) * ((yf.ln() + 1.0) / c + 1.0 / (c * c))
}

/// Majorant for Σ_{ℓ > L} ℓ^{−1}|S(m,n;ℓ) f₊(4π√(mn)/ℓ)|.
///
/// Moving (7.4) to Im r = −1 picks up the pole of sech at −i/2:
/// f₊(x) = (2/π) f(−i/2) J₁(x) + R(x) with
/// |R(x)| ≤ (2/π)(x/2)² I₀(x) ∫ |u−i||f(u−i)| / (cosh(πu)|Γ(3+2iu)|) du.
/// With |J₁(x)| ≤ x/2 and Weil's bound the ℓ-sum reduces to divisor tails.
pub fn kloosterman_tail_bound(m: u64, n: u64, f: &dyn Kernel, l_cap: u64, quad: &QuadratureSpec) -> Result<f64> {
    if f.strip() <= 1.0 {
        return Ok(f64::INFINITY);
    }
    let b = f.support().1 + 4.0;
    let g = |u: f64| -> Result<(Complex64, f64)> {
        let mut acc = 0.0;
        for u in [u, -u] {
            let z = Complex64::new(u, -1.0);
            let lg = log_gamma(Complex64::new(3.0, 2.0 * u))?;
            acc += z.norm() * f.eval(z).norm() * (-lg.re).exp() / (PI * u).cosh();
        }
        Ok((Complex64::new(acc, 0.0), 0.0))
    };
    let (mass, mass_err) = half_line(g, b, quad)?;
    let mass = mass.re + mass_err;
    let root = ((m * n) as f64).sqrt();
    let xl = 4.0 * PI * root / l_cap as f64;
    let c1 = 4.0 * root * f.eval(Complex64::new(0.0, -0.5)).norm();
    let c2 = 8.0 * PI * (m * n) as f64 * bessel_i0(xl) * mass;
    let table = build_divisor_table((64 * l_cap) as usize)?;
    let g = (gcd(m, n) as f64).sqrt();
    Ok(g * (c1 * divisor_tail(&table, l_cap, 1.5) + c2 * divisor_tail(&table, l_cap, 2.5)))
}

/// Σ_{ℓ ≤ L} ℓ^{−1} S(m,n;ℓ) f₊(4π√(mn)/ℓ) with its numeric error.
pub fn kloosterman_side(m: u64, n: u64, f: &dyn Kernel, l_cap: u64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    if m == 0 || n == 0 || l_cap == 0 {
        return Err(Error::invalid("m, n and the ℓ-cap must be positive"));
    }
    let root = ((m * n) as f64).sqrt();
    let terms: Vec<Result<(f64, f64)>> = (1..=l_cap)
        .into_par_iter()
        .map(|l| {
            let s = kloosterman(m, n, l);
            if s == 0.0 {
                return Ok((0.0, 0.0));
            }
            let (v, e) = f_plus_series(f, 4.0 * PI * root / l as f64, quad)?;
            let w = s / l as f64;
            Ok((w * v, w.abs() * e))
        })
        .collect();
    let terms: Vec<(f64, f64)> = terms.into_iter().collect::<Result<_>>()?;
    Ok((sum_f64(terms.iter().map(|t| t.0)), sum_f64(terms.iter().map(|t| t.1))))
}

/// Majorant for Σ_{κ_j > c} α_j |t_j(m)t_j(n) f(κ_j)|, assuming
/// Σ_{κ_j ≤ K} α_j ≤ 2K²/π² (twice the Kuznetsov main term), the
/// Kim–Sarnak bound |t_j(n)| ≤ d(n)n^{7/64}, and |f| decreasing beyond c.
pub fn discrete_tail_bound(table: &DivisorTable, m: u64, n: u64, f: &dyn Kernel, c: f64, quad: &QuadratureSpec) -> Result<f64> {
    let c = c.max(FIRST_CUSP_KAPPA);
    let hecke = (table.d(m as usize) * table.d(n as usize)) as f64 * ((m * n) as f64).powf(7.0 / 64.0);
    let (_, b) = f.support();
    let density = |r: f64| 4.0 * r / (PI * PI) * f.at(r).norm();
    let mut tail = 2.0 * c * c / (PI * PI) * f.at(c).norm();
    if b > c {
        let r = integrate_panels(|r| Complex64::new(density(r), 0.0), &uniform_breaks(c, b, PANEL), quad)?;
        tail += r.value.re + r.abs_err;
    }
    Ok(hecke * tail)
}

pub fn kuznetsov_check(
    dataset: &SpectralDataset,
    m: u64,
    n: u64,
    f: &dyn Kernel,
    caps: &TraceCaps,
    quad: &QuadratureSpec,
) -> Result<TraceReport> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m and n must be positive"));
    }
    if caps.l_cap == 0 || !(caps.tol > 0.0) {
        return Err(Error::invalid("ℓ-cap and tolerance must be positive"));
    }
    let need = m.max(n) as usize;
    if let Some(short) = dataset.forms.iter().find(|j| j.len() < need) {
        return Err(Error::resource(
            format!("form {:?} has {} Hecke eigenvalues, t({need}) needed", short.source_id, short.len()),
            Some(need as u64),
        ));
    }
    let table = build_divisor_table(need.max(2))?;
    let b = window(f, Some(caps));

    let cutoff = dataset.complete_up_to;
    let used: Vec<_> = dataset.forms.iter().filter(|j| cutoff.is_none_or(|c| j.kappa <= c)).collect();
    let discrete = sum_f64(used.iter().map(|j| j.alpha * j.t(m as usize) * j.t(n as usize) * f.at(j.kappa).re));
    let mut flags = Vec::new();
    let discrete_tail_bound = match cutoff {
        Some(c) => discrete_tail_bound(&table, m, n, f, c, quad)?,
        None => {
            flags.push("dataset makes no completeness claim".to_string());
            f64::INFINITY
        }
    };
    if discrete_tail_bound.is_finite() && discrete_tail_bound > caps.tol {
        flags.push(format!(
            "discrete tail bound {discrete_tail_bound:e} above the cutoff {:?} exceeds tolerance {:e}",
            cutoff, caps.tol
        ));
    }

    let (continuous, ce) = continuous_term(&table, m, n, f, b, quad)?;
    let (delta_term, de) = if m == n { delta_integral(f, b, quad, false)? } else { (0.0, 0.0) };
    let (kloosterman_sum, ke) = kloosterman_side(m, n, f, caps.l_cap, quad)?;
    let kloosterman_tail_bound = kloosterman_tail_bound(m, n, f, caps.l_cap, quad)?;

    let lhs = discrete + continuous;
    let rhs = delta_term + kloosterman_sum;
    Ok(TraceReport {
        m,
        n,
        discrete,
        continuous,
        delta_term,
        kloosterman_sum,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        truncation: TraceTruncation {
            l_cap: caps.l_cap,
            r_window: b,
            dataset_cutoff: cutoff,
            forms_used: used.len(),
            discrete_tail_bound,
            kloosterman_tail_bound,
            numeric_err: ce + de + ke,
        },
        flags,
    })
}
