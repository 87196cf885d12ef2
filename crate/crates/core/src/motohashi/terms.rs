//! The seven terms ℋ_ν(f; h) and Σ_{f≤3K} f^{−1/2} e^{−(f/K)^λ} ℋ(f; h).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::kernel::Kernel;
use super::mellin::MellinTable;
use super::psi::two_sided_breaks;
use super::transform::{h_hat_derivatives_fd, h_prime_at_minus_half_i, HatDerivatives};
use crate::arithmetic::{sigma_power, sigma_twisted, DivisorTable};
use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, ChebPanels, par_map, ComplexSum, QuadratureSpec, EULER_GAMMA};
use crate::report::ExpSumResult;
use crate::specfun::{log_gamma, WeightParams};
use crate::zeta::{zeta_critical, zeta_one_line};

/// ε̃ in the default truncation m ≤ max(2f, f T K^{−1+ε̃}) of ℋ₂ and ℋ₃.
pub const TRUNC_EPS: f64 = 0.2;
/// Step for the finite-difference derivatives of ĥ at 1/2.
pub const FD_STEP: f64 = 1e-3;
/// Largest contour shift tried in the ℋ₂ tail bound.
const MAX_SHIFT: u32 = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HTermValue {
    pub k: u8,
    pub f: u64,
    pub value: Complex64,
    /// Bound on discarded tail plus numerical error.
    pub truncation_error: f64,
    pub flags: Vec<String>,
}

/// Kernel, divisor table and tolerances, with the f-independent pieces
/// (Mellin table, ĥ derivatives, shifted-line norms) computed on first use.
pub struct Motohashi<'a> {
    pub kernel: &'a dyn Kernel,
    pub table: &'a DivisorTable,
    pub quad: QuadratureSpec,
    mellin: OnceLock<Result<MellinTable>>,
    hat: OnceLock<Result<HatDerivatives>>,
    shifted: OnceLock<Result<ShiftNorms>>,
}

struct ShiftNorms {
    /// For each admissible shift N, the bound on |Ψ⁺(x)| as Σ c x^{−p}.
    plus: Vec<Vec<(f64, f64)>>,
    /// ∫_ℝ |(u−i) h(u−i)| sech(πu) du.
    minus: f64,
    /// |h(−i/2)|.
    h_half: f64,
}

impl<'a> Motohashi<'a> {
    pub fn new(kernel: &'a dyn Kernel, table: &'a DivisorTable, quad: QuadratureSpec) -> Self {
        Self { kernel, table, quad, mellin: OnceLock::new(), hat: OnceLock::new(), shifted: OnceLock::new() }
    }

    pub fn mellin(&self) -> Result<&MellinTable> {
        self.mellin.get_or_init(|| MellinTable::new(self.kernel, &self.quad)).as_ref().map_err(Clone::clone)
    }

    pub fn hat_derivatives(&self) -> Result<&HatDerivatives> {
        self.hat
            .get_or_init(|| h_hat_derivatives_fd(self.kernel, FD_STEP, &self.quad))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn shift_norms(&self) -> Result<&ShiftNorms> {
        self.shifted.get_or_init(|| self.compute_shift_norms()).as_ref().map_err(Clone::clone)
    }

    fn line_norm(&self, shift: f64, weight: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
        let h = self.kernel;
        let mut total = 0.0;
        for br in two_sided_breaks(h, 1.0) {
            let r = integrate_panels(
                |u| {
                    let r = Complex64::new(u, -shift);
                    Complex64::new((r * h.eval(r)).norm() * weight(u), 0.0)
                },
                &br,
                &self.quad,
            )?;
            total += r.value.re + r.abs_err;
        }
        Ok(total)
    }

    /// Moving the inner line of the Ψ⁺ double integral to Im r = −N gives
    /// 2π B(N+1/2, N+1/2) x^{−N} ∫|(u−iN) h(u−iN)| du, plus the residues of
    /// tanh(πr) at −i(k+1/2) that h does not cancel.
    fn compute_shift_norms(&self) -> Result<ShiftNorms> {
        let h = self.kernel;
        let strip = h.strip();
        let beta = |a: f64| (2.0 * lgamma(a) - lgamma(2.0 * a)).exp();
        let zeros = h.tanh_zeros();
        let mut plus = Vec::new();
        for n in 1..=MAX_SHIFT {
            if (n as f64) >= strip {
                break;
            }
            let a_n = self.line_norm(n as f64, |_| 1.0)?;
            let mut terms = vec![(2.0 * PI * beta(n as f64 + 0.5) * a_n, n as f64)];
            for k in zeros..n {
                let rk = Complex64::new(0.0, -(k as f64 + 0.5));
                let res = (rk * h.eval(rk)).norm();
                terms.push((4.0 * PI * res * beta(k as f64 + 1.0), k as f64 + 0.5));
            }
            plus.push(terms);
        }
        let minus = if strip > 1.0 { self.line_norm(1.0, |u| 1.0 / (PI * u).cosh())? } else { f64::INFINITY };
        let h_half = h.eval(Complex64::new(0.0, -0.5)).norm();
        Ok(ShiftNorms { plus, minus, h_half })
    }

    fn psi_plus_bound(&self, x: f64, norms: &ShiftNorms) -> f64 {
        let lx = x.ln();
        norms
            .plus
            .iter()
            .map(|t| t.iter().map(|(c, p)| c * (-p * lx).exp()).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// |Ψ⁻(x)| bound for x > 1 from the line Im r = −1.
    fn psi_minus_bound(&self, x: f64, norms: &ShiftNorms) -> f64 {
        let d = x - 1.0;
        2.0 * PI / (1.0 - 1.0 / x).sqrt() * (norms.minus * PI / 8.0 / d + norms.h_half / d.sqrt())
    }
}

/// Ψ⁺ or Ψ⁻ on [x_lo, x_hi] from the Mellin table, through a Chebyshev
/// interpolant in ln x when many points are wanted.
struct PsiSampler<'m> {
    mellin: &'m MellinTable,
    plus: bool,
    interp: Option<(ChebPanels, f64)>,
}

/// Below this many points direct evaluation is cheaper than interpolation.
const INTERP_MIN_POINTS: u64 = 4000;

impl<'m> PsiSampler<'m> {
    fn new(mellin: &'m MellinTable, plus: bool, x_lo: f64, x_hi: f64, points: u64) -> Result<Self> {
        let mut out = Self { mellin, plus, interp: None };
        if points >= INTERP_MIN_POINTS && x_hi > x_lo {
            let width = (8.0 / mellin.max_frequency().max(1.0)).min(0.5);
            let (a, b) = (x_lo.ln(), x_hi.ln());
            let cheb = ChebPanels::build(|u| out.direct(u.exp()), a, b, width, 32)?;
            // The table error grows monotonically toward one end of the range.
            let table_err = out.direct(x_lo)?.1.max(out.direct(x_hi)?.1);
            let err = cheb.max_err + table_err;
            out.interp = Some((cheb, err));
        }
        Ok(out)
    }

    fn direct(&self, x: f64) -> Result<(Complex64, f64)> {
        if self.plus { self.mellin.psi_plus(x) } else { self.mellin.psi_minus(x) }
    }

    fn at(&self, x: f64) -> Result<(Complex64, f64)> {
        match &self.interp {
            Some((c, e)) => Ok((c.eval(x.ln().clamp(c.range().0, c.range().1))?, *e)),
            None => self.direct(x),
        }
    }
}

fn lgamma(a: f64) -> f64 {
    log_gamma(Complex64::new(a, 0.0)).map(|z| z.re).unwrap_or(f64::INFINITY)
}

fn d(table: &DivisorTable, n: u64) -> f64 {
    table.d(n as usize) as f64
}

/// Σ_{m>M} of a positive tail majorant: explicit up to M₂ = min(16M, limit − f),
/// then extrapolated from the ratio of the last two octaves.
fn tail_sum(table: &DivisorTable, f: u64, m: u64, term: impl Fn(u64) -> f64 + Sync, flags: &mut Vec<String>) -> f64 {
    let limit = table.limit() as u64;
    let m2 = (16 * m.max(1)).min(limit.saturating_sub(f));
    if m2 < 4 * m.max(1) {
        flags.push(format!("divisor table (limit {limit}) too small for the tail estimate beyond m = {m}"));
        return f64::INFINITY;
    }
    let sum = |lo: u64, hi: u64| -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let v = par_map(lo as usize + 1, hi as usize + 1, |i| term(i as u64));
        crate::numeric::sum_f64(v)
    };
    let explicit = sum(m, m2);
    let last = sum(m2 / 2, m2);
    let prev = sum(m2 / 4, m2 / 2);
    if !(explicit.is_finite() && last.is_finite()) {
        return f64::INFINITY;
    }
    if last == 0.0 {
        return explicit;
    }
    let rho = 1.1 * last / prev;
    if !(rho < 1.0) {
        flags.push("tail majorant does not decay geometrically over octaves".into());
        return f64::INFINITY;
    }
    explicit + last * rho / (1.0 - rho)
}

/// ℋ_k(f; h). For k = 2, 3 the m-sum stops at `trunc`; other k ignore it.
pub fn h_term(ctx: &Motohashi, k: u8, f: u64, trunc: u64) -> Result<HTermValue> {
    if f == 0 {
        return Err(Error::invalid("f must be positive"));
    }
    let table = ctx.table;
    let pi3 = PI.powi(3);
    let ff = f as f64;
    let mut flags = Vec::new();
    let (value, err) = match k {
        1 => {
            table.require(f as usize)?;
            let hd = ctx.hat_derivatives()?;
            let c = EULER_GAMMA - (2.0 * PI * ff.sqrt()).ln();
            let pref = Complex64::new(0.0, -2.0 / pi3) * d(table, f) / ff.sqrt();
            ((hd.d1 * c + hd.d2 * 0.25) * pref, pref.norm() * (c.abs() * hd.d1_err + 0.25 * hd.d2_err))
        }
        2 | 3 => {
            let trunc = trunc.max(1);
            table.require((trunc + f) as usize)?;
            let mellin = ctx.mellin()?;
            let shift = if k == 2 { 0.0 } else { 1.0 };
            let psi = PsiSampler::new(mellin, k == 2, shift + 1.0 / ff, shift + trunc as f64 / ff, trunc)?;
            let coeff = |m: u64| {
                let mf = m as f64;
                let base = if k == 2 { mf } else { mf + ff };
                d(table, m) * d(table, m + f) / base.sqrt() / pi3
            };
            let terms: Vec<Result<(Complex64, f64)>> = par_map(1, trunc as usize + 1, |m| {
                let m = m as u64;
                let (v, e) = psi.at(shift + m as f64 / ff)?;
                let c = coeff(m);
                Ok((v * c, e * c))
            });
            let mut acc = ComplexSum::new();
            let mut err = 0.0;
            for t in terms {
                let (v, e) = t?;
                acc.add(v);
                err += e;
            }
            let norms = ctx.shift_norms()?;
            let tail = if k == 2 {
                tail_sum(table, f, trunc, |m| coeff(m) * ctx.psi_plus_bound(m as f64 / ff, norms), &mut flags)
            } else {
                tail_sum(table, f, trunc, |m| coeff(m) * ctx.psi_minus_bound(1.0 + m as f64 / ff, norms), &mut flags)
            };
            (acc.value(), err + tail)
        }
        4 => {
            table.require(f as usize)?;
            if f == 1 {
                (Complex64::new(0.0, 0.0), 0.0)
            } else {
                let mellin = ctx.mellin()?;
                let terms: Vec<Result<(Complex64, f64)>> = par_map(1, f as usize, |m| {
                    let m = m as u64;
                    let c = d(table, m) * d(table, f - m) / (m as f64).sqrt() / pi3;
                    let (v, e) = mellin.psi_minus(m as f64 / ff)?;
                    Ok((v * c, e * c))
                });
                let mut acc = ComplexSum::new();
                let mut err = 0.0;
                for t in terms {
                    let (v, e) = t?;
                    acc.add(v);
                    err += e;
                }
                (acc.value(), err)
            }
        }
        5 => {
            table.require(f as usize)?;
            let (v, e) = ctx.mellin()?.psi_minus(1.0)?;
            flags.push("closed form of Ψ⁻(1; h) unavailable: value set to 0, envelope from the Mellin–Barnes integral".into());
            let c = d(table, f) / ff.sqrt() / (2.0 * pi3);
            (Complex64::new(0.0, 0.0), c * (v.norm() + e))
        }
        6 => {
            table.require(f as usize)?;
            let (hp, gap) = h_prime_at_minus_half_i(ctx.kernel);
            let s = sigma_power(table, f as usize, Complex64::new(-1.0, 0.0))?.re;
            let pref = Complex64::new(0.0, -12.0 / (PI * PI)) * s * ff.sqrt();
            (pref * hp, pref.norm() * gap)
        }
        7 => {
            table.require(f as usize)?;
            let h = ctx.kernel;
            let failure = std::sync::Mutex::new(None::<Error>);
            let integrand = |r: f64| {
                if r <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let v = (|| -> Result<Complex64> {
                    let z4 = zeta_critical(r)?.value.norm_sqr().powi(2) / zeta_one_line(r)?.norm_sqr();
                    Ok(h.at(r) * (z4 * sigma_twisted(table, f as usize, r)?))
                })();
                v.unwrap_or_else(|e| {
                    failure.lock().unwrap().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                })
            };
            let freq = h.frequency() + ff.ln() + 4.0;
            let q = integrate_panels(integrand, &super::transform::support_breaks(h, freq), &ctx.quad)?;
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            (q.value * (-2.0 / PI), 2.0 / PI * q.abs_err)
        }
        _ => return Err(Error::invalid(format!("ℋ-term index must be 1..=7, got {k}"))),
    };
    Ok(HTermValue { k, f, value, truncation_error: err, flags })
}

/// Default m-cutoff for ℋ₂ and ℋ₃ at this f.
pub fn default_trunc(f: u64, params: &WeightParams) -> u64 {
    let x = f as f64 * params.t * params.k.powf(TRUNC_EPS - 1.0);
    (2 * f).max(x.ceil() as u64)
}

/// Divisor-table size that [`spectral_rhs`] needs for these parameters.
pub fn required_table_limit(params: &WeightParams) -> usize {
    let fmax = (3.0 * params.k).floor().max(0.0) as u64;
    (1..=fmax).map(|f| 16 * default_trunc(f, params) + f).max().unwrap_or(1) as usize
}

/// f^{−1/2} e^{−(f/K)^λ} ℋ(f; h) for each f ≤ 3K, with error bounds and the
/// individual ℋ-terms.
pub fn spectral_rhs_terms(ctx: &Motohashi, params: &WeightParams) -> Result<Vec<(u64, Complex64, f64, Vec<HTermValue>)>> {
    params.validate()?;
    let fmax = (3.0 * params.k).floor().max(0.0) as u64;
    let lambda = params.lambda();
    let mut out = Vec::new();
    for f in 1..=fmax {
        let w = (f as f64).powf(-0.5) * (-(f as f64 / params.k).powf(lambda)).exp();
        let trunc = default_trunc(f, params);
        let mut terms = Vec::with_capacity(7);
        let mut acc = ComplexSum::new();
        let mut err = 0.0;
        for k in 1..=7 {
            let t = h_term(ctx, k, f, trunc)?;
            acc.add(t.value);
            err += t.truncation_error;
            terms.push(t);
        }
        out.push((f, acc.value() * w, err * w, terms));
    }
    Ok(out)
}

/// Σ_{f≤3K} f^{−1/2} e^{−(f/K)^λ} ℋ(f; h), the leading sum of the transformed
/// cubic moment. The U_ν correction sum is not included.
pub fn spectral_rhs(ctx: &Motohashi, params: &WeightParams) -> Result<ExpSumResult> {
    let parts = spectral_rhs_terms(ctx, params)?;
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    let mut flags = std::collections::BTreeSet::new();
    for (_, v, e, terms) in &parts {
        acc.add(*v);
        err += e;
        for t in terms {
            flags.extend(t.flags.iter().cloned());
        }
    }
    let mut res = ExpSumResult::new(acc.value(), err, parts.len() as u64)
        .with_meta("f_max", (3.0 * params.k).floor().max(0.0))
        .with_meta("lambda", params.lambda())
        .with_meta("trunc_eps", TRUNC_EPS)
        .with_meta("omitted", "U_nu correction sum");
    for (i, f) in flags.into_iter().enumerate() {
        res = res.with_meta(&format!("flag_{i}"), f);
    }
    Ok(res)
}
