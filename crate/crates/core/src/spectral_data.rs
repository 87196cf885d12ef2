//! Maass-form eigen-data: ingestion, validation and central values H_j(1/2).

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arithmetic::gcd;
use crate::error::{Error, Result};
use crate::numeric::Neumaier;
use crate::specfun::WeightParams;
use crate::zeta::lemma2_window;

pub const SCHEMA: &str = "maass-v1";
/// Relative tolerance for the Hecke relations.
pub const HECKE_TOL: f64 = 1e-6;
/// Spectral parameter of the first cusp form for SL(2, Z) (Hejhal); no cusp
/// form has a smaller κ.
pub const FIRST_CUSP_KAPPA: f64 = 9.533_695_261_353_557;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaassForm {
    pub kappa: f64,
    /// ε_j = ±1.
    pub parity: i8,
    /// α_j = |ρ_j(1)|² / cosh(πκ_j).
    pub alpha: f64,
    /// t_j(1..=M); `hecke[n-1]` is t_j(n).
    #[serde(rename = "t")]
    pub hecke: Vec<f64>,
    #[serde(rename = "id")]
    pub source_id: String,
}

impl MaassForm {
    pub fn t(&self, n: usize) -> f64 {
        self.hecke[n - 1]
    }

    pub fn len(&self) -> usize {
        self.hecke.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hecke.is_empty()
    }

    /// Checks t(1) = 1, α > 0, parity, multiplicativity and the prime-power
    /// recursion.
    pub fn validate(&self) -> Result<()> {
        let name = format!("form {:?} (kappa = {})", self.source_id, self.kappa);
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::validation(format!("{name}: kappa must be positive")));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::validation(format!("{name}: alpha must be positive")));
        }
        if self.parity != 1 && self.parity != -1 {
            return Err(Error::validation(format!("{name}: parity must be ±1")));
        }
        if self.hecke.is_empty() || (self.hecke[0] - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!("{name}: t(1) must equal 1")));
        }
        if self.hecke.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation(format!("{name}: non-finite Hecke eigenvalue")));
        }
        let m = self.hecke.len();
        let close = |a: f64, b: f64| (a - b).abs() <= HECKE_TOL * b.abs().max(1.0);
        for a in 2..=m {
            for b in (a + 1)..=(m / a) {
                if gcd(a as u64, b as u64) == 1 && !close(self.t(a) * self.t(b), self.t(a * b)) {
                    return Err(Error::validation(format!(
                        "{name}: multiplicativity t(m)t(n) = t(mn) fails for (m, n) = ({a}, {b})"
                    )));
                }
            }
        }
        for p in (2..=m).filter(|&p| is_prime(p)) {
            let mut pk = p;
            let mut prev = 1usize;
            while pk * p <= m {
                if !close(self.t(p) * self.t(pk), self.t(pk * p) + self.t(prev)) {
                    return Err(Error::validation(format!(
                        "{name}: Hecke recursion t(p)t(p^k) = t(p^(k+1)) + t(p^(k-1)) fails at p = {p}, p^k = {pk}"
                    )));
                }
                prev = pk;
                pk *= p;
            }
        }
        Ok(())
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDataset {
    pub forms: Vec<MaassForm>,
    /// κ up to which the source claims every form is present; `None` when the
    /// source makes no completeness claim.
    pub complete_up_to: Option<f64>,
    /// Shortest Hecke list in the dataset.
    pub m_min: usize,
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    complete_up_to: Option<f64>,
}

impl SpectralDataset {
    /// Validates every form, sorts by κ and checks the dataset invariants.
    pub fn new(mut forms: Vec<MaassForm>, complete_up_to: Option<f64>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::validation("spectral dataset must contain at least one form"));
        }
        let checks: Vec<Result<()>> = forms.par_iter().map(|f| f.validate()).collect();
        checks.into_iter().collect::<Result<Vec<()>>>()?;
        forms.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
        for w in forms.windows(2) {
            if w[0].kappa >= w[1].kappa {
                return Err(Error::validation(format!(
                    "duplicate kappa {} ({:?} and {:?})",
                    w[1].kappa, w[0].source_id, w[1].source_id
                )));
            }
        }
        let kmax = forms.last().map(|f| f.kappa).unwrap_or(0.0);
        if let Some(c) = complete_up_to {
            if !(c >= 0.0) || c > kmax {
                return Err(Error::validation(format!("complete_up_to = {c} exceeds the largest kappa {kmax}")));
            }
        }
        let m_min = forms.iter().map(|f| f.len()).min().unwrap_or(0);
        Ok(Self { forms, complete_up_to, m_min })
    }

    /// A dataset with no forms that is known complete up to `kappa`; valid
    /// only below the first cusp form.
    pub fn empty_below_first_cusp(kappa: f64) -> Result<Self> {
        if kappa >= FIRST_CUSP_KAPPA {
            return Err(Error::validation(format!(
                "an empty spectrum is only complete below κ₁ = {FIRST_CUSP_KAPPA}"
            )));
        }
        Ok(Self { forms: Vec::new(), complete_up_to: Some(kappa), m_min: 0 })
    }

    pub fn is_complete_to(&self, kappa: f64) -> bool {
        self.complete_up_to.is_some_and(|c| c >= kappa)
    }

    pub fn window(&self, lo: f64, hi: f64) -> impl Iterator<Item = &MaassForm> {
        self.forms.iter().filter(move |f| f.kappa > lo && f.kappa <= hi)
    }

    /// Retains forms with κ ≤ cutoff and caps the completeness claim.
    pub fn truncated(&self, cutoff: f64) -> Self {
        let forms: Vec<MaassForm> = self.forms.iter().filter(|f| f.kappa <= cutoff).cloned().collect();
        let m_min = forms.iter().map(|f| f.len()).min().unwrap_or(0);
        Self { forms, complete_up_to: self.complete_up_to.map(|c| c.min(cutoff)), m_min }
    }

    /// α_j ↦ c·α_j for every form.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        let mut out = self.clone();
        for f in &mut out.forms {
            f.alpha *= c;
        }
        Ok(out)
    }
}

pub fn parse_spectral_dataset<R: BufRead>(reader: R) -> Result<SpectralDataset> {
    let mut header: Option<Header> = None;
    let mut forms = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            let h: Header = serde_json::from_str(&line)
                .map_err(|e| Error::format(format!("bad header: {e}"), Some(lineno)))?;
            if h.schema != SCHEMA {
                return Err(Error::format(format!("schema {:?}, expected {SCHEMA:?}", h.schema), Some(lineno)));
            }
            header = Some(h);
            continue;
        }
        let form: MaassForm = serde_json::from_str(&line)
            .map_err(|e| Error::format(format!("bad form record: {e}"), Some(lineno)))?;
        forms.push(form);
    }
    let header = header.ok_or_else(|| Error::format("missing header line", Some(1)))?;
    SpectralDataset::new(forms, header.complete_up_to)
}

pub fn load_spectral_dataset(path: &Path) -> Result<SpectralDataset> {
    parse_spectral_dataset(BufReader::new(File::open(path)?))
}

pub fn write_spectral_dataset<W: Write>(ds: &SpectralDataset, mut w: W) -> Result<()> {
    let header = Header { schema: SCHEMA.into(), complete_up_to: ds.complete_up_to };
    writeln!(w, "{}", serde_json::to_string(&header).map_err(|e| Error::Io(e.to_string()))?)?;
    for f in &ds.forms {
        writeln!(w, "{}", serde_json::to_string(f).map_err(|e| Error::Io(e.to_string()))?)?;
    }
    w.flush()?;
    Ok(())
}

/// H_j(1/2) ≈ Σ_{m≤(1+δ)Y} t_j(m) m^{−1/2} e^{−(m/Y)^h} with
/// Y = (1+δ)κ²/(4π²), h = C log κ.
pub fn hecke_central_value(form: &MaassForm, params: &WeightParams) -> Result<f64> {
    let (y, h, m) = lemma2_window(form.kappa.max(1.0 + 1e-9), params.delta, params.c_lemma2);
    let m = m.max(1);
    if form.len() < m {
        return Err(Error::resource(
            format!("form {:?} has {} Hecke eigenvalues, needs {m}", form.source_id, form.len()),
            Some(m as u64),
        ));
    }
    let mut acc = Neumaier::new();
    for n in 1..=m {
        let nf = n as f64;
        acc.add(form.t(n) / nf.sqrt() * (-(nf / y).powf(h)).exp());
    }
    let v = acc.value();
    if v < -1e-6 {
        return Err(Error::NumericFailure {
            message: format!("central value of {:?} is negative", form.source_id),
            residual: v,
            partial: Some(v),
        });
    }
    Ok(v)
}

/// log cosh y without overflow.
pub fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// α = |ρ(1)|² / cosh(πκ), evaluated in log space.
pub fn alpha_from_rho(rho1_sq: f64, kappa: f64) -> Result<f64> {
    if !(rho1_sq > 0.0) {
        return Err(Error::invalid("rho1_sq must be positive"));
    }
    alpha_from_log_rho(rho1_sq.ln(), kappa)
}

/// α from log |ρ(1)|², for inputs too large to hold directly.
pub fn alpha_from_log_rho(ln_rho1_sq: f64, kappa: f64) -> Result<f64> {
    if !ln_rho1_sq.is_finite() || !kappa.is_finite() {
        return Err(Error::invalid("log rho and kappa must be finite"));
    }
    Ok((ln_rho1_sq - ln_cosh(PI * kappa)).exp())
}

/// Hecke eigenvalues t(n) = Σ_{d|n} (d²/n)^{iκ} of the Eisenstein series at
/// 1/2 + iκ. They are real, satisfy the Hecke relations exactly, and their
/// Hecke series is ζ(s+iκ)ζ(s−iκ), so the central value is |ζ(1/2+iκ)|² ≥ 0.
pub fn eisenstein_pseudo_form(kappa: f64, parity: i8, alpha: f64, len: usize, id: &str) -> MaassForm {
    let mut hecke = vec![0.0; len];
    for (i, slot) in hecke.iter_mut().enumerate() {
        let mut n = i + 1;
        let mut prod = 1.0;
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                p = n;
            }
            if n % p == 0 {
                let mut k = 0;
                while n % p == 0 {
                    n /= p;
                    k += 1;
                }
                let c = (kappa * (p as f64).ln()).cos();
                let (mut u0, mut u1) = (1.0, 2.0 * c);
                for _ in 1..k {
                    (u0, u1) = (u1, 2.0 * c * u1 - u0);
                }
                prod *= if k == 0 { u0 } else { u1 };
            }
            p += 1;
        }
        *slot = prod;
    }
    MaassForm { kappa, parity, alpha, hecke, source_id: id.to_string() }
}

/// (#{κ_j ≤ x}, x²/12): observed count against the Weyl-law main term.
pub fn weyl_report(ds: &SpectralDataset, x: f64) -> (usize, f64) {
    (ds.forms.iter().filter(|f| f.kappa <= x).count(), x * x / 12.0)
}

/// Deterministic synthetic spectrum of Eisenstein pseudo-forms with Weyl-law
/// spacing κ_j ≈ √(12 j) and α_j near the Kuznetsov average 6/π². Not a
/// cusp-form spectrum: it carries no completeness claim.
pub fn synthetic_dataset(kappa_max: f64, hecke_len: usize) -> Result<SpectralDataset> {
    let mut forms = Vec::new();
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        let kappa = (12.0 * jf).sqrt() + 0.2 * (1.7 * jf).sin();
        if kappa > kappa_max {
            break;
        }
        let alpha = 6.0 / (PI * PI) * (1.0 + 0.3 * (0.9 * jf).sin());
        let parity = if (jf * 0.618_033_988_749_895).fract() < 0.5 { 1 } else { -1 };
        forms.push(eisenstein_pseudo_form(kappa, parity, alpha, hecke_len, &format!("pseudo-{j}")));
        j += 1;
    }
    SpectralDataset::new(forms, None)
}
