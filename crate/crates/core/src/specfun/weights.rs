//! The pole-pushing factor q_N and the modified Gaussian weights h_ℓ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant c in the denominator (r² + c·N²)^N of q_N.
pub const DEFAULT_POLE_SHIFT: f64 = 100.0;

/// Parameters of the weights h_ℓ(r; T, K, G) and of the smoothed
/// approximate functional equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightParams {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub ell: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "C_lambda")]
    pub c_lambda: f64,
    pub delta: f64,
    #[serde(rename = "C_lemma2")]
    pub c_lemma2: f64,
    pub pole_shift: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self {
            t: 5000.0,
            k: 30.0,
            g: 3.0,
            ell: 0,
            n: 3,
            l: 6,
            c_lambda: 3.0,
            delta: 0.5,
            c_lemma2: 2.0,
            pole_shift: DEFAULT_POLE_SHIFT,
        }
    }
}

impl WeightParams {
    pub fn new(t: f64, k: f64, g: f64) -> Self {
        Self { t, k, g, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("T", self.t),
            ("K", self.k),
            ("G", self.g),
            ("C_lambda", self.c_lambda),
            ("delta", self.delta),
            ("C_lemma2", self.c_lemma2),
            ("pole_shift", self.pole_shift),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.n == 0 || self.l == 0 {
            return Err(Error::invalid("N and L must be positive"));
        }
        Ok(())
    }

    /// Violations of T^ε ≤ K ≤ T^{1/2−ε} and K^ε ≤ G ≤ K^{1/2−ε}
    /// (with ε = 0.05). Advisory only.
    pub fn range_warnings(&self) -> Vec<String> {
        let eps = 0.05;
        let mut w = Vec::new();
        if self.k < self.t.powf(eps) || self.k > self.t.powf(0.5 - eps) {
            w.push(format!("K = {} outside [T^ε, T^(1/2−ε)] for T = {}", self.k, self.t));
        }
        if self.g < self.k.powf(eps) || self.g > self.k.powf(0.5 - eps) {
            w.push(format!("G = {} outside [K^ε, K^(1/2−ε)] for K = {}", self.g, self.k));
        }
        w
    }

    /// λ = C_lambda · log K.
    pub fn lambda(&self) -> f64 {
        self.c_lambda * self.k.ln()
    }
}

/// q_N(r) = Π_{k=1}^N (r² + (2k−1)²/4) / (r² + c N²)^N.
pub fn q_weight(r: Complex64, n: u32, pole_shift: f64) -> Complex64 {
    let r2 = r * r;
    let mut num = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let h = (2 * k - 1) as f64 / 2.0;
        num *= r2 + h * h;
    }
    num / (r2 + pole_shift * (n * n) as f64).powi(n as i32)
}

/// h_ℓ(r) = q_N(r) (L(r) + L(−r)), L(r) = K^{1−ℓ}(K−r)^ℓ (4T/K)^{ir} e^{−(r−K)²/G²}.
pub fn h_weight(p: &WeightParams, r: Complex64) -> Complex64 {
    let lk = (4.0 * p.t / p.k).ln();
    let l = |r: Complex64| {
        let poly = if p.ell == 0 {
            Complex64::new(p.k, 0.0)
        } else {
            (Complex64::new(p.k, 0.0) - r).powi(p.ell as i32) * p.k.powi(1 - p.ell as i32)
        };
        let d = r - p.k;
        poly * (Complex64::new(0.0, lk) * r - d * d / (p.g * p.g)).exp()
    };
    q_weight(r, p.n, p.pole_shift) * (l(r) + l(-r))
}
