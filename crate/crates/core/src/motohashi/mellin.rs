//! Ψ± as Mellin–Barnes integrals over Re s = β with ĥ tabulated once.
//!
//! Ψ⁺(x) = ∫_{(β)} Γ²(1/2−s) tan(πs) ĥ(s) x^s ds, Ψ⁻(x) the same with
//! 1/cos(πs) in place of tan(πs), ds = i dt. The integrand is analytic for
//! 0 < Re s < 1/2, so the trapezoid rule on the line converges geometrically
//! in the step.

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::Kernel;
use super::psi::sec_tan_pi;
use super::transform::h_hat_scaled;
use crate::error::{Error, Result};
use crate::numeric::{ComplexSum, QuadratureSpec};
use crate::specfun::log_gamma;

pub const MB_BETA: f64 = 0.25;
pub const MB_STEP: f64 = 0.04;
/// Distance used for the a-priori trapezoid error, inside the analyticity
/// strip of half-width 1/4.
const STRIP: f64 = 0.2;
const COARSE: usize = 8;

#[derive(Debug, Clone)]
pub struct MellinTable {
    t0: f64,
    dt: f64,
    /// First node index kept for each sign, and the weights from there on.
    plus_lo: usize,
    plus: Vec<Complex64>,
    minus_lo: usize,
    minus: Vec<Complex64>,
    plus_err: f64,
    minus_err: f64,
    plus_abs: f64,
    minus_abs: f64,
}

struct Node {
    plus: Complex64,
    minus: Complex64,
    plus_err: f64,
    minus_err: f64,
}

fn node(h: &dyn Kernel, t: f64, dt: f64, quad: &QuadratureSpec) -> Result<Node> {
    let s = Complex64::new(MB_BETA, t);
    let pref = 2.0 * log_gamma(0.5 - s)?;
    let hat = h_hat_scaled(h, s, pref, quad)?;
    let (sec, tan) = sec_tan_pi(s);
    let w = Complex64::new(0.0, dt);
    Ok(Node {
        plus: hat.value * tan * w,
        minus: hat.value * sec * w,
        plus_err: hat.abs_err * tan.norm() * dt,
        minus_err: hat.abs_err * sec.norm() * dt,
    })
}

impl MellinTable {
    pub fn new(h: &dyn Kernel, quad: &QuadratureSpec) -> Result<Self> {
        let (_, b) = h.support();
        let t_max = b + 15.0;
        let dt = MB_STEP;
        let n = (2.0 * t_max / dt).ceil() as usize + 1;
        let t0 = -t_max;
        let coarse_idx: Vec<usize> = (0..n).step_by(COARSE).collect();
        let coarse: Vec<Result<Node>> = coarse_idx.par_iter().map(|&j| node(h, t0 + j as f64 * dt, dt, quad)).collect();
        let coarse: Vec<Node> = coarse.into_iter().collect::<Result<_>>()?;
        let pmax = coarse.iter().map(|c| c.plus.norm()).fold(0.0, f64::max);
        let mmax = coarse.iter().map(|c| c.minus.norm()).fold(0.0, f64::max);
        let keep = |c: &Node| c.plus.norm() > 1e-20 * pmax || c.minus.norm() > 1e-20 * mmax;
        let mut wanted = vec![false; n];
        for (ci, c) in coarse.iter().enumerate() {
            if keep(c) {
                let lo = (ci.saturating_sub(2)) * COARSE;
                let hi = ((ci + 2) * COARSE).min(n - 1);
                wanted[lo..=hi].iter_mut().for_each(|w| *w = true);
            }
        }
        let fine: Vec<Result<Option<Node>>> = (0..n)
            .into_par_iter()
            .map(|j| if wanted[j] { node(h, t0 + j as f64 * dt, dt, quad).map(Some) } else { Ok(None) })
            .collect();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        let (mut plus_err, mut minus_err) = (0.0, 0.0);
        for f in fine {
            match f? {
                Some(nd) => {
                    plus.push(nd.plus);
                    minus.push(nd.minus);
                    plus_err += nd.plus_err;
                    minus_err += nd.minus_err;
                }
                None => {
                    plus.push(Complex64::new(0.0, 0.0));
                    minus.push(Complex64::new(0.0, 0.0));
                }
            }
        }
        let trim = |v: Vec<Complex64>| -> (usize, Vec<Complex64>) {
            let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let cut = 1e-22 * m;
            let lo = v.iter().position(|z| z.norm() > cut).unwrap_or(0);
            let hi = v.iter().rposition(|z| z.norm() > cut).map(|i| i + 1).unwrap_or(0);
            (lo, v[lo..hi.max(lo)].to_vec())
        };
        let (plus_lo, plus) = trim(plus);
        let (minus_lo, minus) = trim(minus);
        let plus_abs = plus.iter().map(|z| z.norm()).sum();
        let minus_abs = minus.iter().map(|z| z.norm()).sum();
        Ok(Self { t0, dt, plus_lo, plus, minus_lo, minus, plus_err, minus_err, plus_abs, minus_abs })
    }

    fn eval(&self, x: f64, lo: usize, w: &[Complex64], q_err: f64, abs: f64) -> Result<(Complex64, f64)> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("Mellin–Barnes evaluation needs x > 0, got {x}")));
        }
        let lx = x.ln();
        let step = Complex64::from_polar(1.0, self.dt * lx);
        let mut acc = ComplexSum::new();
        let mut rot = Complex64::new(0.0, 0.0);
        for (k, wk) in w.iter().enumerate() {
            if k % 32 == 0 {
                rot = Complex64::from_polar(1.0, (self.t0 + (lo + k) as f64 * self.dt) * lx);
            }
            acc.add(wk * rot);
            rot *= step;
        }
        let xb = x.powf(MB_BETA);
        let disc = (-2.0 * std::f64::consts::PI * STRIP / self.dt).exp() * abs * x.powf(STRIP).max(x.powf(-STRIP));
        Ok((acc.value() * xb, (q_err + disc + 1e-15 * abs) * xb))
    }

    pub fn psi_plus(&self, x: f64) -> Result<(Complex64, f64)> {
        self.eval(x, self.plus_lo, &self.plus, self.plus_err, self.plus_abs)
    }

    /// Ψ⁻(x) for every x > 0, including x = 1.
    pub fn psi_minus(&self, x: f64) -> Result<(Complex64, f64)> {
        self.eval(x, self.minus_lo, &self.minus, self.minus_err, self.minus_abs)
    }

    /// Largest |t| among the retained nodes: the top frequency of Ψ± in ln x.
    pub fn max_frequency(&self) -> f64 {
        let t = |lo: usize, len: usize| (self.t0 + lo as f64 * self.dt).abs().max((self.t0 + (lo + len) as f64 * self.dt).abs());
        t(self.plus_lo, self.plus.len()).max(t(self.minus_lo, self.minus.len()))
    }

    pub fn nodes(&self) -> (usize, usize) {
        (self.plus.len(), self.minus.len())
    }
}
