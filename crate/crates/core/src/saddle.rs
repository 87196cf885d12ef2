//! Oscillatory integrals ∫ g(K) e^{if(K)} dK: a resolving quadrature, saddle
//! point evaluation, and first/second derivative test bounds.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, QuadratureSpec};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Phase f and amplitude g of ∫ g e^{if}.
#[derive(Clone)]
pub enum PhaseSpec {
    /// f(K) = K log(4eT/(K s²)), g(K) = K^{1/2} exp(−(G²/4) log²(4T/(K s²))),
    /// s = √x + √(1+x).
    Theorem1 { t: f64, x: f64, g: f64 },
    /// f with its first two derivatives, and a real amplitude.
    Custom { f: RealFn, df: RealFn, d2f: RealFn, amp: RealFn },
}

impl fmt::Debug for PhaseSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSpec::Theorem1 { t, x, g } => write!(fm, "Theorem1 {{ t: {t}, x: {x}, g: {g} }}"),
            PhaseSpec::Custom { .. } => write!(fm, "Custom"),
        }
    }
}

/// K₁ = 4T/(√x + √(1+x))².
pub fn k1(t: f64, x: f64) -> f64 {
    let s = x.sqrt() + (1.0 + x).sqrt();
    4.0 * t / (s * s)
}

impl PhaseSpec {
    pub fn theorem1(t: f64, x: f64, g: f64) -> Result<Self> {
        if !(t > 0.0 && x > 0.0 && g > 0.0) {
            return Err(Error::invalid(format!("need T, x, G > 0, got T = {t}, x = {x}, G = {g}")));
        }
        Ok(PhaseSpec::Theorem1 { t, x, g })
    }

    pub fn custom<F, D, D2, A>(f: F, df: D, d2f: D2, amp: A) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
        A: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PhaseSpec::Custom { f: Arc::new(f), df: Arc::new(df), d2f: Arc::new(d2f), amp: Arc::new(amp) }
    }

    pub fn phase(&self, k: f64) -> f64 {
        match self {
            PhaseSpec::Theorem1 { t, x, .. } => k * (1.0 + (k1(*t, *x) / k).ln()),
            PhaseSpec::Custom { f, .. } => f(k),
        }
    }

    pub fn phase_d1(&self, k: f64) -> f64 {
        match self {
            PhaseSpec::Theorem1 { t, x, .. } => (k1(*t, *x) / k).ln(),
            PhaseSpec::Custom { df, .. } => df(k),
        }
    }

    /// −1/K for the Theorem 1 phase.
    pub fn phase_d2(&self, k: f64) -> f64 {
        match self {
            PhaseSpec::Theorem1 { .. } => -1.0 / k,
            PhaseSpec::Custom { d2f, .. } => d2f(k),
        }
    }

    pub fn amplitude(&self, k: f64) -> f64 {
        match self {
            PhaseSpec::Theorem1 { t, x, g } => {
                let l = (k1(*t, *x) / k).ln();
                k.sqrt() * (-0.25 * g * g * l * l).exp()
            }
            PhaseSpec::Custom { amp, .. } => amp(k),
        }
    }

    /// Root of f′ in (a, b): closed form for Theorem 1, otherwise Newton
    /// guarded by bisection.
    pub fn saddle(&self, a: f64, b: f64) -> Result<f64> {
        let k = match self {
            PhaseSpec::Theorem1 { t, x, .. } => k1(*t, *x),
            PhaseSpec::Custom { .. } => self.custom_root(a, b)?,
        };
        if !(k > a && k < b) {
            return Err(Error::domain(format!("saddle point {k} lies outside ({a}, {b})")));
        }
        Ok(k)
    }

    fn custom_root(&self, a: f64, b: f64) -> Result<f64> {
        let (fa, fb) = (self.phase_d1(a), self.phase_d1(b));
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() == fb.signum() {
            return Err(Error::domain(format!("f′ has no sign change on [{a}, {b}]")));
        }
        let (mut lo, mut hi) = if fa < 0.0 { (a, b) } else { (b, a) };
        let mut k = 0.5 * (a + b);
        for _ in 0..200 {
            let d = self.phase_d1(k);
            if d == 0.0 {
                return Ok(k);
            }
            if d < 0.0 {
                lo = k;
            } else {
                hi = k;
            }
            let step = d / self.phase_d2(k);
            if step.abs() <= 1e-15 * k.abs().max(1.0) {
                return Ok(k - step);
            }
            let newton = k - step;
            let inside = newton > lo.min(hi) && newton < lo.max(hi);
            k = if inside && step.is_finite() { newton } else { 0.5 * (lo + hi) };
            if (hi - lo).abs() <= 1e-15 * k.abs().max(1.0) {
                return Ok(k);
            }
        }
        Ok(k)
    }
}

/// Panel breaks no wider than one eighth of the local period 2π/|f′|, nor
/// than `max_width`.
fn oscillation_breaks(phase: &PhaseSpec, a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let mut v = vec![a];
    let mut k = a;
    while k < b {
        let d = phase.phase_d1(k).abs().max(phase.phase_d1((k + max_width).min(b)).abs());
        let w = if d > 0.0 { (2.0 * PI / d / 8.0).min(max_width) } else { max_width };
        k = (k + w.max(1e-9 * (b - a))).min(b);
        v.push(k);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatoryValue {
    pub value: Complex64,
    /// Quadrature estimate plus the change under panel halving.
    pub abs_err: f64,
    pub panels: usize,
}

/// ∫_a^b g(K) e^{if(K)} dK on panels resolving the local period.
pub fn oscillatory_quad(phase: &PhaseSpec, a: f64, b: f64, quad: &QuadratureSpec) -> Result<OscillatoryValue> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("need a finite interval a < b, got [{a}, {b}]")));
    }
    quad.validate()?;
    let max_width = (b - a) / 64.0;
    let coarse = oscillation_breaks(phase, a, b, max_width);
    let fine: Vec<f64> = coarse
        .windows(2)
        .flat_map(|w| [w[0], 0.5 * (w[0] + w[1])])
        .chain(std::iter::once(b))
        .collect();
    let f = |k: f64| Complex64::from_polar(1.0, phase.phase(k)) * phase.amplitude(k);
    let r1 = integrate_panels(f, &coarse, quad)?;
    let r2 = integrate_panels(f, &fine, quad)?;
    if !r2.value.re.is_finite() || !r2.value.im.is_finite() {
        return Err(Error::numeric("oscillatory integrand is not finite", f64::INFINITY));
    }
    Ok(OscillatoryValue { value: r2.value, abs_err: r2.abs_err + (r1.value - r2.value).norm(), panels: fine.len() - 1 })
}

/// g(K₁) e^{i f(K₁) + iπ/4 sgn f″(K₁)} √(2π/|f″(K₁)|).
pub fn stationary_phase_leading(phase: &PhaseSpec, a: f64, b: f64) -> Result<Complex64> {
    let k = phase.saddle(a, b)?;
    let d2 = phase.phase_d2(k);
    if d2 == 0.0 {
        return Err(Error::domain("degenerate stationary point (f″ = 0)"));
    }
    let arg = phase.phase(k) + 0.25 * PI * d2.signum();
    Ok(Complex64::from_polar(phase.amplitude(k) * (2.0 * PI / d2.abs()).sqrt(), arg))
}

/// Saddle point value of ∫ exp(Φ), Φ = i f + log g. For the Theorem 1 phase
/// the Gaussian factor of g is kept in the exponent: Φ is expanded to second
/// order about its own complex stationary point, which is the leading term of
/// the saddle point method. Custom phases fall back to stationary phase.
pub fn saddle_eval(phase: &PhaseSpec, a: f64, b: f64) -> Result<Complex64> {
    let &PhaseSpec::Theorem1 { g, .. } = phase else {
        return stationary_phase_leading(phase, a, b);
    };
    let kk = phase.saddle(a, b)?;
    let c = 0.25 * g * g;
    let i = Complex64::i();
    // With K = K₁e^u the integral is ∫ exp Ψ(u) du,
    // Ψ(u) = iK₁e^u(1 − u) + (3/2)(u + log K₁) − c u².
    let psi = |u: Complex64| i * kk * u.exp() * (1.0 - u) + 1.5 * (u + kk.ln()) - c * u * u;
    let psi1 = |u: Complex64| -i * kk * u * u.exp() + 1.5 - 2.0 * c * u;
    let psi2 = |u: Complex64| -i * kk * u.exp() * (1.0 + u) - 2.0 * c;
    let mut u = Complex64::new(0.0, 0.0);
    for _ in 0..100 {
        let step = psi1(u) / psi2(u);
        u -= step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    if !(u.norm() < 1.0) || !psi1(u).norm().is_finite() {
        return Err(Error::numeric(format!("complex saddle search drifted to u = {u}"), u.norm()));
    }
    Ok(psi(u).exp() * (2.0 * PI / (-psi2(u))).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeBounds {
    /// 2√2 · pieces · max|g| / min|f′|, or ∞ when f′ vanishes on [a, b].
    pub first: f64,
    /// 8√2 · pieces · max|g| / √(min|f″|), or ∞ when f″ vanishes.
    pub second: f64,
}

impl DerivativeBounds {
    pub fn best(&self) -> f64 {
        self.first.min(self.second)
    }
}

const SAMPLES: usize = 400;

/// First and second derivative test bounds for |∫_a^b g e^{if}|.
///
/// The Kuzmin–Landau and van der Corput lemmas bound the real and imaginary
/// parts of ∫ e^{if} by 2/min|f′| and 8/√min|f″|; the second mean value
/// theorem carries them over to each interval on which g is monotone.
pub fn derivative_test_bounds(phase: &PhaseSpec, a: f64, b: f64) -> Result<DerivativeBounds> {
    if !(a < b) {
        return Err(Error::invalid(format!("need a < b, got [{a}, {b}]")));
    }
    let ks: Vec<f64> = (0..=SAMPLES).map(|i| a + (b - a) * i as f64 / SAMPLES as f64).collect();
    let d1: Vec<f64> = ks.iter().map(|&k| phase.phase_d1(k)).collect();
    let d2: Vec<f64> = ks.iter().map(|&k| phase.phase_d2(k)).collect();
    let g: Vec<f64> = ks.iter().map(|&k| phase.amplitude(k)).collect();
    if d2.iter().any(|&v| v > 0.0) && d2.iter().any(|&v| v < 0.0) {
        return Err(Error::domain("f′ is not monotone on the interval; split it"));
    }
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gmax == 0.0 {
        return Ok(DerivativeBounds { first: 0.0, second: 0.0 });
    }
    // Monotone pieces of g from sign changes of its sampled increments.
    let mut pieces = 1.0;
    let mut last = 0.0;
    for w in g.windows(2) {
        let s = (w[1] - w[0]).signum();
        if s != 0.0 && last != 0.0 && s != last {
            pieces += 1.0;
        }
        if s != 0.0 {
            last = s;
        }
    }
    // A sampled sign change of f′ means a stationary point inside.
    let crosses = d1.windows(2).any(|w| w[0].signum() != w[1].signum()) || d1.iter().any(|&v| v == 0.0);
    let m1 = d1.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let m2 = d2.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let first = if crosses || m1 == 0.0 { f64::INFINITY } else { 2.0 * SQRT_2 * pieces * gmax / m1 };
    let second = if m2 == 0.0 { f64::INFINITY } else { 8.0 * SQRT_2 * pieces * gmax / m2.sqrt() };
    Ok(DerivativeBounds { first, second })
}
