//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::sum::{sum_f64, ComplexSum};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budget for every numeric integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed per panel before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::invalid("quadrature tolerances must be nonnegative and not both zero"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }

    pub fn tighter_rel(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol * factor, ..*self }
    }

    pub fn tighter(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    resabs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then(other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        err: ((k - g) * h).norm(),
        resabs: resabs * h.abs(),
    }
}

/// ∫_a^b f by globally adaptive bisection of the worst segment.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), abs_err: 0.0, evals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let (mut total, mut err, mut resabs) = (first.value, first.err, first.resabs);
    heap.push(first);
    let mut evals = 15;
    let mut splits = 0;
    loop {
        if splits % 64 == 0 {
            // Running totals drift under repeated subtraction; refresh them.
            total = sum_segments(&heap);
            err = sum_f64(heap.iter().map(|s| s.err));
            resabs = sum_f64(heap.iter().map(|s| s.resabs));
        }
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::numeric("non-finite integrand value", f64::NAN));
        }
        let target = spec.abs_tol.max(spec.rel_tol * total.norm()).max(50.0 * f64::EPSILON * resabs);
        if err <= target {
            let value = sum_segments(&heap);
            let err = sum_f64(heap.iter().map(|s| s.err));
            return Ok(QuadResult { value, abs_err: err, evals });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::NumericFailure {
                message: format!("quadrature budget of {} subdivisions exhausted on [{a}, {b}]", spec.max_subdivisions),
                residual: err,
                partial: Some(total.re),
            });
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        splits += 1;
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) || worst.err == 0.0 {
            // Segment below resolution: freeze it.
            err -= worst.err;
            heap.push(Segment { err: 0.0, ..worst });
            continue;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        evals += 30;
    }
}

fn sum_segments(heap: &BinaryHeap<Segment>) -> Complex64 {
    // Sum in order of position so the result is independent of heap layout.
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut acc = ComplexSum::new();
    for s in segs {
        acc.add(s.value);
    }
    acc.value()
}

pub fn integrate_real<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let r = integrate(|x| Complex64::new(f(x), 0.0), a, b, spec)?;
    Ok((r.value.re, r.abs_err))
}

/// Integrates over consecutive panels `breaks[i]..breaks[i+1]` in parallel and
/// merges panel results in order. The absolute tolerance is shared evenly.
pub fn integrate_panels<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if breaks.len() < 2 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), abs_err: 0.0, evals: 0 });
    }
    let n = breaks.len() - 1;
    let local = QuadratureSpec { abs_tol: spec.abs_tol / n as f64, ..*spec };
    let parts: Vec<Result<QuadResult>> = (0..n)
        .into_par_iter()
        .map(|i| integrate(&f, breaks[i], breaks[i + 1], &local))
        .collect();
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    let mut evals = 0;
    for p in parts {
        let p = p?;
        acc.add(p.value);
        err += p.abs_err;
        evals += p.evals;
    }
    Ok(QuadResult { value: acc.value(), abs_err: err, evals })
}

/// Breakpoints a = x_0 < ... < x_n = b with spacing at most `max_width`.
pub fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let n = (((b - a) / max_width).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + h * i as f64 }).collect()
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf);
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
