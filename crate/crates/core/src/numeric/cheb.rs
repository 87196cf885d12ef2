//! Piecewise Chebyshev interpolation of smooth complex functions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Interpolant on [a, b] from equal panels, each carrying the values at the
/// n Chebyshev points of the second kind. `max_err` is the largest deviation
/// seen at off-node probe points, one per panel.
#[derive(Debug, Clone)]
pub struct ChebPanels {
    a: f64,
    width: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    pub max_err: f64,
}

impl ChebPanels {
    /// Panels no wider than `max_width`, n ≥ 2 points each. `f` returns a
    /// value and its own error bound; the bound of the probes is added to
    /// `max_err`.
    pub fn build<F>(f: F, a: f64, b: f64, max_width: f64, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> Result<(Complex64, f64)> + Sync,
    {
        if !(a.is_finite() && b.is_finite() && b > a && max_width > 0.0 && n >= 2) {
            return Err(Error::invalid(format!("bad interpolation range [{a}, {b}] / width {max_width} / n {n}")));
        }
        let panels = ((b - a) / max_width).ceil() as usize;
        let width = (b - a) / panels as f64;
        let nodes: Vec<f64> = (0..n).map(|j| (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos()).collect();
        let weights: Vec<f64> = (0..n)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n - 1 { 0.5 * w } else { w }
            })
            .collect();
        let built: Vec<Result<(Vec<Complex64>, f64)>> = (0..panels)
            .into_par_iter()
            .map(|p| {
                let lo = a + p as f64 * width;
                let vals = nodes
                    .iter()
                    .map(|t| f(lo + 0.5 * width * (t + 1.0)).map(|v| v.0))
                    .collect::<Result<Vec<_>>>()?;
                let probe = lo + 0.37 * width;
                let (exact, e) = f(probe)?;
                let got = bary(&nodes, &weights, &vals, 2.0 * (probe - lo) / width - 1.0);
                Ok((vals, (got - exact).norm() + e))
            })
            .collect();
        let mut values = Vec::with_capacity(panels);
        let mut max_err: f64 = 0.0;
        for r in built {
            let (v, e) = r?;
            values.push(v);
            max_err = max_err.max(e);
        }
        Ok(Self { a, width, nodes, weights, values, max_err })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.a, self.a + self.width * self.values.len() as f64)
    }

    pub fn eval(&self, u: f64) -> Result<Complex64> {
        let (a, b) = self.range();
        if !(u >= a && u <= b) {
            return Err(Error::domain(format!("{u} outside interpolation range [{a}, {b}]")));
        }
        let p = (((u - a) / self.width) as usize).min(self.values.len() - 1);
        let lo = a + p as f64 * self.width;
        Ok(bary(&self.nodes, &self.weights, &self.values[p], 2.0 * (u - lo) / self.width - 1.0))
    }
}

fn bary(nodes: &[f64], weights: &[f64], vals: &[Complex64], t: f64) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for ((x, w), v) in nodes.iter().zip(weights).zip(vals) {
        let d = t - x;
        if d == 0.0 {
            return *v;
        }
        let c = w / d;
        num += v * c;
        den += c;
    }
    num / den
}
