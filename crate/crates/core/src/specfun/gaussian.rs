//! Moments ∫ u^j e^{Au − Bu²} du of complex Gaussians.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Real polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialReal {
    pub coefficients: Vec<f64>,
}

impl PolynomialReal {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| k as f64 * a)
            .collect::<Vec<_>>();
        PolynomialReal {
            coefficients: if c.is_empty() { vec![0.0] } else { c },
        }
    }
}

/// P_j with ∫ u^j e^{Au−u²} du = P_j(A) e^{A²/4}, built from
/// P_0 = √π and P_j = P′_{j−1} + (A/2) P_{j−1}.
pub fn gaussian_poly(j: usize) -> PolynomialReal {
    let mut p = PolynomialReal { coefficients: vec![PI.sqrt()] };
    for _ in 0..j {
        let dp = p.derivative();
        let mut next = vec![0.0; p.coefficients.len() + 1];
        for (k, &a) in p.coefficients.iter().enumerate() {
            next[k + 1] += 0.5 * a;
        }
        for (k, &a) in dp.coefficients.iter().enumerate() {
            next[k] += a;
        }
        p = PolynomialReal { coefficients: next };
    }
    p
}

/// ∫_{−∞}^{∞} u^j e^{Au − Bu²} du for Re B > 0.
///
/// Substituting u = v/√B reduces to the B = 1 case:
/// B^{−(j+1)/2} P_j(A/√B) e^{A²/(4B)}.
pub fn gaussian_moment(j: usize, a: Complex64, b: Complex64) -> Result<Complex64> {
    if !(b.re > 0.0) {
        return Err(Error::domain(format!("gaussian_moment needs Re B > 0, got {b}")));
    }
    let sb = b.sqrt();
    let p = gaussian_poly(j);
    Ok(p.eval(a / sb) * (a * a / (b * 4.0)).exp() / sb.powi(j as i32 + 1))
}
