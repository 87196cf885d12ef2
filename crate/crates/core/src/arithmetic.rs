//! Divisor function table, generalized divisor sums, Kloosterman sums and
//! shifted divisor correlations.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{ComplexSum, EULER_GAMMA};

/// Default ceiling on table memory (bytes). Each entry costs 8 bytes at rest
/// plus one byte of scratch during the sieve.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// d(n) and smallest prime factors for 1 ≤ n ≤ limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    limit: usize,
    d: Vec<u32>,
    spf: Vec<u32>,
}

pub fn build_divisor_table(limit: usize) -> Result<DivisorTable> {
    build_divisor_table_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

pub fn build_divisor_table_with_budget(limit: usize, budget_bytes: u64) -> Result<DivisorTable> {
    if limit == 0 {
        return Err(Error::invalid("divisor table limit must be at least 1"));
    }
    let need = 9 * (limit as u64 + 1);
    if need > budget_bytes || limit >= u32::MAX as usize {
        return Err(Error::resource(
            format!("divisor table up to {limit} needs {need} bytes, budget is {budget_bytes}"),
            Some(limit as u64),
        ));
    }
    let n = limit + 1;
    let mut spf = vec![0u32; n];
    let mut d = vec![0u32; n];
    // Exponent of spf(i) in i; enough for i < 2^32.
    let mut exp = vec![0u8; n];
    let mut primes: Vec<u32> = Vec::new();
    d[1] = 1;
    for i in 2..n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            d[i] = 2;
            exp[i] = 1;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip >= n {
                break;
            }
            spf[ip] = p;
            if p == si {
                let e = exp[i] as u32;
                exp[ip] = exp[i] + 1;
                d[ip] = d[i] / (e + 1) * (e + 2);
            } else {
                exp[ip] = 1;
                d[ip] = d[i] * 2;
            }
        }
    }
    Ok(DivisorTable { limit, d, spf })
}

impl DivisorTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn d(&self, n: usize) -> u32 {
        self.d[n]
    }

    /// d-values indexed 1..=limit.
    pub fn d_values(&self) -> &[u32] {
        &self.d[1..]
    }

    pub fn spf(&self, n: usize) -> u32 {
        self.spf[n]
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.limit {
            return Err(Error::resource(
                format!("divisor table limit {} below required {n}", self.limit),
                Some(n as u64),
            ));
        }
        Ok(())
    }

    /// Prime factorization as (p, k) pairs in increasing p.
    pub fn factor(&self, mut n: usize) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::invalid("cannot factor 0"));
        }
        self.require(n)?;
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p as u64, k));
        }
        Ok(out)
    }

    /// Rebuilds a table from stored d-values, recomputing spf.
    pub(crate) fn from_d_values(d_values: Vec<u32>) -> Result<Self> {
        let limit = d_values.len();
        let t = build_divisor_table(limit)?;
        if t.d[1..] != d_values[..] {
            return Err(Error::format("stored d-values disagree with a fresh sieve", None));
        }
        Ok(t)
    }
}

/// σ_a(n) = Σ_{δ|n} δ^a.
pub fn sigma_power(table: &DivisorTable, n: usize, a: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::invalid("sigma_power needs n ≥ 1"));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for (p, k) in table.factor(n)? {
        let pa = (a * (p as f64).ln()).exp();
        let mut term = Complex64::new(1.0, 0.0);
        let mut s = term;
        for _ in 0..k {
            term *= pa;
            s += term;
        }
        prod *= s;
    }
    Ok(prod)
}

/// σ_{2ir}(n)·n^{−ir}, which is real: Σ_{δ|n} cos(r·log(δ²/n)).
pub fn sigma_twisted(table: &DivisorTable, n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("sigma_twisted needs n ≥ 1"));
    }
    let mut prod = 1.0;
    for (p, k) in table.factor(n)? {
        // Σ_{j=0}^k p^{ir(2j−k)} = U_k(cos θ), θ = r log p.
        let theta = r * (p as f64).ln();
        prod *= chebyshev_u(k, theta.cos());
    }
    Ok(prod)
}

fn chebyshev_u(k: u32, c: f64) -> f64 {
    let (mut u0, mut u1) = (1.0, 2.0 * c);
    if k == 0 {
        return u0;
    }
    for _ in 1..k {
        let u2 = 2.0 * c * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Kloosterman sum S(m, n; ℓ), accumulated as a compensated complex sum over
/// d = 1..ℓ in ascending order; the imaginary residue is dropped.
pub fn kloosterman(m: u64, n: u64, l: u64) -> f64 {
    kloosterman_complex(m, n, l).re
}

pub(crate) fn kloosterman_complex(m: u64, n: u64, l: u64) -> Complex64 {
    assert!(m >= 1 && n >= 1 && l >= 1, "kloosterman arguments must be positive");
    // Canonical argument order makes the symmetry in (m, n) exact.
    let (m, n) = if m <= n { (m, n) } else { (n, m) };
    let (m, n) = (m % l, n % l);
    let mut acc = ComplexSum::new();
    for d in 1..=l {
        let Some(dbar) = mod_inverse(d, l) else { continue };
        let e = ((m as u128 * d as u128 + n as u128 * dbar as u128) % l as u128) as f64;
        let (s, c) = (2.0 * PI * e / l as f64).sin_cos();
        acc.add(Complex64::new(c, s));
    }
    acc.value()
}

/// Weil's bound gcd(m,n,ℓ)^{1/2} d(ℓ) ℓ^{1/2}.
pub fn weil_bound(table: &DivisorTable, m: u64, n: u64, l: u64) -> Result<f64> {
    table.require(l as usize)?;
    let g = gcd(gcd(m, n), l) as f64;
    Ok(g.sqrt() * table.d(l as usize) as f64 * (l as f64).sqrt())
}

/// Σ_{m≤x} d(m)d(m+f), exact.
pub fn binary_divisor_sum(table: &DivisorTable, x: usize, f: usize) -> Result<u64> {
    if x == 0 {
        return Ok(0);
    }
    table.require(x + f)?;
    Ok((1..=x).map(|m| table.d(m) as u64 * table.d(m + f) as u64).sum())
}

/// Σ_{n≤x} d(n).
pub fn divisor_summatory(table: &DivisorTable, x: usize) -> Result<u64> {
    table.require(x)?;
    Ok(table.d[1..=x].iter().map(|&v| v as u64).sum())
}

/// Σ_{k≤x} ⌊x/k⌋ via the symmetric hyperbola method, O(√x).
pub fn floor_quotient_sum(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let s = x.isqrt();
    let head: u64 = (1..=s).map(|k| x / k).sum();
    2 * head - s * s
}

/// Σ_{n≤x} d(n) − x log x − (2γ−1)x.
pub fn dirichlet_residual(table: &DivisorTable, x: usize) -> Result<f64> {
    let s = divisor_summatory(table, x)? as f64;
    let xf = x as f64;
    Ok(s - xf * xf.ln() - (2.0 * EULER_GAMMA - 1.0) * xf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = build_divisor_table(100).unwrap();
        assert_eq!(t.d(1), 1);
        assert_eq!(t.d(12), 6);
        assert_eq!(t.d(64), 7);
        assert_eq!(divisor_summatory(&t, 100).unwrap(), 482);
        assert_eq!(t.factor(60).unwrap(), vec![(2, 2), (3, 1), (5, 1)]);
    }

    #[test]
    fn kloosterman_examples() {
        assert!((kloosterman(1, 1, 1) - 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 1, 3) + 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 1, 4) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }

    #[test]
    fn chebyshev_matches_direct_sum() {
        let t = build_divisor_table(1000).unwrap();
        for n in [1usize, 8, 12, 360, 997] {
            let r = 1.7;
            let direct = sigma_power(&t, n, Complex64::new(0.0, 2.0 * r)).unwrap()
                * Complex64::new(0.0, -r * (n as f64).ln()).exp();
            let tw = sigma_twisted(&t, n, r).unwrap();
            assert!((direct.re - tw).abs() < 1e-12 && direct.im.abs() < 1e-12);
        }
    }
}
