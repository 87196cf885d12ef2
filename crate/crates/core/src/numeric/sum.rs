//! Compensated accumulation and thread-count independent parallel sums.

use num_complex::Complex64;
use rayon::prelude::*;

/// Fixed block length of the deterministic reductions. Changing it changes
/// the low bits of every parallel sum, so it is part of the output contract.
pub const BLOCK: usize = 512;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_f64<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

pub fn sum_complex<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let mut acc = ComplexSum::new();
    for z in it {
        acc.add(z);
    }
    acc.value()
}

/// Σ_{i∈range} f(i), split into fixed blocks that are summed in ascending
/// order and combined in block order. The result does not depend on how many
/// worker threads rayon uses.
pub fn par_sum_complex<F>(lo: usize, hi: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let nblocks = (hi - lo).div_ceil(BLOCK);
    let partial: Vec<Complex64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let start = lo + b * BLOCK;
            let end = (start + BLOCK).min(hi);
            sum_complex((start..end).map(&f))
        })
        .collect();
    sum_complex(partial)
}

pub fn par_sum_f64<F>(lo: usize, hi: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    par_sum_complex(lo, hi, |i| Complex64::new(f(i), 0.0)).re
}

/// Ordered parallel map: the output vector is in index order regardless of
/// scheduling, so any sequential fold over it is reproducible.
pub fn par_map<T, F>(lo: usize, hi: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (lo..hi).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_f64(v), 2.0);
    }

    #[test]
    fn block_sum_matches_serial_order_free() {
        let f = |i: usize| Complex64::new(1.0 / (i as f64 + 1.0), (i as f64).sin());
        let a = par_sum_complex(0, 10_000, f);
        let b = sum_complex((0..10_000).map(f));
        assert!((a - b).norm() < 1e-12);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| par_sum_complex(0, 10_000, f));
        assert_eq!(a, c);
    }
}
