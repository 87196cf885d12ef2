use hecke_core::motohashi::{FnKernel, GaussianKernel, Kernel, Scaled, ZeroKernel};
use hecke_core::spectral_data::{synthetic_dataset, SpectralDataset};
use hecke_core::trace::*;
use hecke_core::{Error, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// (r² + 1/4) e^{−(r/1.5)²}: its mass sits below the first cusp form.
fn gap_kernel() -> FnKernel {
    FnKernel::new(|r: Complex64| (r * r + 0.25) * (-(r / 1.5) * (r / 1.5)).exp(), (0.0, 1.5 * 41.5f64.sqrt()))
}

fn gap_dataset() -> SpectralDataset {
    SpectralDataset::empty_below_first_cusp(9.5).unwrap()
}

#[test]
fn f_plus_of_zero_is_zero() {
    assert_eq!(f_plus(&ZeroKernel, 1.0, &q()).unwrap(), 0.0);
}

#[test]
fn f_plus_two_paths_and_oracle() {
    // mpmath, 25 digits: (2i/π)∫ r sech(πr) J_{2ir}(1) e^{−r²/4} dr.
    let oracle = 0.2362923480970019751;
    let g = GaussianKernel::centered(2.0);
    let (s, se) = f_plus_series(&g, 1.0, &q()).unwrap();
    let (i, ie) = f_plus_integral(&g, 1.0, &q()).unwrap();
    assert!((s - i).abs() <= 1e-5, "{s} {i}");
    assert!((s - oracle).abs() < 1e-12 && se < 1e-10);
    assert!((i - oracle).abs() < 1e-10 && ie < 1e-9);
}

#[test]
fn f_plus_is_linear() {
    let g = GaussianKernel::centered(2.0);
    let base = f_plus(&g, 3.0, &q()).unwrap();
    for c in [2.0, -0.5] {
        let s = Scaled { inner: &g, factor: Complex64::new(c, 0.0) };
        let v = f_plus(&s, 3.0, &q()).unwrap();
        assert!((v - c * base).abs() <= 1e-10 * (c * base).abs(), "{c}");
    }
}

#[test]
fn f_plus_domain_and_reality() {
    let g = GaussianKernel::centered(2.0);
    assert!(matches!(f_plus(&g, 31.0, &q()), Err(Error::Domain(_))));
    assert!(matches!(f_plus(&g, 0.0, &q()), Err(Error::InvalidArgument(_))));
    // An odd kernel makes f₊ purely imaginary, which the real-valued form rejects.
    let odd = FnKernel::new(|r: Complex64| r * (-r * r).exp(), (0.0, 7.0));
    assert!(matches!(f_plus(&odd, 1.0, &q()), Err(Error::NumericFailure { .. })));
}

#[test]
fn spectral_gap_trace_check() {
    let f = gap_kernel();
    let rep = kuznetsov_check(&gap_dataset(), 1, 1, &f, &TraceCaps::default(), &q()).unwrap();
    assert!(rep.is_complete(), "{:?}", rep.flags);
    assert_eq!(rep.discrete, 0.0);
    assert!(rep.truncation.discrete_tail_bound < 1e-12);
    // mpmath at 25 digits.
    assert!((rep.continuous - 2.1524565630437).abs() < 1e-9, "{}", rep.continuous);
    assert!((rep.delta_term - 0.5667714276442595705).abs() < 1e-12);
    assert!(rep.residual <= rep.error_budget(), "{rep:?}");
    assert!(rep.relative_residual() < 1e-5, "{rep:?}");
    assert_eq!(rep.lhs, rep.discrete + rep.continuous);
    assert_eq!(rep.rhs, rep.delta_term + rep.kloosterman_sum);
}

#[test]
fn trace_check_is_linear() {
    let f = gap_kernel();
    let spec = QuadratureSpec { abs_tol: 0.0, ..q() };
    let caps = TraceCaps { l_cap: 60, ..TraceCaps::default() };
    let a = kuznetsov_check(&gap_dataset(), 1, 1, &f, &caps, &spec).unwrap();
    let s = Scaled { inner: &f, factor: Complex64::new(3.0, 0.0) };
    let b = kuznetsov_check(&gap_dataset(), 1, 1, &s, &caps, &spec).unwrap();
    for (x, y) in [(a.lhs, b.lhs), (a.rhs, b.rhs), (a.kloosterman_sum, b.kloosterman_sum)] {
        assert!((y - 3.0 * x).abs() <= 1e-9 * (3.0 * x).abs(), "{x} {y}");
    }
}

#[test]
fn off_diagonal_delta_and_cap_doubling() {
    let g = GaussianKernel::centered(6.0);
    let ds = synthetic_dataset(40.0, 4).unwrap();
    let caps = TraceCaps::default();
    let rep = kuznetsov_check(&ds, 1, 2, &g, &caps, &q()).unwrap();
    assert_eq!(rep.delta_term, 0.0);
    let (doubled, _) = kloosterman_side(1, 2, &g, 2 * caps.l_cap, &q()).unwrap();
    let change = (doubled - rep.kloosterman_sum).abs();
    assert!(change < rep.truncation.kloosterman_tail_bound, "{change} vs {}", rep.truncation.kloosterman_tail_bound);
}

#[test]
fn incomplete_dataset_is_flagged() {
    let g = GaussianKernel::centered(6.0);
    let ds = synthetic_dataset(40.0, 2).unwrap();
    let caps = TraceCaps { l_cap: 20, ..TraceCaps::default() };
    let rep = kuznetsov_check(&ds, 1, 1, &g, &caps, &q()).unwrap();
    assert!(!rep.is_complete());
    assert!(rep.truncation.discrete_tail_bound.is_infinite());
    assert!(matches!(rep.require_complete(), Err(Error::Validation(_))));
    assert!(serde_json::to_string(&rep).is_ok());
    assert!(matches!(
        kuznetsov_check(&ds, 3, 1, &g, &caps, &q()),
        Err(Error::ResourceLimit { required: Some(3), .. })
    ));
}

#[test]
fn completeness_claim_below_needed_cutoff_is_flagged() {
    // e^{−(r/6)²} still has mass at the first cusp form, so a claim up to 9.5
    // leaves a tail bound above tolerance.
    let g = GaussianKernel::centered(6.0);
    let caps = TraceCaps { l_cap: 20, ..TraceCaps::default() };
    let rep = kuznetsov_check(&gap_dataset(), 1, 1, &g, &caps, &q()).unwrap();
    assert!(rep.truncation.discrete_tail_bound > caps.tol);
    assert!(!rep.is_complete());
}

#[test]
fn sign_for_tanh_shift_in_delta_term() {
    let g = GaussianKernel::pair(10.0, 1.0);
    let b = g.support().1;
    let (t, te) = delta_integral(&g, b, &q(), false).unwrap();
    let (s, se) = delta_integral(&g, b, &q(), true).unwrap();
    // |tanh(πr) − 1| ≤ 2e^{−2πr}; |h| at r ≤ 5 is below e^{−25}.
    let bound = 2.0 / (PI * PI) * (2.0 * (-2.0 * PI * 5.0).exp() * 5.0 * 5.0 + 2.0 * (-25.0f64).exp() * 5.0 * 5.0);
    assert!((t - s).abs() <= bound + te + se, "{}", (t - s).abs());
}
