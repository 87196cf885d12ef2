use hecke_core::arithmetic::build_divisor_table;
use hecke_core::motohashi::*;
use hecke_core::specfun::WeightParams;
use hecke_core::QuadratureSpec;
use num_complex::Complex64;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn weight(k: f64) -> WeightKernel {
    WeightKernel::new(WeightParams::new(5000.0, k, 3.0))
}

#[test]
fn zero_kernel_gives_zero_everywhere() {
    let z = ZeroKernel;
    assert_eq!(h_hat(&z, Complex64::new(0.3, 1.0), &q()).unwrap().value, Complex64::new(0.0, 0.0));
    assert_eq!(psi_plus(5.0, &z, &q()).unwrap().value, Complex64::new(0.0, 0.0));
    assert_eq!(psi_minus(3.0, &z, &q()).unwrap().value, Complex64::new(0.0, 0.0));
    assert_eq!(psi_minus(0.5, &z, &q()).unwrap().value, Complex64::new(0.0, 0.0));
}

#[test]
fn hat_structure_for_real_gaussian() {
    // For real even h, ĥ(σ) is purely imaginary for real σ and ĥ(1/2) = 0.
    let g = GaussianKernel::pair(3.0, 1.5);
    let half = h_hat(&g, Complex64::new(0.5, 0.0), &q()).unwrap().value;
    assert!(half.norm() < 1e-9, "{half}");
    for s in [0.2, 0.4, 0.7] {
        let v = h_hat(&g, Complex64::new(s, 0.0), &q()).unwrap().value;
        assert!(v.re.abs() < 1e-9 * v.im.abs().max(1.0), "s={s}: {v}");
    }
}

#[test]
fn hat_derivative_three_ways() {
    let g = GaussianKernel::pair(3.0, 1.5);
    let fd = h_hat_derivatives_fd(&g, FD_STEP, &q()).unwrap();
    let (cs, _) = h_hat_d1_complex_step(&g, FD_STEP, &q()).unwrap();
    let closed = h_hat_derivatives_closed(&g, &q()).unwrap();
    assert!(rel(fd.d1, cs) < 1e-6);
    assert!(rel(fd.d1, closed.d1) < 1e-8);
    assert!(rel(fd.d2, closed.d2) < 1e-6);
    assert!(fd.d1_err < 1e-6 * fd.d1.norm());
}

#[test]
fn kappa_closed_form_matches_line_integral() {
    for z in [1e-3, 0.7, 3.0, 4.5, 100.0] {
        let (line, err) = kappa_mb(z, &q()).unwrap();
        let closed = kappa(z).unwrap();
        assert!((line - closed).norm() < 1e-10 * closed.norm() + 10.0 * err, "z={z}");
    }
    assert!(kappa(0.0).is_err());
}

#[test]
fn psi_plus_representations_agree_for_weight_kernel() {
    let h = weight(30.0);
    let v = psi_plus(20.0, &h, &q()).unwrap();
    assert!(rel(v.value, v.check) < 1e-3);
    let mb = MellinTable::new(&h, &q()).unwrap().psi_plus(20.0).unwrap().0;
    assert!(rel(v.value, mb) < 1e-6);
}

#[test]
fn psi_plus_sign_for_tanh_is_invisible() {
    let h = weight(30.0);
    let a = psi_plus_double(20.0, &h, &q(), PsiOptions::default()).unwrap();
    let b = psi_plus_double(20.0, &h, &q(), PsiOptions { sign_for_tanh: true }).unwrap();
    // tanh(πr) − sgn(r) = O(e^{−2πr}) and h lives at r ≥ 9.
    let shift = (-2.0 * std::f64::consts::PI * 9.0).exp();
    assert!((a.0 - b.0).norm() <= shift * a.0.norm() + 10.0 * (a.1 + b.1), "{:?} {:?}", a, b);
}

#[test]
fn psi_minus_paths_agree_for_gaussian() {
    let g = GaussianKernel::pair(3.0, 1.5);
    let mt = MellinTable::new(&g, &q()).unwrap();
    for x in [1.5, 3.0] {
        let v = psi_minus(x, &g, &q()).unwrap();
        assert!(rel(v.value, v.check) < 1e-9, "x={x} {:?}", v);
        assert!(rel(v.value, mt.psi_minus(x).unwrap().0) < 1e-8, "x={x}");
    }
    let half = psi_minus(0.5, &g, &q()).unwrap();
    assert!(rel(half.value, half.check) < 1e-2);
    assert!(rel(half.value, mt.psi_minus(0.5).unwrap().0) < 1e-8);
}

#[test]
fn psi_minus_weight_kernel_below_envelope() {
    let p = WeightParams::new(5000.0, 30.0, 3.0);
    let h = WeightKernel::new(p);
    // x = 1 + m/f = 3, so f/m = 1/2.
    let env = 0.5 * p.t * p.g * (-std::f64::consts::PI * p.k / 2.0).exp();
    let v = psi_minus(3.0, &h, &q()).unwrap();
    assert!(v.value.norm() + v.abs_err <= env, "{:?} vs {env}", v);
    assert!(matches!(psi_minus(1.0, &h, &q()), Err(hecke_core::Error::Domain(_))));
}

#[test]
fn h_terms_small_cases() {
    let table = build_divisor_table(4000).unwrap();
    let p = WeightParams::new(5000.0, 30.0, 3.0);
    let h = WeightKernel::new(p);
    let ctx = Motohashi::new(&h, &table, q());
    assert_eq!(h_term(&ctx, 4, 1, 1).unwrap().value, Complex64::new(0.0, 0.0));
    let t5 = h_term(&ctx, 5, 3, 1).unwrap();
    assert_eq!(t5.value, Complex64::new(0.0, 0.0));
    assert!(t5.truncation_error.is_finite() && !t5.flags.is_empty());
    for f in [1u64, 6, 12] {
        let t6 = h_term(&ctx, 6, f, 1).unwrap();
        let s: f64 = (1..=f).filter(|d| f % d == 0).map(|d| 1.0 / d as f64).sum();
        let scale = 12.0 / std::f64::consts::PI.powi(2) * s * (f as f64).sqrt();
        assert!(t6.value.norm() <= scale * (-p.k * p.k / (2.0 * p.g * p.g)).exp());
    }
    assert!(h_term(&ctx, 8, 1, 1).is_err());
    assert!(h_term(&ctx, 1, 0, 1).is_err());
}

#[test]
fn h7_at_f1_matches_frozen_quadrature() {
    // −(2/π) ∫_0^∞ |ζ(1/2+ir)|⁴ |ζ(1+2ir)|^{−2} h(r) dr for the Gaussian pair
    // at ±12 of width 1.5, evaluated at 25 digits.
    let oracle = -8.266927856245922;
    let table = build_divisor_table(100).unwrap();
    let g = GaussianKernel::pair(12.0, 1.5);
    let ctx = Motohashi::new(&g, &table, q());
    let v = h_term(&ctx, 7, 1, 1).unwrap();
    assert!((v.value.re - oracle).abs() < 1e-4 * oracle.abs(), "{:?}", v);
    assert!(v.value.im.abs() < 1e-8);
}

#[test]
fn h_terms_linear_and_even_in_h() {
    // With a purely relative quadrature spec every adaptive decision is
    // homogeneous in h, so scaling by 2 or −2i must carry through exactly.
    let spec = QuadratureSpec { abs_tol: 0.0, ..q() };
    let table = build_divisor_table(4000).unwrap();
    let g = GaussianKernel::pair(8.0, 1.5);
    let base = Motohashi::new(&g, &table, spec);
    let refl = Reflected(&g);
    let rf = Motohashi::new(&refl, &table, spec);
    let factors = [Complex64::new(2.0, 0.0), Complex64::new(0.0, -2.0)];
    let scaled: Vec<Scaled> = factors.iter().map(|&a| Scaled { inner: &g, factor: a }).collect();
    let ctxs: Vec<Motohashi> = scaled.iter().map(|s| Motohashi::new(s, &table, spec)).collect();
    for k in 1..=7u8 {
        for f in [1u64, 4] {
            let x = h_term(&base, k, f, 40).unwrap().value;
            for (a, c) in factors.iter().zip(&ctxs) {
                let y = h_term(c, k, f, 40).unwrap().value;
                assert!((y - x * a).norm() <= 1e-10 * (x * a).norm(), "k={k} f={f} a={a}: {x} {y}");
            }
            let z = h_term(&rf, k, f, 40).unwrap().value;
            assert!((z - x).norm() <= 1e-12 * x.norm(), "k={k} f={f}: {x} {z}");
        }
    }
}

#[test]
fn h1_does_not_blow_up() {
    let p = WeightParams::new(5000.0, 30.0, 3.0);
    let h = WeightKernel::new(p);
    let table = build_divisor_table(200).unwrap();
    let ctx = Motohashi::new(&h, &table, q());
    let total: f64 = (1..=90u64)
        .map(|f| {
            let t = h_term(&ctx, 1, f, 1).unwrap();
            (t.value.norm() + t.truncation_error) / (f as f64).sqrt()
        })
        .sum();
    assert!(total.is_finite() && total < 10.0 * p.k.powf(1.5), "{total}");
}

#[test]
fn spectral_rhs_edge_cases_and_resummation() {
    let small = WeightParams::new(5000.0, 0.3, 3.0);
    let hs = WeightKernel::new(small);
    let t0 = build_divisor_table(10).unwrap();
    let r = spectral_rhs(&Motohashi::new(&hs, &t0, q()), &small).unwrap();
    assert_eq!(r.value, Complex64::new(0.0, 0.0));

    let p = WeightParams { c_lambda: 3.0, ..WeightParams::new(500.0, 10.0, 2.0) };
    assert!((-(3f64).powf(p.lambda())).exp() < 1e-12);
    let h = WeightKernel::new(p);
    let table = build_divisor_table(required_table_limit(&p)).unwrap();
    let ctx = Motohashi::new(&h, &table, q());
    let parts = spectral_rhs_terms(&ctx, &p).unwrap();
    assert_eq!(parts.len(), 30);
    let total = spectral_rhs(&ctx, &p).unwrap();
    let resum: Complex64 = parts.iter().map(|(_, v, _, _)| *v).sum();
    assert!((total.value - resum).norm() <= 1e-12 * resum.norm());
    assert_eq!(total.meta.get("omitted").map(String::as_str), Some("U_nu correction sum"));
    let last = parts.last().unwrap();
    assert!(last.1.norm() <= 1e-12 * total.value.norm().max(1.0));
}
