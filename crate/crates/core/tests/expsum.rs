use std::f64::consts::{E, PI};

use hecke_core::arithmetic::build_divisor_table;
use hecke_core::expsum::*;
use hecke_core::spectral_data::synthetic_dataset;
use hecke_core::specfun::WeightParams;
use hecke_core::{Error, QuadratureSpec};

fn pt(kappa: f64, alpha: f64, h_half: f64) -> SpectralPoint {
    SpectralPoint { kappa, alpha, h_half }
}

fn meta(r: &hecke_core::report::ExpSumResult, key: &str) -> f64 {
    r.meta[key].parse().unwrap()
}

fn cloud() -> Vec<SpectralPoint> {
    (0..40)
        .map(|i| {
            let k = 20.0 + 0.5 * i as f64 + 0.1 * (i as f64).sin();
            pt(k, 0.3 + 0.01 * i as f64, 1.5 * (0.7 * i as f64).cos())
        })
        .collect()
}

#[test]
fn spectral_sum_small_cases() {
    let none = spectral_s_m_points(&[pt(30.0, 1.0, 1.0)], 1, 10.0, 20.0, 100.0).unwrap();
    assert_eq!(none.value.re, 0.0);
    assert_eq!(none.terms, 0);
    let one = spectral_s_m_points(&[pt(10.0, 1.0, 2.0)], 3, 8.0, 12.0, 100.0).unwrap();
    let expect = 8.0 * (10.0 * (400.0 * E / 10.0).ln()).cos();
    assert!((one.value.re - expect).abs() < 1e-14);
    assert!(spectral_s_m_points(&[], 4, 8.0, 12.0, 100.0).is_err());
    assert!(spectral_s_m_points(&[], 1, 8.0, 17.0, 100.0).is_err());
}

#[test]
fn spectral_sum_triangle_and_additivity() {
    let pts = cloud();
    for m in 1..=3u8 {
        let s = spectral_s_m_points(&pts, m, 20.0, 40.0, 1e3).unwrap().value.re;
        let abs: f64 = pts.iter().filter(|p| p.kappa > 20.0).map(|p| p.alpha * p.h_half.powi(m as i32).abs()).sum();
        assert!(s.abs() <= abs);
    }
    let whole = spectral_s_m_points(&pts, 3, 20.0, 40.0, 1e3).unwrap().value.re;
    let lo = spectral_s_m_points(&pts, 3, 20.0, 30.0, 1e3).unwrap().value.re;
    let hi = spectral_s_m_points(&pts, 3, 30.0, 40.0, 1e3).unwrap().value.re;
    assert!((whole - (lo + hi)).abs() <= 1e-13 * whole.abs().max(1.0));
}

#[test]
fn dataset_without_claim_is_rejected() {
    let ds = synthetic_dataset(40.0, 4).unwrap();
    let p = WeightParams::new(100.0, 20.0, 3.0);
    assert!(matches!(spectral_s_m(&ds, 1, 20.0, 30.0, 100.0, &p), Err(Error::Validation(_))));
    assert!(matches!(s_t_delta(&ds, 100.0, 10.0, &p), Err(Error::Validation(_))));
    let q = QuadratureSpec::default();
    assert!(matches!(mean_square_s(&ds, 1, 20.0, 30.0, 100.0, &p, &q, false), Err(Error::Validation(_))));
}

#[test]
fn divisor_side_matches_brute_force() {
    // 30-digit double loops, T = 10⁴, C1 = 1, C2 = 4, c0 = 1.
    let table = build_divisor_table(4_000_000).unwrap();
    let c = MainTermConsts::default();
    let v = divisor_side_main(50.0, 1e4, &c, &table).unwrap();
    let oracle = 11080.985382145057734;
    assert!((v.value.re - oracle).abs() <= 1e-9 * oracle.abs(), "{}", v.value.re);
    assert!(v.value.re.abs() <= meta(&v, "trivial_bound"));
    assert_eq!(v.meta["omitted"], "phi_l corrections for l >= 1");
    assert!(meta(&v, "envelope") > 0.0);

    let t50 = theorem2_rhs(2, 50.0, 1e4, &c, &table).unwrap();
    let t60 = theorem2_rhs(2, 60.0, 1e4, &c, &table).unwrap();
    let oracles = [(&t50, 133.18769662517855732, 958.31673725735645511), (&t60, -1191.66421221667011834, -223.62767498889206712)];
    for (r, re, im) in oracles {
        let o = num_complex::Complex64::new(re, im);
        assert!((r.value - o).norm() <= 1e-9 * o.norm(), "{}", r.value);
        assert!(r.value.norm() <= meta(r, "trivial_bound"));
    }
    let h1 = theorem2_rhs(1, 60.0, 1e4, &c, &table).unwrap();
    assert_eq!(h1.value, t60.value);
    assert!(meta(&h1, "envelope") < meta(&t60, "envelope"));
    assert!(theorem2_rhs(3, 60.0, 1e4, &c, &table).is_err());
}

#[test]
fn arithmetic_sides_edge_cases() {
    let table = build_divisor_table(100).unwrap();
    let c = MainTermConsts::default();
    assert_eq!(divisor_side_main(0.3, 1e4, &c, &table).unwrap().value.re, 0.0);
    let narrow = MainTermConsts { c2: 1.0001, ..c };
    let e = theorem2_rhs(2, 3.0, 10.0, &narrow, &table).unwrap();
    assert_eq!((e.value.norm(), e.terms), (0.0, 0));
    assert!(matches!(divisor_side_main(50.0, 1e4, &c, &table), Err(Error::ResourceLimit { .. })));
    assert!(matches!(theorem2_rhs(2, 50.0, 1e4, &c, &table), Err(Error::ResourceLimit { .. })));
    let bad = MainTermConsts { c1: 4.0, c2: 1.0, c0: 1.0 };
    assert!(divisor_side_main(5.0, 10.0, &bad, &table).is_err());
}

#[test]
fn s_t_delta_cases() {
    let (t, d) = (100.0, 10.0);
    assert_eq!(s_t_delta_points(&[], t, d).unwrap().value.re, 0.0);
    let beyond = s_t_delta_cutoff(t, d) + 1.0;
    assert_eq!(s_t_delta_points(&[pt(beyond, 1.0, 1.0)], t, d).unwrap().terms, 0);
    // At κ = 2T/Δ the Gaussian factor is exactly e^{−1}.
    let k = 2.0 * t / d;
    let v = s_t_delta_points(&[pt(k, 0.5, 1.2)], t, d).unwrap().value.re;
    let plain = PI * (t / 2.0).sqrt() * 0.5 * 1.2f64.powi(3) * k.powf(-1.5) * (k * (k / (4.0 * E * t)).ln()).cos();
    assert!((v - plain * (-1f64).exp()).abs() < 1e-14 * plain.abs());
}

#[test]
fn bump_shape() {
    let t = 50.0;
    assert_eq!(smooth_bump(1.5 * t, t), 1.0);
    assert_eq!(smooth_bump(t, t), 1.0);
    assert_eq!(smooth_bump(0.5 * t, t), 0.0);
    assert_eq!(smooth_bump(2.5 * t, t), 0.0);
    assert_eq!(smooth_bump(3.0 * t, t), 0.0);
    for i in 0..20 {
        let u = 0.5 * t + 2.0 * t * (i as f64 + 0.5) / 20.0;
        let h = 1e-5 * t;
        let d = (smooth_bump(u + h, t) - smooth_bump(u - h, t)) / (2.0 * h);
        assert!(d.abs() <= 10.0 / t, "t={u}: {d}");
        assert!((0.0..=1.0).contains(&smooth_bump(u, t)));
    }
}

#[test]
fn mean_square_cases() {
    let q = QuadratureSpec::default();
    let (k, t) = (20.0, 100.0);
    let a = 0.8 * 1.5;
    let one = mean_square_s_points(&[pt(k, 0.8, 1.5)], 1, 15.0, 25.0, t, &q, false).unwrap().value.re;
    assert!((one - a * a * t / 2.0).abs() <= 0.05 * a * a * t / 2.0, "{one}");
    assert_eq!(mean_square_s_points(&[], 1, 15.0, 25.0, t, &q, false).unwrap().value.re, 0.0);

    let pts = cloud();
    let base = mean_square_s_points(&pts, 2, 20.0, 40.0, t, &q, true).unwrap().value.re;
    assert!(base >= 0.0);
    let scaled: Vec<SpectralPoint> = pts.iter().map(|p| pt(p.kappa, 3.0 * p.alpha, p.h_half)).collect();
    let s = mean_square_s_points(&scaled, 2, 20.0, 40.0, t, &q, true).unwrap().value.re;
    assert!((s - 9.0 * base).abs() <= 1e-10 * 9.0 * base);
}

#[test]
fn moment_check_without_data_is_inconclusive() {
    let ds = hecke_core::spectral_data::SpectralDataset::empty_below_first_cusp(9.5).unwrap();
    let p = WeightParams::new(200.0, 20.0, 3.0);
    let rep = moment_check(&ds, 200.0, 20.0, &p, &MomentCheckOptions::default(), &QuadratureSpec::default()).unwrap();
    assert_eq!(rep.verdict, hecke_core::report::Verdict::Inconclusive);
    assert!(rep.lhs.is_finite() && rep.rhs.is_finite());
    assert!(rep.notes.iter().any(|n| n.contains("not complete")));
    assert!(rep.notes.iter().any(|n| n.contains("spectral terms: 0")));
}
