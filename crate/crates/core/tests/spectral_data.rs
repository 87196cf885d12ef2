use std::io::Cursor;
use std::path::PathBuf;

use hecke_core::spectral_data::*;
use hecke_core::specfun::WeightParams;
use hecke_core::zeta::zeta_critical;
use hecke_core::Error;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn form(kappa: f64, t: Vec<f64>) -> MaassForm {
    MaassForm { kappa, parity: 1, alpha: 1.0, hecke: t, source_id: "x".into() }
}

#[test]
fn recursion_by_construction_is_accepted() {
    let a = 0.7;
    let f = form(10.0, vec![1.0, a, 0.0, a * a - 1.0]);
    assert!(f.validate().is_ok());
}

#[test]
fn broken_multiplicativity_names_pair() {
    let mut f = eisenstein_pseudo_form(12.0, 1, 1.0, 10, "bad");
    f.hecke[5] += 0.01;
    let err = f.validate().unwrap_err();
    match err {
        Error::Validation(msg) => assert!(msg.contains("(2, 3)"), "{msg}"),
        e => panic!("{e}"),
    }
}

#[test]
fn broken_recursion_detected() {
    let mut f = eisenstein_pseudo_form(12.0, 1, 1.0, 10, "bad");
    f.hecke[7] += 0.01;
    let msg = f.validate().unwrap_err().to_string();
    assert!(msg.contains("p = 2"), "{msg}");
}

#[test]
fn basic_invariants() {
    assert!(form(10.0, vec![0.5]).validate().is_err());
    let mut f = form(10.0, vec![1.0]);
    f.alpha = 0.0;
    assert!(f.validate().is_err());
    f.alpha = 1.0;
    f.parity = 0;
    assert!(f.validate().is_err());
    assert!(SpectralDataset::new(vec![], None).is_err());
    let dup = vec![form(10.0, vec![1.0]), form(10.0, vec![1.0])];
    assert!(SpectralDataset::new(dup, None).is_err());
    assert!(SpectralDataset::new(vec![form(10.0, vec![1.0])], Some(11.0)).is_err());
}

#[test]
fn pseudo_forms_satisfy_hecke_relations() {
    for kappa in [3.0, 17.5, 60.25] {
        let f = eisenstein_pseudo_form(kappa, -1, 0.5, 400, "e");
        f.validate().unwrap();
        assert!((f.t(2) - 2.0 * (kappa * 2f64.ln()).cos()).abs() < 1e-15);
    }
}

#[test]
fn sorted_and_m_min() {
    let ds = SpectralDataset::new(
        vec![eisenstein_pseudo_form(20.0, 1, 1.0, 8, "b"), eisenstein_pseudo_form(10.0, 1, 1.0, 5, "a")],
        Some(15.0),
    )
    .unwrap();
    assert_eq!(ds.forms[0].source_id, "a");
    assert_eq!(ds.m_min, 5);
    assert!(ds.is_complete_to(15.0) && !ds.is_complete_to(16.0));
}

#[test]
fn fixture_loads() {
    let ds = load_spectral_dataset(&fixture("pseudo_small.jsonl")).unwrap();
    assert!(ds.forms.len() >= 10);
    assert_eq!(ds.complete_up_to, None);
    assert_eq!(ds.m_min, 60);
}

#[test]
fn negative_central_values_are_truncation_error() {
    // Pseudo-forms have H(1/2) = |ζ(1/2+iκ)|² ≥ 0 exactly; the Lemma 2 sum can
    // dip below zero only by its own truncation error.
    let ds = load_spectral_dataset(&fixture("pseudo_small.jsonl")).unwrap();
    let mut negative = 0;
    for f in &ds.forms {
        let z = zeta_critical(f.kappa).unwrap().value.norm_sqr();
        match hecke_central_value(f, &WeightParams::default()) {
            Ok(v) => assert!(v >= -1e-6),
            Err(Error::NumericFailure { partial: Some(v), .. }) => {
                negative += 1;
                assert!(v < 0.0 && (v - z).abs() < 0.25, "{}: {v} vs {z}", f.source_id);
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(negative < ds.forms.len() / 4, "{negative} negative");
}

#[test]
fn bad_fixtures_rejected() {
    match load_spectral_dataset(&fixture("bad_multiplicative.jsonl")) {
        Err(Error::Validation(m)) => assert!(m.contains("(2, 3)"), "{m}"),
        other => panic!("{other:?}"),
    }
    match load_spectral_dataset(&fixture("bad_syntax.jsonl")) {
        Err(Error::Format { line, .. }) => assert_eq!(line, Some(3)),
        other => panic!("{other:?}"),
    }
    match load_spectral_dataset(&fixture("empty.jsonl")) {
        Err(Error::Validation(_)) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn schema_mismatch_is_format_error() {
    let text = "{\"schema\":\"maass-v0\",\"complete_up_to\":null}\n";
    assert!(matches!(parse_spectral_dataset(Cursor::new(text)), Err(Error::Format { line: Some(1), .. })));
}

#[test]
fn write_parse_roundtrip() {
    let ds = synthetic_dataset(25.0, 40).unwrap();
    let mut buf = Vec::new();
    write_spectral_dataset(&ds, &mut buf).unwrap();
    let back = parse_spectral_dataset(Cursor::new(buf)).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn central_value_single_term() {
    let f = form(20.0, {
        let mut t = vec![0.0; 40];
        t[0] = 1.0;
        t
    });
    let p = WeightParams::default();
    let v = hecke_central_value(&f, &p).unwrap();
    let (y, h, _) = hecke_core::zeta::lemma2_window(20.0, p.delta, p.c_lemma2);
    assert!((v - (-(1.0 / y).powf(h)).exp()).abs() < 1e-15);
    assert!((v - 1.0).abs() < 1e-3);
}

#[test]
fn central_value_short_list_reports_required_length() {
    let f = eisenstein_pseudo_form(40.0, 1, 1.0, 10, "short");
    match hecke_central_value(&f, &WeightParams::default()) {
        Err(Error::ResourceLimit { required: Some(m), .. }) => assert!(m > 10),
        other => panic!("{other:?}"),
    }
}

#[test]
fn central_value_tracks_zeta_square() {
    // For pseudo-forms H(1/2) approximates |ζ(1/2+iκ)|²; Lemma 2's truncation
    // leaves an O(0.1) discrepancy at these heights.
    for kappa in [18.0, 30.0, 45.0] {
        let f = eisenstein_pseudo_form(kappa, 1, 1.0, 400, "e");
        let h = hecke_central_value(&f, &WeightParams::default()).unwrap();
        let z = zeta_critical(kappa).unwrap().value.norm_sqr();
        assert!((h - z).abs() < 0.25 * z.max(1.0), "kappa {kappa}: {h} vs {z}");
    }
}

#[test]
fn alpha_log_space() {
    let a = alpha_from_rho((std::f64::consts::PI * 10.0).cosh(), 10.0).unwrap();
    assert!((a - 1.0).abs() < 1e-13);
    let big = alpha_from_log_rho(std::f64::consts::PI * 500.0, 500.0).unwrap();
    assert!(big.is_finite() && (big - 2.0).abs() < 1e-12);
    let a1 = alpha_from_rho(3.0, 20.0).unwrap();
    let a2 = alpha_from_rho(3.0, 21.0).unwrap();
    assert!(a2 < a1 && a2 > 0.0);
    assert!(alpha_from_rho(0.0, 1.0).is_err());
}

#[test]
fn weyl_report_counts() {
    let ds = synthetic_dataset(40.0, 4).unwrap();
    let (n, main) = weyl_report(&ds, 40.0);
    assert_eq!(n, ds.forms.len());
    assert!((n as f64 / main - 1.0).abs() < 0.05);
}

#[test]
fn empty_spectrum_only_below_first_cusp() {
    assert!(SpectralDataset::empty_below_first_cusp(9.0).is_ok());
    assert!(SpectralDataset::empty_below_first_cusp(10.0).is_err());
}
