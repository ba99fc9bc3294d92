use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::wave::{fwhm, Domain, Envelope, SampledGrid};

fn cfg() -> QuantumConfig {
    QuantumConfig::scaled_defaults()
}

fn small_state() -> BiphotonState {
    // 256 × 256 keeps the property tests quick.
    let ss = 0.75e12;
    let sp = ss / 12.0;
    gaussian_biphoton(sp, ss, 256, sp / 3.0, omega0()).unwrap()
}

fn omega0() -> f64 {
    cfg().carrier().unwrap()
}

#[test]
fn construction_is_normalized_and_symmetric() {
    let s = make_biphoton(&cfg()).unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-9);
    assert!(s.exchange_asymmetry() < 1e-12);
    assert_eq!(s.domain(), Domain::Frequency);
}

#[test]
fn unbounded_pump_factorizes() {
    let c = cfg();
    let s = gaussian_biphoton(f64::INFINITY, c.single_bandwidth, 256, c.single_bandwidth / 32.0, omega0()).unwrap();
    let h = s.n() / 2;
    let scale = s.at(h, h).norm_sqr();
    for i in (0..s.n()).step_by(7) {
        for j in (0..s.n()).step_by(11) {
            let d = (s.at(i, j) * s.at(h, h) - s.at(i, h) * s.at(h, j)).norm();
            assert!(d <= 1e-10 * scale, "{i},{j}");
        }
    }
}

#[test]
fn anti_diagonal_to_diagonal_width_ratio() {
    let (sp, ss) = (0.3e12, 3e12);
    let s = gaussian_biphoton(sp, ss, 1024, sp / 16.0, omega0()).unwrap();
    let n = s.n();
    let coords: Vec<f64> = (0..n).map(|k| s.coordinate(k)).collect();
    let diag: Vec<f64> = (0..n).map(|k| s.at(k, k).norm_sqr()).collect();
    // (k, n − k) is the anti-diagonal through the origin for k ≥ 1.
    let anti: Vec<f64> = (1..n).map(|k| s.at(k, n - k).norm_sqr()).collect();
    let w_diag = fwhm(&diag, &coords).unwrap();
    let w_anti = fwhm(&anti, &coords[1..]).unwrap();
    // Gaussian geometry: σ_p/2 along ν₁ = ν₂ (to 0.1%), σ_s along ν₁ = −ν₂.
    let ratio = w_anti / w_diag;
    assert!((ratio - 2.0 * ss / sp).abs() / ratio < 0.05, "{ratio}");
}

#[test]
fn config_bounds_name_the_violation() {
    let err = QuantumConfig { dnu: cfg().pump_bandwidth, ..cfg() }.validate().unwrap_err();
    assert!(err.to_string().contains("resolution"), "{err}");
    let err = QuantumConfig { grid_size: 256, ..cfg() }.validate().unwrap_err();
    assert!(err.to_string().contains("coverage"), "{err}");
    let wide_pump = QuantumConfig { pump_bandwidth: cfg().single_bandwidth / 5.0, ..cfg() };
    assert!(wide_pump.validate().is_err());
    let bad_window = cfg().with_window(CoincidenceWindow::Fixed { seconds: 0.0 });
    assert!(matches!(bad_window.validate(), Err(Error::Config(_))));
}

#[test]
fn michelson_limits() {
    let s = small_state();
    let same = biphoton_michelson(&s, 0.0).unwrap();
    assert!(same.amplitude().iter().zip(s.amplitude()).all(|(a, b)| (a - b).norm() < 1e-15));
    let dark = biphoton_michelson(&s, 391e-9).unwrap();
    assert!(dark.norm() < 1e-4, "{}", dark.norm());
    assert!(matches!(biphoton_michelson(&joint_temporal(&s).unwrap(), 0.0), Err(Error::Usage(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn michelson_never_adds_probability_and_keeps_symmetry(z in -100e-6f64..100e-6) {
        let s = small_state();
        let out = biphoton_michelson(&s, z).unwrap();
        prop_assert!(out.norm() <= 1.0 + 1e-12);
        prop_assert!(out.exchange_asymmetry() < 1e-12 * s.at(128, 128).norm());
        let t = joint_temporal(&out).unwrap();
        let peak = t.amplitude().iter().map(|a| a.norm()).fold(0.0, f64::max);
        prop_assert!(t.exchange_asymmetry() < 1e-12 * peak);
    }

    #[test]
    fn coincidence_is_monotone_in_window(z in 0.0f64..60e-6, a in 1e-15f64..2e-12, b in 1e-15f64..2e-12) {
        let t = joint_temporal(&biphoton_michelson(&small_state(), z).unwrap()).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(coincidence_probability(&t, lo).unwrap() <= coincidence_probability(&t, hi).unwrap());
    }
}

#[test]
fn temporal_transform_preserves_norm_and_inverts() {
    let s = biphoton_michelson(&small_state(), 17e-6).unwrap();
    let t = joint_temporal(&s).unwrap();
    assert!((t.norm() - s.norm()).abs() < 1e-10);
    let back = joint_spectral(&t).unwrap();
    let scale = s.amplitude().iter().map(|a| a.norm()).fold(0.0, f64::max);
    let err = back.amplitude().iter().zip(s.amplitude()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-10 * scale, "{err}");
}

#[test]
fn separable_state_transforms_to_product() {
    let c = cfg();
    let s = gaussian_biphoton(f64::INFINITY, 1e12, 64, 1e12 / 8.0, omega0()).unwrap();
    let t = joint_temporal(&s).unwrap();
    let h = s.n() / 2;
    // Marginal spectrum of photon 1 (column through ν₂ = 0) transformed in 1-D.
    let axis = SampledGrid::new(s.n(), 1.0 / (64.0 * 1e12 / 8.0), 0.0).unwrap();
    let column: Vec<Complex64> = (0..s.n()).map(|k| s.at(k, h)).collect();
    let one_d = Envelope::new(axis, column, c.carrier().unwrap(), Domain::Frequency).unwrap().from_spectrum().unwrap();
    let f = one_d.samples();
    let norm = s.at(h, h);
    let scale = t.amplitude().iter().map(|a| a.norm()).fold(0.0, f64::max);
    for i in 0..s.n() {
        for j in 0..s.n() {
            let expected = f[i] * f[j] / norm;
            assert!((t.at(i, j) - expected).norm() < 1e-12 * scale);
        }
    }
}

#[test]
fn coincidence_limits() {
    let t = joint_temporal(&small_state()).unwrap();
    let span = t.n() as f64 * t.dt();
    assert!((coincidence_probability(&t, span).unwrap() - 1.0).abs() < 1e-9);
    assert!(matches!(coincidence_probability(&t, 0.0), Err(Error::Domain(_))));
    assert!(matches!(coincidence_probability(&small_state(), 1e-12), Err(Error::Usage(_))));
}

#[test]
fn zero_delay_probability_is_half() {
    let s = make_biphoton(&cfg()).unwrap();
    let p = pair_probability(&s, &CoincidenceWindow::Fixed { seconds: 1e-9 }, 0.0).unwrap();
    assert!((p - 0.5).abs() < 1e-9, "{p}");
}

#[test]
fn large_delay_bright_fringe_is_one_eighth() {
    let c = cfg();
    let s = make_biphoton(&c).unwrap();
    let half = PI * SPEED_OF_LIGHT / omega0();
    let z = (2.0 * SPEED_OF_LIGHT / c.single_bandwidth / half).round() * half;
    let p = pair_probability(&s, &c.window, z).unwrap();
    assert!((p - 0.125).abs() / 0.125 < 0.02, "{p}");
    assert_eq!(c.regime_for(&[z]), Regime::QuantumLargeZ);
    assert_eq!(c.regime_for(&[-1e-6, 1e-6]), Regime::QuantumSmallZ);
}

#[test]
fn half_delay_window_needs_nonzero_delay() {
    assert!(matches!(CoincidenceWindow::HalfDelay.at(0.0), Err(Error::Domain(_))));
    let tw = CoincidenceWindow::HalfDelay.at(-3e-4).unwrap();
    assert!((tw - 3e-4 / (2.0 * SPEED_OF_LIGHT)).abs() < 1e-25);
}

#[test]
fn scan_guards_and_orders() {
    let c = cfg().with_window(CoincidenceWindow::Fixed { seconds: 1e-9 });
    assert!(scan_quantum(&c, &[1e-6, 0.0]).is_err());
    assert!(matches!(scan_quantum(&c, &[1.1 * c.max_path_difference()]), Err(Error::Config(_))));
    let ig = scan_quantum(&c, &[]).unwrap();
    assert!(ig.is_empty());
}

#[test]
fn analytic_forms() {
    let w0 = omega0();
    assert_eq!(analytic_p_small(0.0, w0), 0.5);
    assert_eq!(analytic_p_large(0.0, w0), 0.125);
    assert_eq!(analytic_p_small(0.0, w0) / analytic_p_large(0.0, w0), 4.0);
    let quarter = PI / 2.0 * SPEED_OF_LIGHT / w0;
    assert!(analytic_p_large(quarter, w0) < 1e-16);
    assert!((analytic_p_small(quarter, w0) - 0.125).abs() < 1e-15);
}
