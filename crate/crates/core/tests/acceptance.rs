//! Acceptance suite: one PASS/FAIL line per criterion, run on the bundled
//! scenarios. Exits non-zero if any criterion fails.

use std::f64::consts::{LN_2, PI};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use superres_core::analysis::{calibrate_displacement, fit_fringe};
use superres_core::classical::{analytic_sfg, apply_bandpass, scan_classical, ClassicalConfig, ClassicalSimulator, FilterSpec};
use superres_core::quantum::{scan_quantum, QuantumConfig};
use superres_core::scenario::{Mode, RunConfig, RunOutput};
use superres_core::wave::units::{MICROMETER, NANOMETER};
use superres_core::wave::{wavelength_to_omega, SPEED_OF_LIGHT};
use superres_core::{Envelope, Interferogram, Regime, SampledGrid, ScanMetadata};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn load(name: &str) -> RunConfig {
    let path = scenario_dir().join(format!("{name}.toml"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    toml::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(cfg: &RunConfig, mode: Mode) -> Result<RunOutput, String> {
    let plan = cfg.plan(mode, &scenario_dir()).map_err(|e| e.to_string())?;
    plan.execute().map_err(|e| e.to_string())
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn period_halving(fig3: &RunOutput, elapsed: Duration) -> Verdict {
    let m = &fig3.metrics;
    let (Some(wl), Some(sfg)) = (
        m.series("white-light").and_then(|s| s.fringe.as_ref()),
        m.series("sum-frequency").and_then(|s| s.fringe.as_ref()),
    ) else {
        return Verdict::new(false, "fringe fit missing");
    };
    let ratio = m.period_ratio.as_ref().map_or(f64::NAN, |r| r.value);
    let pass = within(wl.period, 782e-9, 5e-3)
        && within(sfg.period, 391e-9, 5e-3)
        && (ratio - 0.5).abs() <= 0.005
        && elapsed < Duration::from_secs(60);
    Verdict::new(
        pass,
        format!(
            "periods {:.2} nm / {:.2} nm (targets 782 / 391 +-0.5%), ratio {ratio:.5} (0.500 +- 0.005)",
            wl.period / NANOMETER,
            sfg.period / NANOMETER
        ),
    )
}

fn peak_ratio(fig3: &RunOutput) -> Verdict {
    let Some(r) = &fig3.metrics.peak_ratio else {
        return Verdict::new(false, "peak ratio missing");
    };
    Verdict::new(within(r.value, 4.0, 0.01), format!("white-light / sum-frequency peak {:.4} (4.00 +- 1%)", r.value))
}

fn visibility(fig3: &RunOutput) -> Verdict {
    let v = |name: &str| fig3.metrics.series(name).and_then(|s| s.fringe.as_ref()).map_or(f64::NAN, |f| f.visibility);
    let (wl, sfg) = (v("white-light"), v("sum-frequency"));
    Verdict::new(
        wl >= 0.999 && sfg >= 0.999,
        format!("white-light {wl:.5}, sum-frequency {sfg:.5} (both >= 0.999; laboratory values: 0.991 / 0.979)"),
    )
}

fn coherence_lengths(fig4: &Result<RunOutput, String>, elapsed: Duration) -> Verdict {
    let out = match fig4 {
        Ok(out) => out,
        Err(e) => return Verdict::new(false, format!("fig4 failed: {e}")),
    };
    let env = |name: &str| out.metrics.series(name).and_then(|s| s.envelope.clone());
    let wl = env("white-light-envelope").and_then(|e| e.fundamental_fwhm_m).unwrap_or(f64::NAN);
    let sfg = env("sum-frequency-envelope").and_then(|e| e.second_harmonic_fwhm_m).unwrap_or(f64::NAN);
    let lambda = 391.0 * NANOMETER;
    let sfg_target = 4.0 * LN_2 / PI * lambda * lambda / (0.093 * NANOMETER);
    let wl_target = 23.0 * MICROMETER;
    let pass = within(wl, wl_target, 0.1) && within(sfg, sfg_target, 0.1) && elapsed < Duration::from_secs(300);
    Verdict::new(
        pass,
        format!(
            "white-light {:.1} um (target 23 um +-10%), sum-frequency {:.3} mm (target {:.3} mm +-10%), \
             ratio {:.1}; laboratory values 23.3 um / 510 um, ratio about 22",
            wl / MICROMETER,
            sfg / 1e-3,
            sfg_target / 1e-3,
            sfg / wl
        ),
    )
}

fn quantum_limits(eq: &Result<RunOutput, String>) -> Verdict {
    let out = match eq {
        Ok(out) => out,
        Err(e) => return Verdict::new(false, format!("equivalence failed: {e}")),
    };
    let rms = |name: &str| out.metrics.series(name).and_then(|s| s.analytic.as_ref()).map_or(f64::NAN, |a| a.rms);
    let (small, large) = (rms("quantum-small-z"), rms("quantum-large-z"));
    let p0 = out
        .interferogram("quantum-small-z")
        .and_then(|ig| ig.points().iter().find(|p| p.z == 0.0).map(|p| p.signal))
        .unwrap_or(f64::NAN);
    let max_large = out.interferogram("quantum-large-z").and_then(Interferogram::max_signal).unwrap_or(f64::NAN);
    let period = |name: &str| out.metrics.series(name).and_then(|s| s.fringe.as_ref()).map_or(f64::NAN, |f| f.period);
    let ratio = period("quantum-large-z") / period("quantum-small-z");
    let pass = small < 1e-3
        && large < 1e-3
        && (p0 - 0.5).abs() < 1e-9
        && within(max_large, 0.125, 0.02)
        && (ratio - 0.5).abs() <= 0.005;
    Verdict::new(
        pass,
        format!(
            "RMS vs closed form: small-z {small:.2e}, large-z {large:.2e} (< 1e-3); p(0) = {p0:.9}; \
             large-z max {max_large:.5} (0.125 +- 2%); period ratio {ratio:.4}"
        ),
    )
}

fn equivalence(eq: &Result<RunOutput, String>) -> Verdict {
    let out = match eq {
        Ok(out) => out,
        Err(e) => return Verdict::new(false, format!("equivalence failed: {e}")),
    };
    let rms = |name: &str| out.metrics.comparison(name).map_or(f64::NAN, |p| p.report.rms_deviation);
    let (small, large) = (rms("small-z"), rms("large-z"));
    Verdict::new(
        small < 0.01 && large < 0.01,
        format!("normalized classical vs quantum RMS: small-z {small:.2e}, large-z {large:.2e} (< 1e-2)"),
    )
}

// Property suites, on proptest's deterministic runner.

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    )
}

fn fourier_properties() -> Result<(), String> {
    let grid = SampledGrid::new(4096, 1e-15, 0.0).unwrap();
    let carrier = wavelength_to_omega(782.0 * NANOMETER).unwrap();
    let strategy = (0.1f64..10.0, 20e-15f64..200e-15, -500e-15f64..500e-15, -1e26f64..1e26);
    runner(64)
        .run(&strategy, |(amp, width, t0, chirp)| {
            let e = Envelope::from_time_fn(grid, carrier, |t| {
                let x = t - t0;
                Complex64::from_polar(amp * (-2.0 * LN_2 * x * x / (width * width)).exp(), chirp * x * x)
            })
            .unwrap();
            let spectrum = e.to_spectrum().unwrap();
            prop_assert!((spectrum.energy() - e.energy()).abs() <= 1e-12 * e.energy());
            let back = spectrum.from_spectrum().unwrap();
            let peak = e.samples().iter().map(|s| s.norm()).fold(0.0, f64::max);
            let err = e.samples().iter().zip(back.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10 * peak);
            Ok(())
        })
        .map_err(|e| format!("Parseval/round trip: {e}"))
}

fn bandpass_monotonicity() -> Result<(), String> {
    let grid = SampledGrid::new(8192, 1e-15, 0.0).unwrap();
    let carrier = wavelength_to_omega(782.0 * NANOMETER).unwrap();
    let pulse = Envelope::from_time_fn(grid, carrier, |t| Complex64::new((-2.0 * LN_2 * t * t / (30e-15f64).powi(2)).exp(), 0.0))
        .unwrap();
    let strategy = (-3.0f64..3.0, 0.05f64..20.0, any::<bool>());
    runner(64)
        .run(&strategy, |(offset_nm, bandwidth_nm, rectangular)| {
            let mut filter = FilterSpec::gaussian((782.0 + offset_nm) * NANOMETER, bandwidth_nm * NANOMETER);
            if rectangular {
                filter.shape = superres_core::classical::FilterShape::Rectangular;
            }
            let out = apply_bandpass(&pulse, &filter).unwrap();
            prop_assert!(out.energy() <= pulse.energy() * (1.0 + 1e-12));
            Ok(())
        })
        .map_err(|e| format!("bandpass energy: {e}"))
}

fn narrowband_convergence() -> Result<(), String> {
    let base = ClassicalConfig::reference_defaults();
    let omega0 = base.carrier().unwrap();
    let half = PI * SPEED_OF_LIGHT / omega0;
    let start = (100e-6 / half).round() * half;
    let mut rms = Vec::new();
    for bw in [0.4, 0.1, 0.039] {
        let sim = ClassicalSimulator::new(&base.with_filter_bandwidth(bw * NANOMETER)).unwrap();
        let peak = sim.signal_at(0.0).unwrap();
        let n = 24;
        let sum: f64 = (0..n)
            .map(|j| {
                let z = start + half * j as f64 / n as f64;
                (sim.signal_at(z).unwrap() / peak - analytic_sfg(z, omega0)).powi(2)
            })
            .sum();
        rms.push((sum / n as f64).sqrt());
    }
    if rms[0] > rms[1] && rms[1] > rms[2] && rms[2] < 1e-3 {
        Ok(())
    } else {
        Err(format!("narrowband convergence not monotone: {rms:?}"))
    }
}

fn synthetic(zs: &[f64], f: impl Fn(f64) -> f64) -> Interferogram {
    let ys: Vec<f64> = zs.iter().map(|&z| f(z)).collect();
    Interferogram::from_columns(zs, &ys, ScanMetadata::new(Regime::WhiteLight, "synthetic", serde_json::Value::Null))
        .unwrap()
}

fn fit_equivariance() -> Result<(), String> {
    let k = 2.0 * PI / 782e-9;
    let zs: Vec<f64> = (0..160).map(|i| -2e-6 + i as f64 * 25e-9).collect();
    let strategy = (0.01f64..100.0, 0.1f64..0.95, -3.0f64..3.0, -5e-6f64..5e-6);
    runner(64)
        .run(&strategy, |(b, v, phi, delta)| {
            let model = |z: f64| 1.0 + v * (k * z + phi).cos();
            let base = fit_fringe(&synthetic(&zs, model)).unwrap();
            let scaled = fit_fringe(&synthetic(&zs, |z| b * model(z))).unwrap();
            prop_assert!((base.visibility - scaled.visibility).abs() < 1e-9);
            prop_assert!((scaled.offset - b * base.offset).abs() < 1e-9 * b);
            let moved: Vec<f64> = zs.iter().map(|z| z + delta).collect();
            let shifted = fit_fringe(&synthetic(&moved, |z| model(z - delta))).unwrap();
            prop_assert!((base.visibility - shifted.visibility).abs() < 1e-8);
            prop_assert!((base.period - shifted.period).abs() < 1e-8 * base.period);
            let dphi = (shifted.phase - (base.phase - k * delta)).rem_euclid(2.0 * PI);
            prop_assert!(dphi.min(2.0 * PI - dphi) < 1e-6);
            Ok(())
        })
        .map_err(|e| format!("fit equivariance: {e}"))
}

fn calibration_round_trip() -> Result<(), String> {
    let lambda = 782e-9;
    let v: Vec<f64> = (0..=300).map(|i| i as f64 * 0.1).collect();
    let strategy = (0.05e-6f64..0.15e-6, 0.001e-6f64..0.003e-6, -3.0f64..3.0);
    runner(12)
        .run(&strategy, |(c1, c2, phi)| {
            let s: Vec<f64> =
                v.iter().map(|&x| 1.0 + 0.9 * (2.0 * PI * (c1 * x + c2 * x * x) / lambda + phi).cos()).collect();
            let fit = calibrate_displacement(&v, &s, lambda).unwrap();
            prop_assert!((fit.c1 - c1).abs() < 0.01 * c1, "c1 {} vs {c1}", fit.c1);
            prop_assert!((fit.c2 - c2).abs() < 0.01 * c2, "c2 {} vs {c2}", fit.c2);
            Ok(())
        })
        .map_err(|e| format!("calibration: {e}"))
}

fn determinism() -> Result<(), String> {
    let cfg = ClassicalConfig::reference_defaults();
    let zs: Vec<f64> = (0..32).map(|i| 99e-6 + i as f64 * 31e-9).collect();
    let a = scan_classical(&cfg, &zs).unwrap();
    let b = scan_classical(&cfg, &zs).unwrap();
    let q = QuantumConfig {
        single_bandwidth: 3e12,
        pump_bandwidth: 250e9,
        dnu: 62.5e9,
        grid_size: 512,
        ..QuantumConfig::scaled_defaults()
    };
    let qz = [150e-6, 150.1e-6, 150.2e-6];
    let qa = scan_quantum(&q, &qz).unwrap();
    let qb = scan_quantum(&q, &qz).unwrap();
    let bits = |ig: &Interferogram| ig.points().iter().map(|p| p.signal.to_bits()).collect::<Vec<_>>();
    if bits(&a) == bits(&b) && a.metadata_json() == b.metadata_json() && bits(&qa) == bits(&qb) {
        Ok(())
    } else {
        Err("reruns differ".into())
    }
}

fn property_suites(elapsed: &mut Duration) -> Verdict {
    let (results, t) = timed(|| {
        vec![
            ("parseval/round-trip", fourier_properties()),
            ("bandpass energy", bandpass_monotonicity()),
            ("narrowband convergence", narrowband_convergence()),
            ("fit equivariance", fit_equivariance()),
            ("calibration round-trip", calibration_round_trip()),
            ("determinism", determinism()),
        ]
    });
    *elapsed = t;
    let failures: Vec<String> = results.iter().filter_map(|(_, r)| r.clone().err()).collect();
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    let pass = failures.is_empty() && t < Duration::from_secs(120);
    let detail = if failures.is_empty() {
        format!("{} suites green: {}", names.len(), names.join(", "))
    } else {
        failures.join("; ")
    };
    Verdict::new(pass, detail)
}

fn report(number: usize, title: &str, verdict: &Verdict, elapsed: Duration) {
    let status = if verdict.pass { "PASS" } else { "FAIL" };
    println!("criterion {number} ({title}): {status} [{:.1} s] {}", elapsed.as_secs_f64(), verdict.detail);
}

fn main() -> ExitCode {
    let mut all = true;
    let mut emit = |n: usize, title: &str, v: Verdict, t: Duration| {
        report(n, title, &v, t);
        all &= v.pass;
    };

    let (fig3, t3) = timed(|| run(&load("fig3"), Mode::SimulateClassical));
    match &fig3 {
        Ok(fig3) => {
            emit(1, "period halving", period_halving(fig3, t3), t3);
            emit(2, "peak ratio", peak_ratio(fig3), t3);
            emit(3, "visibility", visibility(fig3), t3);
        }
        Err(e) => {
            for (n, title) in [(1, "period halving"), (2, "peak ratio"), (3, "visibility")] {
                emit(n, title, Verdict::new(false, format!("fig3 failed: {e}")), t3);
            }
        }
    }

    let (fig4, t4) = timed(|| run(&load("fig4"), Mode::SimulateClassical));
    emit(4, "coherence lengths", coherence_lengths(&fig4, t4), t4);

    let (eq, te) = timed(|| run(&load("equivalence"), Mode::Compare));
    let quantum = quantum_limits(&eq);
    let within_budget = te < Duration::from_secs(300);
    emit(
        5,
        "quantum analytic limits",
        Verdict::new(quantum.pass && within_budget, quantum.detail),
        te,
    );
    emit(6, "time-reversal equivalence", equivalence(&eq), te);

    let mut tp = Duration::ZERO;
    let props = property_suites(&mut tp);
    emit(7, "property suites", props, tp);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
