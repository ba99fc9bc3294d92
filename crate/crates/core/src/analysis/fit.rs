use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::LocalFringe;
use crate::error::{Error, Result};
use crate::interferogram::Interferogram;

/// Fringe descriptors from the fitted model
/// `C + A₁cos(kz + φ₁) + A₂cos(2kz + φ₂)`.
///
/// `offset ± amplitude` are the model's maximum and (non-negative) minimum
/// over a period, so `visibility = amplitude/offset`. For a pure cosine these
/// reduce to `C`, `A₁` and `A₁/C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeMetrics {
    pub visibility: f64,
    pub period: f64,
    /// `φ₁`, referenced to `z = 0`, in `(−π, π]`.
    pub phase: f64,
    pub offset: f64,
    pub amplitude: f64,
    pub rms_residual: f64,
    /// `A₁`.
    pub fundamental: f64,
    /// `A₂`; zero when the sampling cannot resolve the harmonic.
    pub second_harmonic: f64,
}

/// Periodogram oversampling relative to the natural resolution `2π/L`.
const OVERSAMPLE: f64 = 8.0;

pub(crate) fn median_step(zs: &[f64]) -> f64 {
    let mut steps: Vec<f64> = zs.windows(2).map(|w| w[1] - w[0]).collect();
    steps.sort_by(f64::total_cmp);
    steps[steps.len() / 2]
}

/// `|Σ (y − ȳ)·e^{−ikz}|²` on an oversampled wavenumber lattice.
/// Returns `(k, power)` pairs from ~1.5 cycles per record up to Nyquist.
pub(crate) fn periodogram(zs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let length = zs[zs.len() - 1] - zs[0];
    let z0 = zs[0];
    let dk = 2.0 * PI / (OVERSAMPLE * length);
    let k_min = 2.0 * PI * 1.5 / length;
    let k_max = PI / median_step(zs);
    let count = ((k_max - k_min) / dk).floor().max(0.0) as usize + 1;
    (0..count)
        .map(|i| {
            let k = k_min + i as f64 * dk;
            let s: Complex64 = zs
                .iter()
                .zip(ys)
                .map(|(z, y)| (y - mean) * Complex64::from_polar(1.0, -k * (z - z0)))
                .sum();
            (k, s.norm_sqr())
        })
        .collect()
}

struct LinearFit {
    coefficients: Vec<f64>,
    sum_sq: f64,
}

/// Least squares on `[1, cos kz, sin kz, (cos 2kz, sin 2kz)]` via normal equations.
fn linear_fit(zs: &[f64], ys: &[f64], k: f64, harmonics: usize) -> Option<LinearFit> {
    let m = 1 + 2 * harmonics;
    let mut ata = DMatrix::<f64>::zeros(m, m);
    let mut aty = DVector::<f64>::zeros(m);
    let mut row = vec![0.0; m];
    for (&z, &y) in zs.iter().zip(ys) {
        row[0] = 1.0;
        for h in 0..harmonics {
            let (s, c) = ((h + 1) as f64 * k * z).sin_cos();
            row[1 + 2 * h] = c;
            row[2 + 2 * h] = s;
        }
        for i in 0..m {
            aty[i] += row[i] * y;
            for j in 0..m {
                ata[(i, j)] += row[i] * row[j];
            }
        }
    }
    let coefficients = ata.cholesky()?.solve(&aty);
    let sum_sq = zs
        .iter()
        .zip(ys)
        .map(|(&z, &y)| {
            let mut v = coefficients[0];
            for h in 0..harmonics {
                let (s, c) = ((h + 1) as f64 * k * z).sin_cos();
                v += coefficients[1 + 2 * h] * c + coefficients[2 + 2 * h] * s;
            }
            (y - v).powi(2)
        })
        .sum();
    Some(LinearFit { coefficients: coefficients.iter().copied().collect(), sum_sq })
}

/// Minimizes `f` on `[a, b]` by golden-section search.
pub(crate) fn golden_section(mut a: f64, mut b: f64, iterations: usize, f: impl Fn(f64) -> f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Least-squares fringe fit; see [`FringeMetrics`].
///
/// The starting wavenumber is the strongest periodogram peak; it is refined
/// with the linear coefficients projected out.
pub fn fit_fringe(ig: &Interferogram) -> Result<FringeMetrics> {
    fit_fringe_columns(&ig.zs(), &ig.signals())
}

pub fn fit_fringe_columns(zs: &[f64], ys: &[f64]) -> Result<FringeMetrics> {
    if zs.len() != ys.len() {
        return Err(Error::Usage("z and signal columns differ in length".into()));
    }
    if zs.len() < 8 {
        return Err(Error::Measurement(format!("{} points are too few for a fringe fit", zs.len())));
    }
    if ys.iter().any(|y| *y < 0.0 || !y.is_finite()) {
        return Err(Error::Measurement("fringe signal must be finite and non-negative".into()));
    }
    let spectrum = periodogram(zs, ys);
    let total: f64 = {
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        ys.iter().map(|y| (y - mean).powi(2)).sum()
    };
    let (k0, p0) = spectrum.iter().copied().fold((0.0, 0.0), |best, kp| if kp.1 > best.1 { kp } else { best });
    if !(p0 > 1e-20 * total * ys.len() as f64) || total == 0.0 {
        return Err(Error::Measurement("no dominant spectral peak in the fringe signal".into()));
    }
    let length = zs[zs.len() - 1] - zs[0];
    let periods = k0 * length / (2.0 * PI);
    if periods < 3.0 {
        return Err(Error::Measurement(format!("record spans only {periods:.2} fringe periods (need 3)")));
    }
    let harmonics = if 2.0 * k0 < 0.9 * PI / median_step(zs) { 2 } else { 1 };
    let dk = 2.0 * PI / (OVERSAMPLE * length);
    let cost = |k: f64| linear_fit(zs, ys, k, harmonics).map_or(f64::INFINITY, |f| f.sum_sq);
    let k = golden_section(k0 - dk, k0 + dk, 80, cost);
    let fit = linear_fit(zs, ys, k, harmonics)
        .ok_or_else(|| Error::Measurement("fringe fit normal equations are singular".into()))?;
    let c = &fit.coefficients;
    let first = Complex64::new(c[1], -c[2]);
    let second = if harmonics == 2 { Complex64::new(c[3], -c[4]) } else { Complex64::new(0.0, 0.0) };
    let model = LocalFringe { offset: c[0], first, second };
    if !(c[0] > 0.0) {
        return Err(Error::Measurement(format!("fitted fringe offset {:e} is not positive", c[0])));
    }
    let (hi, lo) = model.extrema();
    let lo = lo.max(0.0);
    let metrics = FringeMetrics {
        visibility: (hi - lo) / (hi + lo),
        period: 2.0 * PI / k,
        phase: first.arg(),
        offset: 0.5 * (hi + lo),
        amplitude: 0.5 * (hi - lo),
        rms_residual: (fit.sum_sq / ys.len() as f64).sqrt(),
        fundamental: first.norm(),
        second_harmonic: second.norm(),
    };
    let finite = [metrics.visibility, metrics.period, metrics.phase, metrics.offset, metrics.rms_residual];
    if !finite.iter().all(|v| v.is_finite()) {
        return Err(Error::Measurement("fringe fit did not converge to finite values".into()));
    }
    Ok(metrics)
}
