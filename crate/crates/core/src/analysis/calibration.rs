use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::periodogram;
use crate::error::{Error, Result};

/// Quadratic map from a control value to relative displacement,
/// `z′(V) = c₀ + c₁V + c₂V²`, with `c₀ = 0` (the absolute offset is absorbed
/// into the fringe phase) and `c₁ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub rms_residual: f64,
}

impl CalibrationFit {
    pub fn displacement(&self, control: f64) -> f64 {
        self.c0 + self.c1 * control + self.c2 * control * control
    }
}

/// Model `C + a·cos θ + b·sin θ`, `θ = p₁u + p₂u²`, on normalized controls `u`.
struct Problem<'a> {
    u: &'a [f64],
    y: &'a [f64],
}

impl Problem<'_> {
    fn residuals(&self, p: &[f64; 5]) -> DVector<f64> {
        DVector::from_iterator(
            self.u.len(),
            self.u.iter().zip(self.y).map(|(&u, &y)| {
                let (s, c) = (p[3] * u + p[4] * u * u).sin_cos();
                y - (p[0] + p[1] * c + p[2] * s)
            }),
        )
    }

    fn jacobian(&self, p: &[f64; 5]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.u.len(), 5);
        for (i, &u) in self.u.iter().enumerate() {
            let (s, c) = (p[3] * u + p[4] * u * u).sin_cos();
            let dtheta = -p[1] * s + p[2] * c;
            j[(i, 0)] = 1.0;
            j[(i, 1)] = c;
            j[(i, 2)] = s;
            j[(i, 3)] = dtheta * u;
            j[(i, 4)] = dtheta * u * u;
        }
        j
    }

    /// Best linear coefficients for fixed `(p₁, p₂)`; returns the power
    /// `|Σ(y − ȳ)e^{−iθ}|²` used to rank phase laws.
    fn chirp_power(&self, p1: f64, p2: f64, mean: f64) -> f64 {
        self.u
            .iter()
            .zip(self.y)
            .map(|(&u, &y)| (y - mean) * Complex64::from_polar(1.0, -(p1 * u + p2 * u * u)))
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn linear(&self, p1: f64, p2: f64) -> Option<[f64; 3]> {
        let mut ata = DMatrix::<f64>::zeros(3, 3);
        let mut aty = DVector::<f64>::zeros(3);
        for (&u, &y) in self.u.iter().zip(self.y) {
            let (s, c) = (p1 * u + p2 * u * u).sin_cos();
            let row = [1.0, c, s];
            for i in 0..3 {
                aty[i] += row[i] * y;
                for k in 0..3 {
                    ata[(i, k)] += row[i] * row[k];
                }
            }
        }
        let x = ata.cholesky()?.solve(&aty);
        Some([x[0], x[1], x[2]])
    }
}

/// Levenberg–Marquardt on all five parameters.
fn levenberg_marquardt(problem: &Problem, start: [f64; 5]) -> ([f64; 5], f64) {
    let mut p = start;
    let mut cost = problem.residuals(&p).norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let j = problem.jacobian(&p);
        let r = problem.residuals(&p);
        let jtj = j.transpose() * &j;
        let jtr = j.transpose() * r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for i in 0..5 {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&jtr);
            let mut trial = p;
            for i in 0..5 {
                trial[i] += step[i];
            }
            let trial_cost = problem.residuals(&trial).norm_squared();
            if trial_cost < cost {
                let gain = cost - trial_cost;
                p = trial;
                cost = trial_cost;
                lambda = (lambda / 10.0).max(1e-12);
                improved = gain > 1e-15 * cost.max(1e-300);
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (p, cost)
}

/// Fits `signal ≈ C + A·cos(2π z′(V)/λ_ref + φ)` with quadratic `z′`.
pub fn calibrate_displacement(controls: &[f64], signal: &[f64], wavelength: f64) -> Result<CalibrationFit> {
    if controls.len() != signal.len() {
        return Err(Error::Usage("controls and signal differ in length".into()));
    }
    if controls.len() < 8 {
        return Err(Error::Measurement("too few calibration points".into()));
    }
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(Error::Domain("reference wavelength must be positive".into()));
    }
    if controls.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("control values must be strictly increasing".into()));
    }
    let n = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / n;
    let variance = signal.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n;
    if !(variance > 1e-24 * mean.abs().max(1.0).powi(2)) {
        return Err(Error::Measurement("calibration signal is constant; no fringes to fit".into()));
    }

    let first = controls[0];
    let last = controls[controls.len() - 1];
    let mid = 0.5 * (first + last);
    let half = 0.5 * (last - first);
    let u: Vec<f64> = controls.iter().map(|v| (v - mid) / half).collect();
    let problem = Problem { u: &u, y: signal };

    // Initial phase law: the periodogram band bounds the chirp; scan p₂ over
    // it and take the best matching p₁ for each.
    let spectrum = periodogram(&u, signal);
    let peak = spectrum.iter().map(|kp| kp.1).fold(0.0, f64::max);
    let band: Vec<f64> = spectrum.iter().filter(|kp| kp.1 >= 0.05 * peak).map(|kp| kp.0).collect();
    let (k_lo, k_hi) = (band[0], band[band.len() - 1]);
    let p2_max = 0.5 * (k_hi - k_lo) + PI;
    let p1_step = PI / 8.0;
    let p2_step = 0.25;
    let mut best = (0.0, 0.0, f64::MIN);
    let p2_count = (p2_max / p2_step).ceil() as i64;
    for i2 in -p2_count..=p2_count {
        let p2 = i2 as f64 * p2_step;
        let mut p1 = (k_lo - 2.0 * p2.abs()).max(0.0);
        while p1 <= k_hi + 2.0 * p2.abs() {
            let power = problem.chirp_power(p1, p2, mean);
            if power > best.2 {
                best = (p1, p2, power);
            }
            p1 += p1_step;
        }
    }
    let (p1, p2, _) = best;
    let lin = problem
        .linear(p1, p2)
        .ok_or_else(|| Error::Measurement("calibration: singular initial fit".into()))?;
    let (p, cost) = levenberg_marquardt(&problem, [lin[0], lin[1], lin[2], p1, p2]);
    let rms = (cost / n).sqrt();
    if !p.iter().all(|v| v.is_finite()) || rms > 0.5 * variance.sqrt() {
        return Err(Error::Measurement(format!(
            "calibration fit did not converge (rms {rms:e} vs signal spread {:e})",
            variance.sqrt()
        )));
    }

    // θ(V) = q₁V + q₂V² + const, then z′ = λθ/2π with the constant dropped.
    let (mut q1, mut q2) = (p[3] / half - 2.0 * p[4] * mid / (half * half), p[4] / (half * half));
    let mut phase = Complex64::new(p[1], -p[2]).arg() + p[3] * (-mid / half) + p[4] * (mid / half).powi(2);
    if q1 < 0.0 {
        q1 = -q1;
        q2 = -q2;
        phase = -phase;
    }
    let scale = wavelength / (2.0 * PI);
    Ok(CalibrationFit {
        c0: 0.0,
        c1: q1 * scale,
        c2: q2 * scale,
        offset: p[0],
        amplitude: p[1].hypot(p[2]),
        phase: Complex64::from_polar(1.0, phase).arg(),
        rms_residual: rms,
    })
}
