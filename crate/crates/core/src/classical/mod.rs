//! Time-reversed pipeline: pulse → unbalanced Michelson → sum-frequency
//! squaring → narrow bandpass → energy detector.

mod analytic;
mod filter;
mod stages;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferogram::{Interferogram, Regime, ScanMetadata, ScanPoint};
use crate::pulse::{gaussian_pulse, PulseSpec};
use crate::quantum::QuantumConfig;
use crate::wave::units::{FEMTOSECOND, NANOMETER};
use crate::wave::{Envelope, SampledGrid, SPEED_OF_LIGHT};

pub use analytic::{analytic_sfg, analytic_white_light};
pub use filter::{apply_bandpass, FilterShape, FilterSpec, PreparedFilter};
pub use stages::{detect_energy, michelson_transform, narrowband_coefficient, sfg_transform, DELAY_GUARD};

/// Number of sub-points per local fringe probe in [`envelope_scan`].
pub const PROBE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub pulse: PulseSpec,
    pub filter: FilterSpec,
    pub sfg_efficiency: Complex64,
    pub grid: SampledGrid,
}

impl ClassicalConfig {
    /// 782 nm / 74.5 fs pulse, 0.039 nm Gaussian filter at 391 nm, α = 1,
    /// 2^16 samples at 2 fs.
    pub fn reference_defaults() -> Self {
        Self {
            pulse: PulseSpec::gaussian(782.0 * NANOMETER, 74.5 * FEMTOSECOND, 1.0),
            filter: FilterSpec::gaussian(391.0 * NANOMETER, 0.039 * NANOMETER),
            sfg_efficiency: Complex64::new(1.0, 0.0),
            grid: SampledGrid::new(1 << 16, 2.0 * FEMTOSECOND, 0.0).expect("default grid is valid"),
        }
    }

    /// Classical configuration equivalent to a pair source under time
    /// reversal: the pulse spectrum matches each photon's marginal
    /// (`τ = 2 ln2/(π σ_s)`) and the filter at `λ₀/2` has the pump bandwidth
    /// (`Δν = σ_p`).
    pub fn matched_to_quantum(quantum: &QuantumConfig, grid: SampledGrid, sfg_efficiency: Complex64) -> Self {
        let lambda0 = quantum.center_wavelength;
        let duration = 2.0 * std::f64::consts::LN_2 / (PI * quantum.single_bandwidth);
        let filter_center = 0.5 * lambda0;
        let bandwidth = quantum.pump_bandwidth * filter_center * filter_center / SPEED_OF_LIGHT;
        Self {
            pulse: PulseSpec::gaussian(lambda0, duration, 1.0),
            filter: FilterSpec::gaussian(filter_center, bandwidth),
            sfg_efficiency,
            grid,
        }
    }

    pub fn with_filter_bandwidth(mut self, fwhm_bandwidth: f64) -> Self {
        self.filter.fwhm_bandwidth = fwhm_bandwidth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.pulse.validate()?;
        self.pulse.check_grid(&self.grid)?;
        self.filter.validate()?;
        let a = self.sfg_efficiency;
        if !(a.norm() > 0.0) || !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::Config("sfg efficiency must be finite and nonzero".into()));
        }
        self.filter.check_band(&self.grid, 2.0 * self.pulse.carrier()?)
    }

    /// Fundamental carrier ω₀ in rad/s.
    pub fn carrier(&self) -> Result<f64> {
        self.pulse.carrier()
    }

    /// Largest |z| accepted by the delay guard.
    pub fn max_path_difference(&self) -> f64 {
        DELAY_GUARD * self.grid.span() * SPEED_OF_LIGHT
    }

    /// Regime implied by a set of path differences: fringes within two
    /// coherence lengths of zero are white-light, beyond them sum-frequency.
    pub fn regime_for(&self, zs: &[f64]) -> Regime {
        let lc = 2.0 * SPEED_OF_LIGHT * self.pulse.fwhm_duration;
        let max = zs.iter().fold(0.0f64, |m, z| m.max(z.abs()));
        let min = zs.iter().fold(f64::INFINITY, |m, z| m.min(z.abs()));
        if zs.is_empty() {
            Regime::WideScan
        } else if max <= lc {
            Regime::WhiteLight
        } else if min > lc {
            Regime::SumFrequency
        } else {
            Regime::WideScan
        }
    }
}

/// Reusable evaluator: the pulse spectrum and the filter table are computed once.
#[derive(Debug, Clone)]
pub struct ClassicalSimulator {
    config: ClassicalConfig,
    carrier: f64,
    pulse_spectrum: Envelope,
    filter: PreparedFilter,
}

impl ClassicalSimulator {
    pub fn new(config: &ClassicalConfig) -> Result<Self> {
        config.validate()?;
        let carrier = config.carrier()?;
        let pulse_spectrum = gaussian_pulse(&config.pulse, &config.grid)?.to_spectrum()?;
        let filter = PreparedFilter::new(&config.filter, &config.grid, 2.0 * carrier)?;
        Ok(Self { config: *config, carrier, pulse_spectrum, filter })
    }

    pub fn config(&self) -> &ClassicalConfig {
        &self.config
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    /// Filtered sum-frequency field at path difference `z`, in the time domain.
    pub fn filtered_field(&self, z: f64) -> Result<Envelope> {
        let after_michelson = stages::michelson_from_spectrum(&self.pulse_spectrum, z)?;
        let sfg = sfg_transform(&after_michelson, self.config.sfg_efficiency)?;
        self.filter.apply(&sfg)
    }

    /// Detected energy at path difference `z`.
    ///
    /// The last inverse transform is skipped: the energy is summed over the
    /// filtered spectrum, which equals the time-domain sum by Parseval.
    pub fn signal_at(&self, z: f64) -> Result<f64> {
        let after_michelson = stages::michelson_from_spectrum(&self.pulse_spectrum, z)?;
        let sfg = sfg_transform(&after_michelson, self.config.sfg_efficiency)?;
        let spectrum = self.filter.apply_to_spectrum(&sfg.to_spectrum()?)?;
        Ok(spectrum.energy())
    }

    pub fn signals(&self, zs: &[f64]) -> Result<Vec<f64>> {
        zs.par_iter().map(|&z| self.signal_at(z)).collect()
    }
}

/// Signal of the full classical chain at one path difference.
pub fn classical_signal_at(config: &ClassicalConfig, z: f64) -> Result<f64> {
    ClassicalSimulator::new(config)?.signal_at(z)
}

fn metadata(config: &ClassicalConfig, regime: Regime, description: String, carrier: f64) -> ScanMetadata {
    let echo = serde_json::to_value(config).expect("config serializes");
    let mut meta = ScanMetadata::new(regime, description, echo);
    meta.grid = Some(config.grid);
    meta.carrier = Some(carrier);
    meta
}

fn check_increasing(zs: &[f64]) -> Result<()> {
    if zs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("scan positions must be strictly increasing".into()));
    }
    Ok(())
}

/// Signal at every `z` (evaluated in parallel, assembled in order).
pub fn scan_classical(config: &ClassicalConfig, zs: &[f64]) -> Result<Interferogram> {
    check_increasing(zs)?;
    let sim = ClassicalSimulator::new(config)?;
    let signals = sim.signals(zs)?;
    let regime = config.regime_for(zs);
    let description = format!("classical fine scan, {} points", zs.len());
    let meta = metadata(config, regime, description, sim.carrier());
    Interferogram::from_columns(zs, &signals, meta)
}

/// Local fringe decomposition from one period of equally spaced samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFringe {
    pub offset: f64,
    /// Complex amplitude of the fundamental, `A₁e^{iφ₁}` in local phase.
    pub first: Complex64,
    /// Complex amplitude of the second harmonic.
    pub second: Complex64,
}

impl LocalFringe {
    /// Harmonics 0–2 of `PROBE_POINTS` samples at local phases `2π(j − 4)/8`.
    pub fn from_samples(samples: &[f64; PROBE_POINTS]) -> Self {
        let mut x = [Complex64::new(0.0, 0.0); 3];
        for (j, &s) in samples.iter().enumerate() {
            let u = 2.0 * PI * (j as f64 - 4.0) / PROBE_POINTS as f64;
            for (m, xm) in x.iter_mut().enumerate() {
                *xm += s * Complex64::from_polar(1.0, -(m as f64) * u);
            }
        }
        let n = PROBE_POINTS as f64;
        Self { offset: x[0].re / n, first: 2.0 * x[1] / n, second: 2.0 * x[2] / n }
    }

    pub fn value(&self, u: f64) -> f64 {
        self.offset
            + (self.first * Complex64::from_polar(1.0, u)).re
            + (self.second * Complex64::from_polar(1.0, 2.0 * u)).re
    }

    /// Maximum and minimum of the model over one period.
    pub fn extrema(&self) -> (f64, f64) {
        const STEPS: usize = 720;
        let du = 2.0 * PI / STEPS as f64;
        let vals: Vec<f64> = (0..STEPS).map(|i| self.value(i as f64 * du)).collect();
        // Parabolic vertex through the three samples around the discrete extremum.
        let refine = |i: usize, sign: f64| {
            let l = sign * vals[(i + STEPS - 1) % STEPS];
            let c = sign * vals[i];
            let r = sign * vals[(i + 1) % STEPS];
            let denom = l - 2.0 * c + r;
            let shift = if denom < 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
            sign * (sign * self.value((i as f64 + shift) * du)).max(c)
        };
        let imax = (0..STEPS).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        let imin = (0..STEPS).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        (refine(imax, 1.0), refine(imin, -1.0))
    }
}

/// Coarse envelope scan: for each center, probe one fundamental fringe period
/// with [`PROBE_POINTS`] sub-points and decompose it into harmonics.
///
/// The returned signal is the local maximum of the fitted model. Traces:
/// `lower` (local minimum), `offset`, `fundamental` and `second_harmonic`
/// (harmonic amplitudes).
pub fn envelope_scan(config: &ClassicalConfig, centers: &[f64]) -> Result<Interferogram> {
    check_increasing(centers)?;
    let sim = ClassicalSimulator::new(config)?;
    let lambda0 = config.pulse.center_wavelength;
    let offsets: Vec<f64> =
        (0..PROBE_POINTS).map(|j| (j as f64 - 4.0) * lambda0 / PROBE_POINTS as f64).collect();
    let zs: Vec<f64> = centers.iter().flat_map(|&c| offsets.iter().map(move |o| c + o)).collect();
    let values = sim.signals(&zs)?;

    let mut points = Vec::with_capacity(centers.len());
    let mut lower = Vec::with_capacity(centers.len());
    let mut offset = Vec::with_capacity(centers.len());
    let mut fundamental = Vec::with_capacity(centers.len());
    let mut second = Vec::with_capacity(centers.len());
    for (i, &center) in centers.iter().enumerate() {
        let mut probe = [0.0; PROBE_POINTS];
        probe.copy_from_slice(&values[i * PROBE_POINTS..(i + 1) * PROBE_POINTS]);
        let fringe = LocalFringe::from_samples(&probe);
        let (hi, lo) = fringe.extrema();
        if ![hi, lo, fringe.offset, fringe.first.norm(), fringe.second.norm()].iter().all(|v| v.is_finite()) {
            return Err(Error::Measurement(format!("degenerate local fringe fit at z = {center:e} m")));
        }
        points.push(ScanPoint { z: center, signal: hi.max(0.0) });
        lower.push(lo.max(0.0));
        offset.push(fringe.offset);
        fundamental.push(fringe.first.norm());
        second.push(fringe.second.norm());
    }

    let description = format!("classical envelope scan, {} centers x {PROBE_POINTS} probes", centers.len());
    let mut meta = metadata(config, Regime::WideScan, description, sim.carrier());
    meta.traces.insert("lower".into(), lower);
    meta.traces.insert("offset".into(), offset);
    meta.traces.insert("fundamental".into(), fundamental);
    meta.traces.insert("second_harmonic".into(), second);
    Interferogram::new(points, meta)
}
