//! Input pulses and their scalar descriptors.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave::{wavelength_to_omega, Domain, Envelope, SampledGrid, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    #[default]
    Gaussian,
}

/// An unchirped transform-limited pulse.
///
/// `fwhm_duration` is the FWHM of the intensity `|f(t)|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub center_wavelength: f64,
    pub fwhm_duration: f64,
    pub peak_amplitude: f64,
    #[serde(default)]
    pub shape: PulseShape,
}

impl PulseSpec {
    pub fn gaussian(center_wavelength: f64, fwhm_duration: f64, peak_amplitude: f64) -> Self {
        Self { center_wavelength, fwhm_duration, peak_amplitude, shape: PulseShape::Gaussian }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_wavelength > 0.0 && self.center_wavelength.is_finite()) {
            return Err(Error::Config("pulse center wavelength must be positive".into()));
        }
        if !(self.fwhm_duration > 0.0 && self.fwhm_duration.is_finite()) {
            return Err(Error::Config("pulse duration must be positive".into()));
        }
        if !(self.peak_amplitude >= 0.0 && self.peak_amplitude.is_finite()) {
            return Err(Error::Config("pulse amplitude must be non-negative".into()));
        }
        Ok(())
    }

    pub fn carrier(&self) -> Result<f64> {
        wavelength_to_omega(self.center_wavelength)
    }

    /// Intensity FWHM of the spectrum in Hz (`2 ln2 / (π τ)` for a Gaussian).
    pub fn spectral_fwhm(&self) -> f64 {
        match self.shape {
            PulseShape::Gaussian => 2.0 * LN_2 / (PI * self.fwhm_duration),
        }
    }

    /// Checks that `grid` holds the pulse in time and in frequency.
    pub fn check_grid(&self, grid: &SampledGrid) -> Result<()> {
        let min_span = 10.0 * self.fwhm_duration;
        if grid.span() < min_span {
            return Err(Error::Config(format!(
                "grid span {:.4e} s is below 10x the pulse duration ({min_span:.4e} s)",
                grid.span()
            )));
        }
        let min_band = 5.0 * self.spectral_fwhm();
        if grid.bandwidth() < min_band {
            return Err(Error::Config(format!(
                "grid bandwidth {:.4e} Hz is below 5x the pulse spectral FWHM ({min_band:.4e} Hz)",
                grid.bandwidth()
            )));
        }
        Ok(())
    }
}

/// `f(t) = A·exp(−2 ln2 (t − t_center)²/τ²)` on the carrier `2πc/λ₀`.
pub fn gaussian_pulse(spec: &PulseSpec, grid: &SampledGrid) -> Result<Envelope> {
    spec.validate()?;
    spec.check_grid(grid)?;
    let carrier = spec.carrier()?;
    let k = 2.0 * LN_2 / (spec.fwhm_duration * spec.fwhm_duration);
    let t0 = grid.t_center();
    let a = spec.peak_amplitude;
    Envelope::from_time_fn(*grid, carrier, |t| {
        let x = t - t0;
        Complex64::new(a * (-k * x * x).exp(), 0.0)
    })
}

/// `Σ|f|²·dt` of a time-domain envelope.
pub fn pulse_energy(e: &Envelope) -> Result<f64> {
    e.expect_domain(Domain::Time, "pulse_energy")?;
    Ok(e.energy())
}

/// `c·τ`.
pub fn coherence_length(duration: f64) -> Result<f64> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(Error::Domain(format!("duration must be positive, got {duration}")));
    }
    Ok(SPEED_OF_LIGHT * duration)
}
