use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave::units::wavelength_band_to_hz;
use crate::wave::{Domain, Envelope, SampledGrid, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    #[default]
    Gaussian,
    Rectangular,
}

/// Narrow bandpass; `fwhm_bandwidth` is the intensity-transmission FWHM in wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub center_wavelength: f64,
    pub fwhm_bandwidth: f64,
    #[serde(default)]
    pub shape: FilterShape,
}

impl FilterSpec {
    pub fn gaussian(center_wavelength: f64, fwhm_bandwidth: f64) -> Self {
        Self { center_wavelength, fwhm_bandwidth, shape: FilterShape::Gaussian }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_wavelength > 0.0 && self.center_wavelength.is_finite()) {
            return Err(Error::Config("filter center wavelength must be positive".into()));
        }
        if !(self.fwhm_bandwidth > 0.0 && self.fwhm_bandwidth.is_finite()) {
            return Err(Error::Config("filter bandwidth must be positive".into()));
        }
        if self.fwhm_bandwidth > 0.1 * self.center_wavelength {
            return Err(Error::Config(format!(
                "filter bandwidth {:.3e} m is not narrow compared with its center {:.3e} m",
                self.fwhm_bandwidth, self.center_wavelength
            )));
        }
        Ok(())
    }

    /// Intensity-transmission FWHM `Δν = cΔλ/λ²` in Hz.
    pub fn bandwidth_hz(&self) -> f64 {
        wavelength_band_to_hz(self.center_wavelength, self.fwhm_bandwidth)
    }

    /// Passband center expressed as detuning (Hz) from `carrier` (rad/s).
    pub fn center_detuning(&self, carrier: f64) -> f64 {
        SPEED_OF_LIGHT / self.center_wavelength - carrier / (2.0 * PI)
    }

    /// Intensity transmission `T` at an offset (Hz) from the passband center.
    pub fn intensity_transmission(&self, offset: f64) -> f64 {
        let width = self.bandwidth_hz();
        match self.shape {
            FilterShape::Gaussian => (-4.0 * LN_2 * offset * offset / (width * width)).exp(),
            FilterShape::Rectangular => {
                if offset.abs() <= 0.5 * width {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Rejects grids whose band does not contain the passband center ±3 FWHM.
    pub fn check_band(&self, grid: &SampledGrid, carrier: f64) -> Result<()> {
        let center = self.center_detuning(carrier);
        let reach = center.abs() + 3.0 * self.bandwidth_hz();
        if reach >= grid.nyquist() {
            return Err(Error::Config(format!(
                "filter passband (center {center:.4e} Hz ± 3 FWHM) falls outside the grid band ±{:.4e} Hz",
                grid.nyquist()
            )));
        }
        Ok(())
    }
}

/// Amplitude transmission `√T` tabulated on a grid's detuning lattice.
#[derive(Debug, Clone)]
pub struct PreparedFilter {
    grid: SampledGrid,
    carrier: f64,
    amplitude: Vec<f64>,
}

impl PreparedFilter {
    pub fn new(filter: &FilterSpec, grid: &SampledGrid, carrier: f64) -> Result<Self> {
        filter.validate()?;
        filter.check_band(grid, carrier)?;
        let center = filter.center_detuning(carrier);
        let amplitude = grid
            .detunings()
            .into_iter()
            .map(|nu| filter.intensity_transmission(nu - center).sqrt())
            .collect();
        Ok(Self { grid: *grid, carrier, amplitude })
    }

    pub fn apply(&self, e: &Envelope) -> Result<Envelope> {
        e.expect_domain(Domain::Time, "apply_bandpass")?;
        self.apply_to_spectrum(&e.to_spectrum()?)?.from_spectrum()
    }

    /// Filters a frequency-domain envelope; the result stays in frequency.
    pub fn apply_to_spectrum(&self, spectrum: &Envelope) -> Result<Envelope> {
        spectrum.expect_domain(Domain::Frequency, "apply_bandpass")?;
        if *spectrum.grid() != self.grid || spectrum.carrier() != self.carrier {
            return Err(Error::Usage("filter was prepared for a different grid or carrier".into()));
        }
        let filtered: Vec<Complex64> =
            spectrum.samples().iter().zip(&self.amplitude).map(|(s, a)| s * *a).collect();
        Ok(Envelope::from_parts_unchecked(self.grid, filtered, self.carrier, Domain::Frequency))
    }
}

/// Multiplies the spectrum of `e` by the amplitude transmission `√T`.
pub fn apply_bandpass(e: &Envelope, filter: &FilterSpec) -> Result<Envelope> {
    PreparedFilter::new(filter, e.grid(), e.carrier())?.apply(e)
}
