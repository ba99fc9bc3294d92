//! Time-forward pipeline: a frequency-anticorrelated photon pair passes the
//! interferometer and is counted when both photons arrive within a window.

mod state;

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferogram::{Interferogram, Regime, ScanMetadata};
use crate::wave::units::{NANOMETER, TERAHERTZ};
use crate::wave::{wavelength_to_omega, SPEED_OF_LIGHT};

pub use state::{
    biphoton_michelson, coincidence_probability, gaussian_biphoton, joint_spectral, joint_temporal, BiphotonState,
};

/// Maximum detection-time difference counted as a coincidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoincidenceWindow {
    /// A fixed window in seconds.
    Fixed { seconds: f64 },
    /// `T_w = |z|/(2c)`: half the arrival-time difference of the two arms.
    HalfDelay,
}

impl CoincidenceWindow {
    pub fn at(&self, z: f64) -> Result<f64> {
        let tw = match *self {
            CoincidenceWindow::Fixed { seconds } => seconds,
            CoincidenceWindow::HalfDelay => z.abs() / (2.0 * SPEED_OF_LIGHT),
        };
        if !(tw > 0.0) || !tw.is_finite() {
            return Err(Error::Domain(format!("coincidence window must be positive, got {tw:e} s at z = {z:e} m")));
        }
        Ok(tw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumConfig {
    /// Degenerate photon wavelength (half the pump frequency).
    pub center_wavelength: f64,
    /// σ_p: intensity FWHM of the ν₁+ν₂ distribution, Hz.
    pub pump_bandwidth: f64,
    /// σ_s: intensity FWHM of each photon's marginal spectrum, Hz.
    pub single_bandwidth: f64,
    pub window: CoincidenceWindow,
    /// Samples per frequency axis (power of two).
    pub grid_size: usize,
    /// Detuning step, Hz.
    pub dnu: f64,
}

impl QuantumConfig {
    /// Scaled desk parameters: σ_s = 3 THz, σ_s/σ_p = 40, 1024 × 1024 grid.
    pub fn scaled_defaults() -> Self {
        let single = 3.0 * TERAHERTZ;
        let pump = single / 40.0;
        Self {
            center_wavelength: 782.0 * NANOMETER,
            pump_bandwidth: pump,
            single_bandwidth: single,
            window: CoincidenceWindow::HalfDelay,
            grid_size: 1024,
            dnu: pump / 4.0,
        }
    }

    pub fn with_window(mut self, window: CoincidenceWindow) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        wavelength_to_omega(self.center_wavelength).map_err(|e| Error::Config(e.to_string()))?;
        for (name, v) in [("pump bandwidth", self.pump_bandwidth), ("single bandwidth", self.single_bandwidth)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if !(self.pump_bandwidth < self.single_bandwidth / 10.0) {
            return Err(Error::Config(format!(
                "pump bandwidth {:e} Hz must be below a tenth of the single-photon bandwidth {:e} Hz",
                self.pump_bandwidth, self.single_bandwidth
            )));
        }
        if let CoincidenceWindow::Fixed { seconds } = self.window {
            if !(seconds > 0.0) || !seconds.is_finite() {
                return Err(Error::Config("coincidence window must be positive".into()));
            }
        }
        if self.grid_size < 16 || !self.grid_size.is_power_of_two() {
            return Err(Error::Config(format!("grid size {} must be a power of two >= 16", self.grid_size)));
        }
        if !(self.dnu > 0.0) || !self.dnu.is_finite() {
            return Err(Error::Config("detuning step must be positive".into()));
        }
        if self.dnu > self.pump_bandwidth / 4.0 {
            return Err(Error::Config(format!(
                "resolution: detuning step {:e} Hz exceeds pump bandwidth / 4 ({:e} Hz)",
                self.dnu,
                self.pump_bandwidth / 4.0
            )));
        }
        let extent = self.grid_size as f64 * self.dnu;
        if extent < 6.0 * self.single_bandwidth {
            return Err(Error::Config(format!(
                "coverage: grid extent {extent:e} Hz is below 6x the single-photon bandwidth"
            )));
        }
        Ok(())
    }

    pub fn carrier(&self) -> Result<f64> {
        wavelength_to_omega(self.center_wavelength)
    }

    /// Time step of the joint temporal grid, `1/(n·dν)`.
    pub fn dt(&self) -> f64 {
        1.0 / (self.grid_size as f64 * self.dnu)
    }

    /// Largest |z| accepted: a quarter of the temporal span `1/dν`.
    pub fn max_path_difference(&self) -> f64 {
        0.25 * SPEED_OF_LIGHT / self.dnu
    }

    /// Two single-photon coherence lengths, `2c·(2 ln2/π)/σ_s`.
    pub fn coherence_scale(&self) -> f64 {
        2.0 * SPEED_OF_LIGHT * (2.0 * LN_2 / PI) / self.single_bandwidth
    }

    pub fn regime_for(&self, zs: &[f64]) -> Regime {
        let lc = self.coherence_scale();
        if zs.iter().all(|z| z.abs() <= lc) {
            Regime::QuantumSmallZ
        } else {
            Regime::QuantumLargeZ
        }
    }
}

/// Normalized, exchange-symmetric Gaussian pair state for a validated config.
pub fn make_biphoton(cfg: &QuantumConfig) -> Result<BiphotonState> {
    cfg.validate()?;
    gaussian_biphoton(cfg.pump_bandwidth, cfg.single_bandwidth, cfg.grid_size, cfg.dnu, cfg.carrier()?)
}

/// Pair-detection probability at one path difference.
///
/// Both photons leave through the same output port; a 50/50 split onto the
/// two detectors gives the factor ½.
pub fn pair_probability(state: &BiphotonState, window: &CoincidenceWindow, z: f64) -> Result<f64> {
    let tw = window.at(z)?;
    let shifted = biphoton_michelson(state, z)?;
    let temporal = joint_temporal(&shifted)?;
    Ok(0.5 * coincidence_probability(&temporal, tw)?)
}

pub fn scan_quantum(cfg: &QuantumConfig, zs: &[f64]) -> Result<Interferogram> {
    if zs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("scan positions must be strictly increasing".into()));
    }
    let state = make_biphoton(cfg)?;
    let limit = cfg.max_path_difference();
    if let Some(z) = zs.iter().find(|z| z.abs() > limit) {
        return Err(Error::Config(format!("path difference {z:e} m exceeds the delay guard ({limit:e} m)")));
    }
    // The 2-D transform is the expensive part; one point per task.
    let signals: Vec<f64> =
        zs.par_iter().map(|&z| pair_probability(&state, &cfg.window, z)).collect::<Result<_>>()?;
    let echo = serde_json::to_value(cfg).expect("config serializes");
    let regime = cfg.regime_for(zs);
    let mut meta = ScanMetadata::new(regime, format!("quantum scan, {} points", zs.len()), echo);
    meta.carrier = Some(state.carrier());
    Interferogram::from_columns(zs, &signals, meta)
}

/// `½[(1 + cos(ω₀z/c))/2]²`.
pub fn analytic_p_small(z: f64, omega0: f64) -> f64 {
    let h = 0.5 * (1.0 + (omega0 * z / SPEED_OF_LIGHT).cos());
    0.5 * h * h
}

/// `⅛(1 + cos(2ω₀z/c))/2`.
pub fn analytic_p_large(z: f64, omega0: f64) -> f64 {
    0.125 * 0.5 * (1.0 + (2.0 * omega0 * z / SPEED_OF_LIGHT).cos())
}

#[cfg(test)]
mod tests;
