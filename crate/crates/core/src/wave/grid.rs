use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time lattice with its conjugate frequency lattice.
///
/// Time sample `j` sits at `t_center + (j - n/2)·dt`; frequency sample `k`
/// sits at detuning `(k - n/2)·dν` with `dν = 1/(n·dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridParams", into = "GridParams")]
pub struct SampledGrid {
    n_samples: usize,
    dt: f64,
    t_center: f64,
}

/// Unvalidated wire form of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub n_samples: usize,
    pub dt: f64,
    pub t_center: f64,
}

impl TryFrom<GridParams> for SampledGrid {
    type Error = Error;

    fn try_from(p: GridParams) -> Result<Self> {
        SampledGrid::new(p.n_samples, p.dt, p.t_center)
    }
}

impl From<SampledGrid> for GridParams {
    fn from(g: SampledGrid) -> Self {
        GridParams { n_samples: g.n_samples, dt: g.dt, t_center: g.t_center }
    }
}

impl SampledGrid {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(n_samples: usize, dt: f64, t_center: f64) -> Result<Self> {
        if n_samples < Self::MIN_SAMPLES || !n_samples.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= {}, got {n_samples}",
                Self::MIN_SAMPLES
            )));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("grid step dt must be positive, got {dt}")));
        }
        if !t_center.is_finite() {
            return Err(Error::Config("grid center must be finite".into()));
        }
        Ok(Self { n_samples, dt, t_center })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_center(&self) -> f64 {
        self.t_center
    }

    /// Frequency spacing `1/(n·dt)` in Hz.
    pub fn dnu(&self) -> f64 {
        1.0 / (self.n_samples as f64 * self.dt)
    }

    /// Time span `n·dt`.
    pub fn span(&self) -> f64 {
        self.n_samples as f64 * self.dt
    }

    /// Nyquist frequency `1/(2dt)`; detunings cover `[-nyquist, nyquist)`.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.dt
    }

    /// Full frequency band `1/dt`.
    pub fn bandwidth(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t_center + (j as f64 - (self.n_samples / 2) as f64) * self.dt
    }

    pub fn detuning(&self, k: usize) -> f64 {
        (k as f64 - (self.n_samples / 2) as f64) * self.dnu()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples).map(|j| self.time(j)).collect()
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.n_samples).map(|k| self.detuning(k)).collect()
    }
}

/// Builds a validated grid.
pub fn make_grid(n_samples: usize, dt: f64, t_center: f64) -> Result<SampledGrid> {
    SampledGrid::new(n_samples, dt, t_center)
}
