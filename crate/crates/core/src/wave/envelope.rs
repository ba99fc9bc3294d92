use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::SampledGrid;
use crate::error::{Error, Result};

/// Which lattice an [`Envelope`]'s samples live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Time,
    Frequency,
}

/// Complex field samples referenced to a carrier: `E(t) = f(t)·e^{-iω_c t}`.
///
/// In the frequency domain the samples are ordered by increasing detuning
/// from the carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    grid: SampledGrid,
    samples: Vec<Complex64>,
    carrier: f64,
    domain: Domain,
}

impl Envelope {
    pub fn new(grid: SampledGrid, samples: Vec<Complex64>, carrier: f64, domain: Domain) -> Result<Self> {
        if samples.len() != grid.n_samples() {
            return Err(Error::Config(format!(
                "envelope has {} samples but grid has {}",
                samples.len(),
                grid.n_samples()
            )));
        }
        if !(carrier > 0.0) || !carrier.is_finite() {
            return Err(Error::Config(format!("carrier must be positive, got {carrier}")));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::Config("envelope samples must be finite".into()));
        }
        Ok(Self { grid, samples, carrier, domain })
    }

    /// Samples `f(t_j)` of a time-domain envelope.
    pub fn from_time_fn(grid: SampledGrid, carrier: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid.n_samples()).map(|j| f(grid.time(j))).collect();
        Self::new(grid, samples, carrier, Domain::Time)
    }

    pub fn zeros(grid: SampledGrid, carrier: f64, domain: Domain) -> Result<Self> {
        Self::new(grid, vec![Complex64::new(0.0, 0.0); grid.n_samples()], carrier, domain)
    }

    pub(crate) fn from_parts_unchecked(
        grid: SampledGrid,
        samples: Vec<Complex64>,
        carrier: f64,
        domain: Domain,
    ) -> Self {
        debug_assert_eq!(samples.len(), grid.n_samples());
        Self { grid, samples, carrier, domain }
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub(crate) fn expect_domain(&self, domain: Domain, op: &str) -> Result<()> {
        if self.domain != domain {
            return Err(Error::Usage(format!(
                "{op} expects a {domain:?}-domain envelope, got {:?}",
                self.domain
            )));
        }
        Ok(())
    }

    /// `Σ|s|²·dt` in time, `Σ|s|²·dν` in frequency. Equal across domains.
    pub fn energy(&self) -> f64 {
        let measure = match self.domain {
            Domain::Time => self.grid.dt(),
            Domain::Frequency => self.grid.dnu(),
        };
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * measure
    }

    /// Pointwise `a·self + b·other` on the same grid, carrier and domain.
    pub fn combine(&self, a: Complex64, other: &Envelope, b: Complex64) -> Result<Envelope> {
        if self.grid != other.grid || self.domain != other.domain || self.carrier != other.carrier {
            return Err(Error::Usage("cannot combine envelopes on different grids/carriers/domains".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        Ok(Self::from_parts_unchecked(self.grid, samples, self.carrier, self.domain))
    }

    pub fn to_spectrum(&self) -> Result<Envelope> {
        to_spectrum(self)
    }

    pub fn from_spectrum(&self) -> Result<Envelope> {
        from_spectrum(self)
    }
}

/// Time → frequency, normalized so `Σ|f|²dt = Σ|F|²dν`.
pub fn to_spectrum(e: &Envelope) -> Result<Envelope> {
    e.expect_domain(Domain::Time, "to_spectrum")?;
    let mut buf = e.samples.clone();
    fft::forward_in_place(&mut buf, &e.grid);
    Ok(Envelope::from_parts_unchecked(e.grid, buf, e.carrier, Domain::Frequency))
}

/// Frequency → time; exact inverse of [`to_spectrum`].
pub fn from_spectrum(e: &Envelope) -> Result<Envelope> {
    e.expect_domain(Domain::Frequency, "from_spectrum")?;
    let mut buf = e.samples.clone();
    fft::inverse_in_place(&mut buf, &e.grid);
    Ok(Envelope::from_parts_unchecked(e.grid, buf, e.carrier, Domain::Time))
}
