use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferogram::Interferogram;
use crate::wave::fwhm;

/// Trace names written by [`crate::classical::envelope_scan`].
pub const FUNDAMENTAL_TRACE: &str = "fundamental";
pub const SECOND_HARMONIC_TRACE: &str = "second_harmonic";

/// Which envelope of a probed scan to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Harmonic {
    /// Amplitude of the fringes at the input wavelength.
    Fundamental,
    /// Amplitude of the fringes at half the input wavelength.
    Second,
}

impl Harmonic {
    pub fn trace_name(&self) -> &'static str {
        match self {
            Harmonic::Fundamental => FUNDAMENTAL_TRACE,
            Harmonic::Second => SECOND_HARMONIC_TRACE,
        }
    }
}

/// Local maxima of a dense fringe record, refined by 3-point parabolas.
pub fn local_maxima(zs: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pz = Vec::new();
    let mut py = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        let (l, c, r) = (ys[i - 1], ys[i], ys[i + 1]);
        if c >= l && c > r {
            let denom = l - 2.0 * c + r;
            let shift = if denom < 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
            let step = if shift >= 0.0 { zs[i + 1] - zs[i] } else { zs[i] - zs[i - 1] };
            pz.push(zs[i] + shift * step);
            py.push(c - 0.25 * (l - r) * shift);
        }
    }
    (pz, py)
}

/// FWHM of the upper envelope of `ig`.
///
/// Probed envelope scans (which already hold local maxima) are measured
/// directly; dense fringe records are first reduced to their local maxima.
pub fn envelope_fwhm(ig: &Interferogram) -> Result<f64> {
    let zs = ig.zs();
    let ys = ig.signals();
    if ig.metadata().traces.contains_key(FUNDAMENTAL_TRACE) {
        return fwhm(&ys, &zs);
    }
    let (pz, py) = local_maxima(&zs, &ys);
    if pz.len() < 3 {
        return Err(Error::Measurement(format!("only {} local maxima; no envelope to measure", pz.len())));
    }
    fwhm(&py, &pz)
}

/// FWHM of one harmonic-amplitude trace of a probed envelope scan.
pub fn harmonic_envelope_fwhm(ig: &Interferogram, harmonic: Harmonic) -> Result<f64> {
    let trace = ig.metadata().traces.get(harmonic.trace_name()).ok_or_else(|| {
        Error::Usage(format!("interferogram has no `{}` trace; use an envelope scan", harmonic.trace_name()))
    })?;
    fwhm(trace, &ig.zs())
}
