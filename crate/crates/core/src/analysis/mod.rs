//! Fringe metrics, envelope widths, peak ratios, displacement calibration
//! and pipeline comparison.

mod calibration;
mod compare;
mod envelope;
mod fit;

pub use calibration::{calibrate_displacement, CalibrationFit};
pub use compare::{compare, ComparisonReport};
pub use envelope::{
    envelope_fwhm, harmonic_envelope_fwhm, local_maxima, Harmonic, FUNDAMENTAL_TRACE, SECOND_HARMONIC_TRACE,
};
pub use fit::{fit_fringe, fit_fringe_columns, FringeMetrics};

use crate::error::{Error, Result};
use crate::interferogram::Interferogram;

/// `max(a) / max(b)`.
pub fn peak_ratio(a: &Interferogram, b: &Interferogram) -> Result<f64> {
    let (Some(ma), Some(mb)) = (a.max_signal(), b.max_signal()) else {
        return Err(Error::Usage("peak ratio needs two non-empty interferograms".into()));
    };
    if mb == 0.0 {
        return Err(Error::Domain("denominator interferogram is identically zero".into()));
    }
    Ok(ma / mb)
}
