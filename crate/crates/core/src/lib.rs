//! Wave-optics simulation of two-photon phase super-resolution in an
//! unbalanced Michelson interferometer.
//!
//! Two pipelines produce interferograms over the optical-path difference `z`:
//!
//! * [`classical`] — a Gaussian pulse passes the interferometer, is squared by
//!   sum-frequency generation, filtered by a narrow bandpass and detected;
//! * [`quantum`] — a frequency-anticorrelated photon pair passes the
//!   interferometer and is detected in coincidence within a time window.
//!
//! [`analysis`] extracts fringe metrics from either and compares them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod classical;
pub mod error;
pub mod interferogram;
pub mod pulse;
pub mod quantum;
pub mod scenario;
pub mod wave;

pub use error::{Error, Result};
pub use interferogram::{Interferogram, Regime, ScanMetadata, ScanPoint};
pub use pulse::{PulseShape, PulseSpec};
pub use wave::{Domain, Envelope, SampledGrid};

/// Library version recorded in every scan's metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
