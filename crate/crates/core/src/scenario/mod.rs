//! Scenario files: a unit-suffixed configuration schema, its validation and
//! its execution into in-memory output documents.
//!
//! ```toml
//! [pulse]
//! center_wavelength_nm = 782.0
//! fwhm_duration_fs = 74.5
//!
//! [filter]
//! bandwidth_nm = 0.039
//!
//! [[scan.window]]
//! name = "white-light"
//! start_um = -2.0
//! stop_um = 2.0
//! step_nm = 20.0
//! ```

mod plan;
mod run;
mod schema;

pub use plan::{Plan, ValidationError, MAX_WINDOW_POINTS};
pub use run::{
    AnalyticMetrics, CalibrationMetrics, EnvelopeMetrics, OutputFile, PairMetrics, RatioMetric, RunError, RunMetrics,
    RunOutput, SeriesMetrics,
};
pub use schema::{
    AnalysisSection, CalibrationSpec, ComparePair, CompareSection, FilterSection, GridSection, Mode, OutputSection,
    PeakRatioSpec, PeriodRatioSpec, PulseSection, QuantumSection, QuantumWindow, RunConfig, ScanSection, ScanWindow,
    SfgSection, WindowKind,
};
