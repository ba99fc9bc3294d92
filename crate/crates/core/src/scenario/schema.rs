//! Serialized run configuration. Every key carries its unit in its name.

use serde::{Deserialize, Serialize};

use crate::classical::FilterShape;
use crate::pulse::PulseShape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SimulateClassical,
    SimulateQuantum,
    Analyze,
    Compare,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::SimulateClassical => "simulate-classical",
            Mode::SimulateQuantum => "simulate-quantum",
            Mode::Analyze => "analyze",
            Mode::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must agree with the mode requested on the command line.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub description: String,
    pub pulse: PulseSection,
    pub filter: FilterSection,
    pub grid: GridSection,
    pub sfg: SfgSection,
    pub scan: ScanSection,
    pub quantum: QuantumSection,
    pub analysis: AnalysisSection,
    pub compare: CompareSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    pub center_wavelength_nm: f64,
    /// Intensity FWHM.
    pub fwhm_duration_fs: f64,
    pub peak_amplitude: f64,
    pub shape: PulseShape,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self { center_wavelength_nm: 782.0, fwhm_duration_fs: 74.5, peak_amplitude: 1.0, shape: PulseShape::Gaussian }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSection {
    pub center_wavelength_nm: f64,
    /// Intensity-transmission FWHM in wavelength.
    pub bandwidth_nm: f64,
    pub shape: FilterShape,
}

impl Default for FilterSection {
    fn default() -> Self {
        Self { center_wavelength_nm: 391.0, bandwidth_nm: 0.039, shape: FilterShape::Gaussian }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n_samples: usize,
    pub dt_fs: f64,
    pub t_center_fs: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n_samples: 1 << 16, dt_fs: 2.0, t_center_fs: 0.0 }
    }
}

/// Complex sum-frequency efficiency α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfgSection {
    pub efficiency_re: f64,
    pub efficiency_im: f64,
}

impl Default for SfgSection {
    fn default() -> Self {
        Self { efficiency_re: 1.0, efficiency_im: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    /// Derive pulse and filter from `[quantum]` (time-reversed equivalent);
    /// the `[pulse]` and `[filter]` sections are then ignored.
    pub match_quantum: bool,
    pub window: Vec<ScanWindow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// One signal per z.
    #[default]
    Fine,
    /// One local fringe probe per z (envelope scan).
    Envelope,
}

/// Path differences are a range (`start_um`, `stop_um`, `step_nm`) or an
/// explicit list (`zs_um`).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanWindow {
    pub name: String,
    pub kind: WindowKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_nm: Option<f64>,
    /// Explicit path differences instead of a range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zs_um: Option<Vec<f64>>,
    /// Filter bandwidth for this window only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantumSection {
    /// Degenerate single-photon wavelength.
    pub center_wavelength_nm: f64,
    /// Intensity FWHM of the frequency sum ν₁ + ν₂.
    pub pump_bandwidth_ghz: f64,
    /// Intensity FWHM of each photon's marginal spectrum.
    pub single_bandwidth_thz: f64,
    pub grid_size: usize,
    /// Defaults to a quarter of the pump bandwidth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dnu_ghz: Option<f64>,
    pub window: Vec<QuantumWindow>,
}

impl Default for QuantumSection {
    fn default() -> Self {
        Self {
            center_wavelength_nm: 782.0,
            pump_bandwidth_ghz: 75.0,
            single_bandwidth_thz: 3.0,
            grid_size: 1024,
            dnu_ghz: None,
            window: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantumWindow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_nm: Option<f64>,
    /// Explicit path differences instead of a range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zs_um: Option<Vec<f64>>,
    /// Fixed coincidence window; absent means half the interferometer delay.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidence_window_fs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    /// Interferogram CSVs for `analyze`, relative to the config file.
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_ratio: Option<PeakRatioSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_ratio: Option<PeriodRatioSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationSpec>,
}

/// `max(numerator) / max(denominator)` over named series.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeakRatioSpec {
    pub numerator: String,
    pub denominator: String,
    /// Ignore denominator points with |z| below this.
    pub exclude_within_um: f64,
}

/// Fitted period of `numerator` over that of `denominator`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeriodRatioSpec {
    pub numerator: String,
    pub denominator: String,
}

/// Control-voltage calibration from a CSV with header `control,signal`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSpec {
    pub input: String,
    pub wavelength_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSection {
    pub pair: Vec<ComparePair>,
}

/// Each side names a window of this config or an interferogram CSV path.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparePair {
    pub name: String,
    pub classical: String,
    pub quantum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    /// Write a sidecar JSON next to every CSV.
    pub metadata: bool,
    /// Write `metrics.json`.
    pub metrics: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "out".into(), metadata: true, metrics: true }
    }
}
