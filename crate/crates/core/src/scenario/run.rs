//! Execution of a [`Plan`]: every output document is produced in memory so
//! the caller can write all of them or none.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::plan::{Job, Plan};
use super::schema::WindowKind;
use crate::analysis::{
    calibrate_displacement, compare, envelope_fwhm, fit_fringe, harmonic_envelope_fwhm, CalibrationFit,
    ComparisonReport, FringeMetrics, Harmonic, FUNDAMENTAL_TRACE,
};
use crate::classical::{envelope_scan, scan_classical};
use crate::error::{Error, Result};
use crate::interferogram::{digest_bytes, digest_json, Interferogram, Regime};
use crate::quantum::{analytic_p_large, analytic_p_small, scan_quantum};
use crate::wave::units::MICROMETER;

/// A computation failure, tagged with the stage that raised it.
#[derive(Debug)]
pub struct RunError {
    pub stage: String,
    pub error: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

trait Stage<T> {
    fn stage(self, stage: impl Into<String>) -> std::result::Result<T, RunError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: impl Into<String>) -> std::result::Result<T, RunError> {
        self.map_err(|error| RunError { stage: stage.into(), error })
    }
}

/// Envelope widths in meters of path difference; `None` where the trace
/// never falls below half its maximum inside the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeMetrics {
    pub upper_fwhm_m: Option<f64>,
    pub fundamental_fwhm_m: Option<f64>,
    pub second_harmonic_fwhm_m: Option<f64>,
}

/// RMS deviation of a quantum scan from the closed form of its regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticMetrics {
    pub form: Regime,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMetrics {
    pub name: String,
    pub file: String,
    /// SHA-256 of the CSV bytes (written or read).
    pub csv_sha256: String,
    pub regime: Regime,
    pub points: usize,
    pub z_min_m: f64,
    pub z_max_m: f64,
    pub peak_signal: f64,
    pub fringe: Option<FringeMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fringe_error: Option<String>,
    pub envelope: Option<EnvelopeMetrics>,
    pub analytic: Option<AnalyticMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioMetric {
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMetrics {
    pub name: String,
    pub classical: String,
    pub quantum: String,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationMetrics {
    pub input: String,
    pub input_sha256: String,
    pub fit: CalibrationFit,
}

/// Contents of `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub mode: String,
    pub description: String,
    /// SHA-256 of the effective configuration's JSON.
    pub config_sha256: String,
    pub library_version: String,
    pub series: Vec<SeriesMetrics>,
    pub peak_ratio: Option<RatioMetric>,
    pub period_ratio: Option<RatioMetric>,
    pub comparisons: Vec<PairMetrics>,
    pub calibration: Option<CalibrationMetrics>,
}

impl RunMetrics {
    pub fn series(&self, name: &str) -> Option<&SeriesMetrics> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn comparison(&self, name: &str) -> Option<&PairMetrics> {
        self.comparisons.iter().find(|p| p.name == name)
    }
}

/// One file of a run's output, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: Vec<(String, Interferogram)>,
    pub metrics: RunMetrics,
    pub files: Vec<OutputFile>,
}

impl RunOutput {
    pub fn interferogram(&self, name: &str) -> Option<&Interferogram> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, ig)| ig)
    }
}

fn optional<T>(r: Result<T>) -> Option<T> {
    r.ok()
}

fn series_metrics(name: &str, file: String, csv_sha256: String, ig: &Interferogram) -> SeriesMetrics {
    let zs = ig.zs();
    let meta = ig.metadata();
    let probed = meta.traces.contains_key(FUNDAMENTAL_TRACE);
    let (fringe, fringe_error, envelope) = if probed {
        let envelope = EnvelopeMetrics {
            upper_fwhm_m: optional(envelope_fwhm(ig)),
            fundamental_fwhm_m: optional(harmonic_envelope_fwhm(ig, Harmonic::Fundamental)),
            second_harmonic_fwhm_m: optional(harmonic_envelope_fwhm(ig, Harmonic::Second)),
        };
        (None, None, Some(envelope))
    } else {
        match fit_fringe(ig) {
            Ok(m) => (Some(m), None, None),
            Err(e) => (None, Some(e.to_string()), None),
        }
    };
    let analytic = match (meta.regime, meta.carrier) {
        (Regime::QuantumSmallZ | Regime::QuantumLargeZ, Some(omega0)) if !ig.is_empty() => {
            let model = if meta.regime == Regime::QuantumSmallZ { analytic_p_small } else { analytic_p_large };
            let sum: f64 = ig.points().iter().map(|p| (p.signal - model(p.z, omega0)).powi(2)).sum();
            Some(AnalyticMetrics { form: meta.regime, rms: (sum / ig.len() as f64).sqrt() })
        }
        _ => None,
    };
    SeriesMetrics {
        name: name.to_string(),
        file,
        csv_sha256,
        regime: meta.regime,
        points: ig.len(),
        z_min_m: zs.first().copied().unwrap_or(0.0),
        z_max_m: zs.last().copied().unwrap_or(0.0),
        peak_signal: ig.max_signal().unwrap_or(0.0),
        fringe,
        fringe_error,
        envelope,
        analytic,
    }
}

fn read_calibration(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<u8>)> {
    let bytes = std::fs::read(path)?;
    let mut rdr = csv::Reader::from_reader(bytes.as_slice());
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "control" || &headers[1] != "signal" {
        return Err(Error::Format(format!("expected header `control,signal`, got {headers:?}")));
    }
    let (mut v, mut s) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        for (i, col) in [&mut v, &mut s].into_iter().enumerate() {
            let x = rec[i].trim().parse::<f64>().map_err(|e| Error::Format(format!("bad number `{}`: {e}", &rec[i])))?;
            col.push(x);
        }
    }
    Ok((v, s, bytes))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("metrics serialize");
    bytes.push(b'\n');
    bytes
}

impl Plan {
    /// Runs every job in order and derives the metrics. Scans run their
    /// z-points in parallel; results are identical for identical plans.
    pub fn execute(&self) -> std::result::Result<RunOutput, RunError> {
        let echo = serde_json::to_value(&self.config).expect("config serializes");
        let mut series = Vec::with_capacity(self.jobs.len());
        let mut files = Vec::new();
        let mut metrics = Vec::with_capacity(self.jobs.len());
        for job in &self.jobs {
            let (ig, file, digest) = match job {
                Job::Classical { name, config, kind, zs } => {
                    let mut ig = match kind {
                        WindowKind::Fine => scan_classical(config, zs).stage(format!("classical scan `{name}`"))?,
                        WindowKind::Envelope => envelope_scan(config, zs).stage(format!("envelope scan `{name}`"))?,
                    };
                    ig.metadata_mut().run_config = Some(echo.clone());
                    let csv = ig.to_csv_string().into_bytes();
                    let digest = digest_bytes(&csv);
                    let file = format!("{name}.csv");
                    files.push(OutputFile { name: file.clone(), contents: csv });
                    if self.config.output.metadata {
                        files.push(OutputFile { name: format!("{name}.json"), contents: ig.metadata_json().into_bytes() });
                    }
                    (ig, file, digest)
                }
                Job::Quantum { name, config, zs } => {
                    let mut ig = scan_quantum(config, zs).stage(format!("quantum scan `{name}`"))?;
                    ig.metadata_mut().run_config = Some(echo.clone());
                    let csv = ig.to_csv_string().into_bytes();
                    let digest = digest_bytes(&csv);
                    let file = format!("{name}.csv");
                    files.push(OutputFile { name: file.clone(), contents: csv });
                    if self.config.output.metadata {
                        files.push(OutputFile { name: format!("{name}.json"), contents: ig.metadata_json().into_bytes() });
                    }
                    (ig, file, digest)
                }
                Job::Load { path, .. } => {
                    let stage = format!("load `{}`", path.display());
                    let bytes = std::fs::read(path).map_err(Error::from).stage(stage.clone())?;
                    let ig = Interferogram::load(path).stage(stage)?;
                    (ig, path.display().to_string(), digest_bytes(&bytes))
                }
            };
            metrics.push(series_metrics(job.name(), file, digest, &ig));
            series.push((job.name().to_string(), ig));
        }

        let find = |name: &str| series.iter().find(|(n, _)| n == name).map(|(_, ig)| ig).expect("validated name");
        let peak_ratio = match &self.config.analysis.peak_ratio {
            Some(spec) => {
                let num = find(&spec.numerator).max_signal();
                let floor = spec.exclude_within_um * MICROMETER;
                let den = find(&spec.denominator)
                    .points()
                    .iter()
                    .filter(|p| p.z.abs() >= floor)
                    .map(|p| p.signal)
                    .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.max(s))));
                let value = match (num, den) {
                    (Some(a), Some(b)) if b > 0.0 => a / b,
                    _ => {
                        return Err(RunError {
                            stage: "peak ratio".into(),
                            error: Error::Measurement("numerator or denominator has no usable points".into()),
                        })
                    }
                };
                Some(RatioMetric { numerator: spec.numerator.clone(), denominator: spec.denominator.clone(), value })
            }
            None => None,
        };
        let period_ratio = match &self.config.analysis.period_ratio {
            Some(spec) => {
                let period = |name: &str| {
                    metrics.iter().find(|m| m.name == name).and_then(|m| m.fringe.as_ref()).map(|f| f.period).ok_or_else(
                        || RunError {
                            stage: "period ratio".into(),
                            error: Error::Measurement(format!("series `{name}` has no fringe fit")),
                        },
                    )
                };
                let value = period(&spec.numerator)? / period(&spec.denominator)?;
                Some(RatioMetric { numerator: spec.numerator.clone(), denominator: spec.denominator.clone(), value })
            }
            None => None,
        };
        let mut comparisons = Vec::with_capacity(self.pairs.len());
        for pair in &self.pairs {
            let report = compare(find(&pair.classical), find(&pair.quantum)).stage(format!("compare `{}`", pair.name))?;
            comparisons.push(PairMetrics {
                name: pair.name.clone(),
                classical: pair.classical.clone(),
                quantum: pair.quantum.clone(),
                report,
            });
        }
        let calibration = match &self.calibration {
            Some((path, lambda)) => {
                let (v, s, bytes) = read_calibration(path).stage("calibration input")?;
                let fit = calibrate_displacement(&v, &s, *lambda).stage("calibration")?;
                Some(CalibrationMetrics { input: path.display().to_string(), input_sha256: digest_bytes(&bytes), fit })
            }
            None => None,
        };

        let metrics = RunMetrics {
            mode: self.mode.label().to_string(),
            description: self.config.description.clone(),
            config_sha256: digest_json(&echo),
            library_version: crate::VERSION.to_string(),
            series: metrics,
            peak_ratio,
            period_ratio,
            comparisons,
            calibration,
        };
        if self.config.output.metrics {
            files.push(OutputFile { name: "metrics.json".into(), contents: json_bytes(&metrics) });
        }
        Ok(RunOutput { series, metrics, files })
    }
}
