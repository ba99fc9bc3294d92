//! Ordered `(z, signal)` records plus the metadata needed to reproduce them.
//!
//! On disk an interferogram is a CSV with header `z_um,signal` (z in
//! micrometers, 9 significant digits) and a sidecar JSON document holding
//! [`ScanMetadata`].

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::wave::units::MICROMETER;
use crate::wave::SampledGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    WhiteLight,
    SumFrequency,
    WideScan,
    QuantumSmallZ,
    QuantumLargeZ,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::WhiteLight => "white-light",
            Regime::SumFrequency => "sum-frequency",
            Regime::WideScan => "wide-scan",
            Regime::QuantumSmallZ => "quantum-small-z",
            Regime::QuantumLargeZ => "quantum-large-z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub z: f64,
    pub signal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub regime: Regime,
    pub description: String,
    /// SHA-256 of the canonical JSON of `config`.
    pub config_digest: String,
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<SampledGrid>,
    /// Reference angular frequency ω₀ of the fringes, rad/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<f64>,
    /// Auxiliary per-point columns (same length and order as the points).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub traces: BTreeMap<String, Vec<f64>>,
    pub library_version: String,
    /// Effective run configuration that produced this scan, when run from a
    /// scenario; feeding it back reproduces the scan bit for bit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_config: Option<serde_json::Value>,
}

impl ScanMetadata {
    pub fn new(regime: Regime, description: impl Into<String>, config: serde_json::Value) -> Self {
        let config_digest = digest_json(&config);
        Self {
            regime,
            description: description.into(),
            config_digest,
            config,
            grid: None,
            carrier: None,
            traces: BTreeMap::new(),
            library_version: crate::VERSION.to_string(),
            run_config: None,
        }
    }
}

/// Hex SHA-256 of a JSON value's compact serialization.
pub fn digest_json(value: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(value).expect("json values always serialize");
    digest_bytes(&bytes)
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    points: Vec<ScanPoint>,
    metadata: ScanMetadata,
}

impl Interferogram {
    pub fn new(points: Vec<ScanPoint>, metadata: ScanMetadata) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].z > w[0].z) {
                return Err(Error::Usage(format!(
                    "interferogram z must be strictly increasing ({} then {})",
                    w[0].z, w[1].z
                )));
            }
        }
        for p in &points {
            if !p.z.is_finite() || !p.signal.is_finite() || p.signal < 0.0 {
                return Err(Error::Measurement(format!(
                    "invalid interferogram point z={} signal={}",
                    p.z, p.signal
                )));
            }
        }
        for (name, trace) in &metadata.traces {
            if trace.len() != points.len() {
                return Err(Error::Usage(format!("trace `{name}` length does not match points")));
            }
        }
        Ok(Self { points, metadata })
    }

    pub fn from_columns(zs: &[f64], signals: &[f64], metadata: ScanMetadata) -> Result<Self> {
        if zs.len() != signals.len() {
            return Err(Error::Usage("z and signal columns differ in length".into()));
        }
        let points = zs.iter().zip(signals).map(|(&z, &signal)| ScanPoint { z, signal }).collect();
        Self::new(points, metadata)
    }

    pub fn points(&self) -> &[ScanPoint] {
        &self.points
    }

    pub fn metadata(&self) -> &ScanMetadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut ScanMetadata {
        &mut self.metadata
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn zs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.z).collect()
    }

    pub fn signals(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.signal).collect()
    }

    pub fn max_signal(&self) -> Option<f64> {
        self.points.iter().map(|p| p.signal).fold(None, |m, s| Some(m.map_or(s, |m: f64| m.max(s))))
    }

    /// Points with `lo <= z <= hi`; auxiliary traces are dropped.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Interferogram> {
        let points = self.points.iter().copied().filter(|p| p.z >= lo && p.z <= hi).collect();
        let mut metadata = self.metadata.clone();
        metadata.traces.clear();
        Interferogram::new(points, metadata)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["z_um", "signal"])?;
        for p in &self.points {
            out.write_record([format_sig9(p.z / MICROMETER), format!("{:e}", p.signal)])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn metadata_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.metadata).expect("metadata serializes");
        s.push('\n');
        s
    }

    /// Reads CSV points; metadata is supplied by the caller.
    pub fn read_csv<R: Read>(r: R, metadata: ScanMetadata) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "z_um" || &headers[1] != "signal" {
            return Err(Error::Format(format!("expected header `z_um,signal`, got {headers:?}")));
        }
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec[i].trim().parse::<f64>().map_err(|e| Error::Format(format!("bad number `{}`: {e}", &rec[i])))
            };
            points.push(ScanPoint { z: parse(0)? * MICROMETER, signal: parse(1)? });
        }
        let mut metadata = metadata;
        metadata.traces.retain(|_, t| t.len() == points.len());
        Self::new(points, metadata)
    }

    /// Loads `path` and, when present, its sidecar `path.with_extension("json")`.
    pub fn load(path: &Path) -> Result<Self> {
        let sidecar = sidecar_path(path);
        let metadata = if sidecar.exists() {
            serde_json::from_slice(&std::fs::read(&sidecar)?)?
        } else {
            ScanMetadata::new(Regime::WideScan, format!("loaded from {}", path.display()), serde_json::Value::Null)
        };
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, metadata)
    }
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Decimal rendering rounded to 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> ScanMetadata {
        ScanMetadata::new(Regime::WhiteLight, "test", serde_json::json!({"a": 1}))
    }

    #[test]
    fn rejects_unordered_and_negative() {
        let bad = vec![ScanPoint { z: 1.0, signal: 1.0 }, ScanPoint { z: 1.0, signal: 1.0 }];
        assert!(Interferogram::new(bad, meta()).is_err());
        let neg = vec![ScanPoint { z: 1.0, signal: -1.0 }];
        assert!(Interferogram::new(neg, meta()).is_err());
    }

    #[test]
    fn empty_is_valid() {
        let ig = Interferogram::new(vec![], meta()).unwrap();
        assert!(ig.is_empty());
        assert_eq!(ig.to_csv_string(), "z_um,signal\n");
        assert_eq!(ig.max_signal(), None);
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(100.0123456789), "100.012346");
        assert_eq!(format_sig9(-2.0), "-2");
        assert_eq!(format_sig9(1.5e-3), "0.0015");
        assert_eq!(format_sig9(0.0), "0");
    }

    #[test]
    fn csv_round_trip_keeps_points() {
        let zs = [-2e-6, -1.98e-6, 0.0, 1.234567891e-6];
        let ss = [0.1, 0.25, 1.0, 3.3e-7];
        let ig = Interferogram::from_columns(&zs, &ss, meta()).unwrap();
        let text = ig.to_csv_string();
        assert!(text.starts_with("z_um,signal\n-2,"));
        let back = Interferogram::read_csv(text.as_bytes(), meta()).unwrap();
        for (a, b) in back.points().iter().zip(ig.points()) {
            assert!((a.z - b.z).abs() <= 1e-9 * b.z.abs().max(1e-12));
            assert_eq!(a.signal, b.signal);
        }
    }

    #[test]
    fn digest_is_stable() {
        let m = meta();
        assert_eq!(m.config_digest, digest_json(&serde_json::json!({"a": 1})));
        assert_eq!(m.config_digest.len(), 64);
    }
}
