//! Validation of a [`RunConfig`] into an executable [`Plan`]. Nothing is
//! computed until every section used by the mode has passed its owning
//! module's preconditions.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::schema::{Mode, QuantumWindow, RunConfig, ScanWindow, WindowKind};
use crate::classical::{ClassicalConfig, FilterSpec};
use crate::pulse::PulseSpec;
use crate::quantum::{CoincidenceWindow, QuantumConfig};
use crate::wave::units::{FEMTOSECOND, GIGAHERTZ, MICROMETER, NANOMETER, TERAHERTZ};
use crate::wave::SampledGrid;

/// Largest number of points in one window.
pub const MAX_WINDOW_POINTS: usize = 2_000_000;

/// A configuration problem, located by its dotted key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ValidationError {}

fn invalid(path: impl Into<String>, message: impl fmt::Display) -> ValidationError {
    ValidationError { path: path.into(), message: message.to_string() }
}

fn positive(path: &str, v: f64) -> Result<f64, ValidationError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Job {
    Classical { name: String, config: ClassicalConfig, kind: WindowKind, zs: Vec<f64> },
    Quantum { name: String, config: QuantumConfig, zs: Vec<f64> },
    Load { name: String, path: PathBuf },
}

impl Job {
    pub(crate) fn name(&self) -> &str {
        match self {
            Job::Classical { name, .. } | Job::Quantum { name, .. } | Job::Load { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PairJob {
    pub name: String,
    pub classical: String,
    pub quantum: String,
}

/// A validated run, ready to execute.
#[derive(Debug, Clone)]
pub struct Plan {
    pub(crate) mode: Mode,
    pub(crate) config: RunConfig,
    pub(crate) jobs: Vec<Job>,
    pub(crate) pairs: Vec<PairJob>,
    pub(crate) calibration: Option<(PathBuf, f64)>,
}

impl Plan {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The effective configuration, with `mode` filled in.
    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    /// Names of the series the run will produce or load, in order.
    pub fn series_names(&self) -> Vec<&str> {
        self.jobs.iter().map(Job::name).collect()
    }
}

/// Path differences of a window in meters.
fn z_list(
    path: &str,
    start_um: Option<f64>,
    stop_um: Option<f64>,
    step_nm: Option<f64>,
    zs_um: Option<&[f64]>,
) -> Result<Vec<f64>, ValidationError> {
    if let Some(list) = zs_um {
        if start_um.is_some() || stop_um.is_some() || step_nm.is_some() {
            return Err(invalid(format!("{path}.zs_um"), "give either zs_um or start_um/stop_um/step_nm, not both"));
        }
        if list.is_empty() {
            return Err(invalid(format!("{path}.zs_um"), "is empty"));
        }
        if list.iter().any(|z| !z.is_finite()) || list.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid(format!("{path}.zs_um"), "must be finite and strictly increasing"));
        }
        if list.len() > MAX_WINDOW_POINTS {
            return Err(invalid(format!("{path}.zs_um"), format!("more than {MAX_WINDOW_POINTS} points")));
        }
        return Ok(list.iter().map(|z| z * MICROMETER).collect());
    }
    let missing = |key: &str| invalid(format!("{path}.{key}"), "is required (or give zs_um)");
    let start = start_um.ok_or_else(|| missing("start_um"))?;
    let stop = stop_um.ok_or_else(|| missing("stop_um"))?;
    let step = positive(&format!("{path}.step_nm"), step_nm.ok_or_else(|| missing("step_nm"))?)?;
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(invalid(format!("{path}.stop_um"), format!("range [{start}, {stop}] um is empty or not finite")));
    }
    // Positions are built in nanometers so that decimal grids land on their
    // nominal values (e.g. z = 0 exactly).
    let (start_nm, stop_nm) = (start * 1e3, stop * 1e3);
    let count = ((stop_nm - start_nm) / step + 1e-9).floor() + 1.0;
    if count > MAX_WINDOW_POINTS as f64 {
        return Err(invalid(format!("{path}.step_nm"), format!("window would hold more than {MAX_WINDOW_POINTS} points")));
    }
    Ok((0..count as usize).map(|i| (start_nm + i as f64 * step) * NANOMETER).collect())
}

fn check_name(path: &str, name: &str, seen: &mut BTreeSet<String>) -> Result<(), ValidationError> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        return Err(invalid(path, format!("`{name}` must be non-empty and use only letters, digits, '-' and '_'")));
    }
    if name == "metrics" {
        return Err(invalid(path, "`metrics` is reserved for the metrics document"));
    }
    if !seen.insert(name.to_string()) {
        return Err(invalid(path, format!("duplicate series name `{name}`")));
    }
    Ok(())
}

fn max_abs(zs: &[f64]) -> f64 {
    zs.iter().fold(0.0, |m: f64, z| m.max(z.abs()))
}

impl RunConfig {
    fn grid(&self) -> Result<SampledGrid, ValidationError> {
        let g = &self.grid;
        positive("grid.dt_fs", g.dt_fs)?;
        if !g.t_center_fs.is_finite() {
            return Err(invalid("grid.t_center_fs", "must be finite"));
        }
        SampledGrid::new(g.n_samples, g.dt_fs * FEMTOSECOND, g.t_center_fs * FEMTOSECOND)
            .map_err(|e| invalid("grid.n_samples", e))
    }

    fn sfg_efficiency(&self) -> Result<Complex64, ValidationError> {
        let a = Complex64::new(self.sfg.efficiency_re, self.sfg.efficiency_im);
        if !a.re.is_finite() || !a.im.is_finite() || a.norm() == 0.0 {
            return Err(invalid("sfg", "efficiency must be finite and nonzero"));
        }
        Ok(a)
    }

    /// The `[quantum]` section as a validated [`QuantumConfig`] with a
    /// half-delay window.
    pub fn quantum_config(&self) -> Result<QuantumConfig, ValidationError> {
        let q = &self.quantum;
        let lambda = positive("quantum.center_wavelength_nm", q.center_wavelength_nm)? * NANOMETER;
        let pump = positive("quantum.pump_bandwidth_ghz", q.pump_bandwidth_ghz)? * GIGAHERTZ;
        let single = positive("quantum.single_bandwidth_thz", q.single_bandwidth_thz)? * TERAHERTZ;
        let dnu = match q.dnu_ghz {
            Some(v) => positive("quantum.dnu_ghz", v)? * GIGAHERTZ,
            None => pump / 4.0,
        };
        let cfg = QuantumConfig {
            center_wavelength: lambda,
            pump_bandwidth: pump,
            single_bandwidth: single,
            window: CoincidenceWindow::HalfDelay,
            grid_size: q.grid_size,
            dnu,
        };
        cfg.validate().map_err(|e| {
            let text = e.to_string();
            let key = if text.contains("resolution") {
                "quantum.dnu_ghz"
            } else if text.contains("coverage") || text.contains("grid size") {
                "quantum.grid_size"
            } else {
                "quantum.pump_bandwidth_ghz"
            };
            invalid(key, text)
        })?;
        Ok(cfg)
    }

    /// The classical sections as a validated [`ClassicalConfig`].
    pub fn classical_config(&self) -> Result<ClassicalConfig, ValidationError> {
        let grid = self.grid()?;
        let alpha = self.sfg_efficiency()?;
        let (cfg, pulse_key, filter_key) = if self.scan.match_quantum {
            let q = self.quantum_config()?;
            (ClassicalConfig::matched_to_quantum(&q, grid, alpha), "quantum", "quantum")
        } else {
            let p = &self.pulse;
            let f = &self.filter;
            let mut pulse = PulseSpec::gaussian(
                positive("pulse.center_wavelength_nm", p.center_wavelength_nm)? * NANOMETER,
                positive("pulse.fwhm_duration_fs", p.fwhm_duration_fs)? * FEMTOSECOND,
                positive("pulse.peak_amplitude", p.peak_amplitude)?,
            );
            pulse.shape = p.shape;
            let mut filter = FilterSpec::gaussian(
                positive("filter.center_wavelength_nm", f.center_wavelength_nm)? * NANOMETER,
                positive("filter.bandwidth_nm", f.bandwidth_nm)? * NANOMETER,
            );
            filter.shape = f.shape;
            let cfg = ClassicalConfig { pulse, filter, sfg_efficiency: alpha, grid };
            (cfg, "pulse", "filter.bandwidth_nm")
        };
        cfg.pulse.validate().map_err(|e| invalid(pulse_key, e))?;
        cfg.pulse.check_grid(&cfg.grid).map_err(|e| invalid("grid", e))?;
        cfg.filter.validate().map_err(|e| invalid(filter_key, e))?;
        cfg.validate().map_err(|e| invalid(filter_key, e))?;
        Ok(cfg)
    }

    fn classical_job(
        &self,
        base: &ClassicalConfig,
        index: usize,
        window: &ScanWindow,
    ) -> Result<Job, ValidationError> {
        let path = format!("scan.window[{index}]");
        let mut cfg = *base;
        if let Some(bw) = window.bandwidth_nm {
            cfg.filter.fwhm_bandwidth = positive(&format!("{path}.bandwidth_nm"), bw)? * NANOMETER;
            cfg.validate().map_err(|e| invalid(format!("{path}.bandwidth_nm"), e))?;
        }
        let zs = z_list(&path, window.start_um, window.stop_um, window.step_nm, window.zs_um.as_deref())?;
        let reach = match window.kind {
            WindowKind::Fine => max_abs(&zs),
            WindowKind::Envelope => max_abs(&zs) + 0.5 * cfg.pulse.center_wavelength,
        };
        let limit = cfg.max_path_difference();
        if reach > limit {
            return Err(invalid(
                path,
                format!("path difference {reach:e} m exceeds the delay guard {limit:e} m of the grid"),
            ));
        }
        Ok(Job::Classical { name: window.name.clone(), config: cfg, kind: window.kind, zs })
    }

    fn quantum_job(&self, base: &QuantumConfig, index: usize, window: &QuantumWindow) -> Result<Job, ValidationError> {
        let path = format!("quantum.window[{index}]");
        let zs = z_list(&path, window.start_um, window.stop_um, window.step_nm, window.zs_um.as_deref())?;
        let mut cfg = *base;
        match window.coincidence_window_fs {
            Some(tw) => {
                let tw = positive(&format!("{path}.coincidence_window_fs"), tw)?;
                cfg.window = CoincidenceWindow::Fixed { seconds: tw * FEMTOSECOND };
            }
            None => {
                if zs.contains(&0.0) {
                    return Err(invalid(
                        format!("{path}.coincidence_window_fs"),
                        "required when the window contains z = 0 (the half-delay window vanishes there)",
                    ));
                }
            }
        }
        let limit = cfg.max_path_difference();
        if max_abs(&zs) > limit {
            return Err(invalid(
                path,
                format!("path difference {:e} m exceeds the delay guard {limit:e} m of the grid", max_abs(&zs)),
            ));
        }
        Ok(Job::Quantum { name: window.name.clone(), config: cfg, zs })
    }

    fn load_job(&self, path: &str, file: &str, base_dir: &Path, seen: &mut BTreeSet<String>) -> Result<Job, ValidationError> {
        let resolved = base_dir.join(file);
        if !resolved.is_file() {
            return Err(invalid(path, format!("no such file `{}`", resolved.display())));
        }
        let name = resolved
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| invalid(path, "file name is not valid UTF-8"))?
            .to_string();
        check_name(path, &name, seen)?;
        Ok(Job::Load { name, path: resolved })
    }

    /// Validates everything `mode` uses. Relative input paths resolve
    /// against `base_dir` (the config file's directory).
    pub fn plan(&self, mode: Mode, base_dir: &Path) -> Result<Plan, ValidationError> {
        if let Some(declared) = self.mode {
            if declared != mode {
                return Err(invalid(
                    "mode",
                    format!("config declares `{}` but `{}` was requested", declared.label(), mode.label()),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        let mut jobs = Vec::new();
        let mut pairs = Vec::new();
        match mode {
            Mode::SimulateClassical => {
                if self.scan.window.is_empty() {
                    return Err(invalid("scan.window", "no scan windows given"));
                }
                let base = self.classical_config()?;
                for (i, w) in self.scan.window.iter().enumerate() {
                    check_name(&format!("scan.window[{i}].name"), &w.name, &mut seen)?;
                    jobs.push(self.classical_job(&base, i, w)?);
                }
            }
            Mode::SimulateQuantum => {
                if self.quantum.window.is_empty() {
                    return Err(invalid("quantum.window", "no quantum windows given"));
                }
                let base = self.quantum_config()?;
                for (i, w) in self.quantum.window.iter().enumerate() {
                    check_name(&format!("quantum.window[{i}].name"), &w.name, &mut seen)?;
                    jobs.push(self.quantum_job(&base, i, w)?);
                }
            }
            Mode::Analyze => {
                if self.analysis.inputs.is_empty() && self.analysis.calibration.is_none() {
                    return Err(invalid("analysis.inputs", "nothing to analyze"));
                }
                for (i, file) in self.analysis.inputs.iter().enumerate() {
                    jobs.push(self.load_job(&format!("analysis.inputs[{i}]"), file, base_dir, &mut seen)?);
                }
            }
            Mode::Compare => {
                if self.compare.pair.is_empty() {
                    return Err(invalid("compare.pair", "no comparison pairs given"));
                }
                let mut classical_base = None;
                let mut quantum_base = None;
                for (i, pair) in self.compare.pair.iter().enumerate() {
                    let path = format!("compare.pair[{i}]");
                    let classical = match self.scan.window.iter().position(|w| w.name == pair.classical) {
                        Some(k) => {
                            if !jobs.iter().any(|j: &Job| j.name() == pair.classical) {
                                check_name(&format!("scan.window[{k}].name"), &pair.classical, &mut seen)?;
                                if classical_base.is_none() {
                                    classical_base = Some(self.classical_config()?);
                                }
                                let base = classical_base.as_ref().expect("set above");
                                jobs.push(self.classical_job(base, k, &self.scan.window[k])?);
                            }
                            pair.classical.clone()
                        }
                        None => {
                            let job = self.load_job(&format!("{path}.classical"), &pair.classical, base_dir, &mut seen)?;
                            let name = job.name().to_string();
                            jobs.push(job);
                            name
                        }
                    };
                    let quantum = match self.quantum.window.iter().position(|w| w.name == pair.quantum) {
                        Some(k) => {
                            if !jobs.iter().any(|j| j.name() == pair.quantum) {
                                check_name(&format!("quantum.window[{k}].name"), &pair.quantum, &mut seen)?;
                                if quantum_base.is_none() {
                                    quantum_base = Some(self.quantum_config()?);
                                }
                                let base = quantum_base.as_ref().expect("set above");
                                jobs.push(self.quantum_job(base, k, &self.quantum.window[k])?);
                            }
                            pair.quantum.clone()
                        }
                        None => {
                            let job = self.load_job(&format!("{path}.quantum"), &pair.quantum, base_dir, &mut seen)?;
                            let name = job.name().to_string();
                            jobs.push(job);
                            name
                        }
                    };
                    if pair.name.is_empty() {
                        return Err(invalid(format!("{path}.name"), "is required"));
                    }
                    pairs.push(PairJob { name: pair.name.clone(), classical, quantum });
                }
            }
        }

        let known = |path: &str, name: &str| -> Result<(), ValidationError> {
            if jobs.iter().any(|j| j.name() == name) {
                Ok(())
            } else {
                Err(invalid(path, format!("`{name}` is not a series of this run")))
            }
        };
        if let Some(r) = &self.analysis.peak_ratio {
            known("analysis.peak_ratio.numerator", &r.numerator)?;
            known("analysis.peak_ratio.denominator", &r.denominator)?;
            if !(r.exclude_within_um >= 0.0) || !r.exclude_within_um.is_finite() {
                return Err(invalid("analysis.peak_ratio.exclude_within_um", "must be non-negative"));
            }
        }
        if let Some(r) = &self.analysis.period_ratio {
            known("analysis.period_ratio.numerator", &r.numerator)?;
            known("analysis.period_ratio.denominator", &r.denominator)?;
        }
        let calibration = match &self.analysis.calibration {
            Some(c) => {
                let file = base_dir.join(&c.input);
                if !file.is_file() {
                    return Err(invalid("analysis.calibration.input", format!("no such file `{}`", file.display())));
                }
                let lambda = positive("analysis.calibration.wavelength_nm", c.wavelength_nm)? * NANOMETER;
                Some((file, lambda))
            }
            None => None,
        };

        let mut config = self.clone();
        config.mode = Some(mode);
        Ok(Plan { mode, config, jobs, pairs, calibration })
    }
}
