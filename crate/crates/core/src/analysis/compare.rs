use serde::{Deserialize, Serialize};

use super::fit::{fit_fringe, FringeMetrics};
use crate::error::{Error, Result};
use crate::interferogram::{Interferogram, Regime};
use crate::wave::SPEED_OF_LIGHT;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// RMS of the difference of the peak-normalized curves on the common axis.
    pub rms_deviation: f64,
    /// Common range of the phase `ω₀z/c`, radians.
    pub phase_range: (f64, f64),
    pub points: usize,
    pub classical_regime: Regime,
    pub quantum_regime: Regime,
    pub classical_metrics: Option<FringeMetrics>,
    pub quantum_metrics: Option<FringeMetrics>,
}

/// Peak-normalized `(ω₀z/c, signal)` columns.
fn phase_columns(ig: &Interferogram, label: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let carrier = ig
        .metadata()
        .carrier
        .ok_or_else(|| Error::Usage(format!("{label} interferogram has no carrier in its metadata")))?;
    let peak = ig.max_signal().ok_or_else(|| Error::Usage(format!("{label} interferogram is empty")))?;
    if !(peak > 0.0) {
        return Err(Error::Domain(format!("{label} interferogram is identically zero")));
    }
    let phases = ig.zs().iter().map(|z| carrier * z / SPEED_OF_LIGHT).collect();
    let values = ig.signals().iter().map(|s| s / peak).collect();
    Ok((phases, values))
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|v| *v <= x);
    if i == 0 {
        return ys[0];
    }
    if i >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] * (1.0 - w) + ys[i] * w
}

/// Peak-normalizes both inputs, resamples them on a uniform phase axis over
/// their common range and reports the RMS difference.
pub fn compare(classical: &Interferogram, quantum: &Interferogram) -> Result<ComparisonReport> {
    let (xa, ya) = phase_columns(classical, "classical")?;
    let (xb, yb) = phase_columns(quantum, "quantum")?;
    let lo = xa[0].max(xb[0]);
    let hi = xa[xa.len() - 1].min(xb[xb.len() - 1]);
    if !(hi > lo) {
        return Err(Error::Usage(format!(
            "phase ranges do not overlap ([{:.3}, {:.3}] vs [{:.3}, {:.3}] rad)",
            xa[0],
            xa[xa.len() - 1],
            xb[0],
            xb[xb.len() - 1]
        )));
    }
    let points = xa.len().max(xb.len()).max(2);
    let mut sum_sq = 0.0;
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        sum_sq += (interpolate(&xa, &ya, x) - interpolate(&xb, &yb, x)).powi(2);
    }
    Ok(ComparisonReport {
        rms_deviation: (sum_sq / points as f64).sqrt(),
        phase_range: (lo, hi),
        points,
        classical_regime: classical.metadata().regime,
        quantum_regime: quantum.metadata().regime,
        classical_metrics: fit_fringe(classical).ok(),
        quantum_metrics: fit_fringe(quantum).ok(),
    })
}
