use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wave::{fft, Domain, SampledGrid, SPEED_OF_LIGHT};

/// Joint amplitude of a photon pair on an `n × n` lattice, row index for
/// photon 1 and column index for photon 2.
///
/// In the frequency domain the axes are detunings `ν_k = (k − n/2)·dν` from
/// the carrier; in the time domain they are `t_k = (k − n/2)·dt` with
/// `dt = 1/(n·dν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    n: usize,
    dnu: f64,
    carrier: f64,
    domain: Domain,
    amplitude: Vec<Complex64>,
}

impl BiphotonState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dnu(&self) -> f64 {
        self.dnu
    }

    pub fn dt(&self) -> f64 {
        1.0 / (self.n as f64 * self.dnu)
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn at(&self, i1: usize, i2: usize) -> Complex64 {
        self.amplitude[i1 * self.n + i2]
    }

    /// Axis coordinate of index `k`: detuning (Hz) or time (s) by domain.
    pub fn coordinate(&self, k: usize) -> f64 {
        let step = match self.domain {
            Domain::Frequency => self.dnu,
            Domain::Time => self.dt(),
        };
        (k as f64 - (self.n / 2) as f64) * step
    }

    /// `∬|ψ|²` with the measure of the current domain.
    pub fn norm(&self) -> f64 {
        let cell = match self.domain {
            Domain::Frequency => self.dnu * self.dnu,
            Domain::Time => self.dt() * self.dt(),
        };
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * cell
    }

    /// `max |ψ(i,j) − ψ(j,i)|`.
    pub fn exchange_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.amplitude[i * n + j] - self.amplitude[j * n + i]).norm());
            }
        }
        worst
    }

    fn axis_grid(&self) -> SampledGrid {
        SampledGrid::new(self.n, self.dt(), 0.0).expect("state dimensions were validated")
    }

    fn expect_domain(&self, domain: Domain, op: &str) -> Result<()> {
        if self.domain != domain {
            return Err(Error::Usage(format!("{op} expects a {domain:?}-domain state, got {:?}", self.domain)));
        }
        Ok(())
    }
}

/// Normalized state `∝ exp(−2 ln2 (ν₁+ν₂)²/σ_p²)·exp(−ln2 (ν₁²+ν₂²)/σ_s²)`.
///
/// No regime checks beyond positivity; `pump_bandwidth = ∞` gives the
/// uncorrelated limit.
pub fn gaussian_biphoton(
    pump_bandwidth: f64,
    single_bandwidth: f64,
    n: usize,
    dnu: f64,
    carrier: f64,
) -> Result<BiphotonState> {
    if !(pump_bandwidth > 0.0) || !(single_bandwidth > 0.0) || !single_bandwidth.is_finite() {
        return Err(Error::Config("biphoton bandwidths must be positive".into()));
    }
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::Config(format!("grid size {n} must be a power of two >= 16")));
    }
    if !(dnu > 0.0) || !dnu.is_finite() || !(carrier > 0.0) || !carrier.is_finite() {
        return Err(Error::Config("detuning step and carrier must be positive".into()));
    }
    let nu: Vec<f64> = (0..n).map(|k| (k as f64 - (n / 2) as f64) * dnu).collect();
    let marginal: Vec<f64> = nu.iter().map(|v| (-LN_2 * v * v / (single_bandwidth * single_bandwidth)).exp()).collect();
    let mut amplitude = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let sum = nu[i] + nu[j];
            let pump = (-2.0 * LN_2 * sum * sum / (pump_bandwidth * pump_bandwidth)).exp();
            amplitude.push(Complex64::new(pump * marginal[i] * marginal[j], 0.0));
        }
    }
    let mut state = BiphotonState { n, dnu, carrier, domain: Domain::Frequency, amplitude };
    let norm = state.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Config("biphoton amplitude vanishes on this grid".into()));
    }
    let scale = 1.0 / norm.sqrt();
    state.amplitude.iter_mut().for_each(|a| *a *= scale);
    Ok(state)
}

/// Both photons traverse the interferometer: `ψ·t(ω₀+2πν₁)·t(ω₀+2πν₂)` with
/// `t(ω) = ½(1 + e^{iωz/c})`.
pub fn biphoton_michelson(state: &BiphotonState, z: f64) -> Result<BiphotonState> {
    state.expect_domain(Domain::Frequency, "biphoton_michelson")?;
    let delay = z / SPEED_OF_LIGHT;
    let n = state.n;
    let t: Vec<Complex64> = (0..n)
        .map(|k| {
            let omega = state.carrier + 2.0 * PI * state.coordinate(k);
            0.5 * (1.0 + Complex64::from_polar(1.0, omega * delay))
        })
        .collect();
    let mut out = state.clone();
    for (i, row) in out.amplitude.chunks_mut(n).enumerate() {
        for (a, tj) in row.iter_mut().zip(&t) {
            *a *= t[i] * tj;
        }
    }
    Ok(out)
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// 2-D transform of the joint spectral amplitude to arrival times.
pub fn joint_temporal(state: &BiphotonState) -> Result<BiphotonState> {
    state.expect_domain(Domain::Frequency, "joint_temporal")?;
    let grid = state.axis_grid();
    let mut buf = state.amplitude.clone();
    fft::inverse_rows(&mut buf, &grid);
    transpose(&mut buf, state.n);
    fft::inverse_rows(&mut buf, &grid);
    transpose(&mut buf, state.n);
    Ok(BiphotonState { amplitude: buf, domain: Domain::Time, ..*state })
}

/// Inverse of [`joint_temporal`].
pub fn joint_spectral(state: &BiphotonState) -> Result<BiphotonState> {
    state.expect_domain(Domain::Time, "joint_spectral")?;
    let grid = state.axis_grid();
    let mut buf = state.amplitude.clone();
    fft::forward_rows(&mut buf, &grid);
    transpose(&mut buf, state.n);
    fft::forward_rows(&mut buf, &grid);
    transpose(&mut buf, state.n);
    Ok(BiphotonState { amplitude: buf, domain: Domain::Frequency, ..*state })
}

/// `∬_{|t₁−t₂| ≤ T_w} |ψ(t₁,t₂)|² dt₁dt₂`.
pub fn coincidence_probability(state: &BiphotonState, window: f64) -> Result<f64> {
    state.expect_domain(Domain::Time, "coincidence_probability")?;
    if !(window > 0.0) || window.is_nan() {
        return Err(Error::Domain(format!("coincidence window must be positive, got {window:e}")));
    }
    let n = state.n;
    let dt = state.dt();
    // Tolerate rounding when the window is an exact multiple of dt.
    let reach = (window / dt * (1.0 + 1e-12)).floor();
    let m = if reach >= n as f64 { n } else { reach as usize };
    let mut total = 0.0;
    for (i, row) in state.amplitude.chunks(n).enumerate() {
        let lo = i.saturating_sub(m);
        let hi = (i + m).min(n - 1);
        total += row[lo..=hi].iter().map(|a| a.norm_sqr()).sum::<f64>();
    }
    Ok(total * dt * dt)
}
