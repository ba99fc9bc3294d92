use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wave::{Domain, Envelope, SPEED_OF_LIGHT};

/// Largest optical-path delay allowed, as a fraction of the grid span.
pub const DELAY_GUARD: f64 = 0.25;

pub(crate) fn check_delay(span: f64, z: f64) -> Result<()> {
    if !z.is_finite() || z.abs() / SPEED_OF_LIGHT > DELAY_GUARD * span {
        return Err(Error::Config(format!(
            "path difference {z:.6e} m exceeds the delay guard ({:.6e} m)",
            DELAY_GUARD * span * SPEED_OF_LIGHT
        )));
    }
    Ok(())
}

/// Field after the unbalanced Michelson: `½[f(t) + f(t + z/c)·e^{−iω₀z/c}]`.
///
/// The delayed replica is produced with a spectral phase ramp, so fractional
/// sample delays are exact on the periodic grid.
pub fn michelson_transform(e: &Envelope, z: f64) -> Result<Envelope> {
    e.expect_domain(Domain::Time, "michelson_transform")?;
    check_delay(e.grid().span(), z)?;
    michelson_from_spectrum(&e.to_spectrum()?, z)
}

/// Same as [`michelson_transform`] starting from an already transformed field.
pub(crate) fn michelson_from_spectrum(spectrum: &Envelope, z: f64) -> Result<Envelope> {
    spectrum.expect_domain(Domain::Frequency, "michelson_transform")?;
    check_delay(spectrum.grid().span(), z)?;
    let delay = z / SPEED_OF_LIGHT;
    let carrier_phase = Complex64::from_polar(1.0, -spectrum.carrier() * delay);
    let grid = *spectrum.grid();
    let combined: Vec<Complex64> = spectrum
        .samples()
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let ramp = Complex64::from_polar(1.0, -2.0 * PI * grid.detuning(k) * delay);
            0.5 * s * (1.0 + ramp * carrier_phase)
        })
        .collect();
    Envelope::from_parts_unchecked(grid, combined, spectrum.carrier(), Domain::Frequency).from_spectrum()
}

/// `α·E²`: pointwise square, carrier doubled.
pub fn sfg_transform(e: &Envelope, alpha: Complex64) -> Result<Envelope> {
    e.expect_domain(Domain::Time, "sfg_transform")?;
    let samples = e.samples().iter().map(|s| alpha * s * s).collect();
    Envelope::new(*e.grid(), samples, 2.0 * e.carrier(), Domain::Time)
}

/// Detector response `∫|E|² dt`.
pub fn detect_energy(e: &Envelope) -> Result<f64> {
    e.expect_domain(Domain::Time, "detect_energy")?;
    Ok(e.energy())
}

/// `a[g] = ∫ g(t) dt`, the weight of `g` in the narrowband limit.
pub fn narrowband_coefficient(g: &Envelope) -> Result<Complex64> {
    g.expect_domain(Domain::Time, "narrowband_coefficient")?;
    Ok(g.samples().iter().sum::<Complex64>() * g.grid().dt())
}
