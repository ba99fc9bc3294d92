//! Physical constants and unit conversions. Everything inside the crate is SI.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const FEMTOSECOND: f64 = 1e-15;
pub const NANOMETER: f64 = 1e-9;
pub const MICROMETER: f64 = 1e-6;
pub const MILLIMETER: f64 = 1e-3;
pub const TERAHERTZ: f64 = 1e12;
pub const GIGAHERTZ: f64 = 1e9;

/// Named bundle of the constants the simulator depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants { c: SPEED_OF_LIGHT };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// Angular frequency `2πc/λ` of a vacuum wavelength.
pub fn wavelength_to_omega(wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(Error::Domain(format!(
            "wavelength must be positive and finite, got {wavelength}"
        )));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT / wavelength)
}

/// Vacuum wavelength `2πc/ω` of an angular frequency.
pub fn omega_to_wavelength(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "angular frequency must be positive and finite, got {omega}"
        )));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT / omega)
}

/// Frequency width `cΔλ/λ²` (Hz) of a narrow wavelength band.
pub fn wavelength_band_to_hz(center_wavelength: f64, wavelength_width: f64) -> f64 {
    SPEED_OF_LIGHT * wavelength_width / (center_wavelength * center_wavelength)
}

/// Inverse of [`wavelength_band_to_hz`].
pub fn hz_band_to_wavelength(center_wavelength: f64, frequency_width: f64) -> f64 {
    frequency_width * center_wavelength * center_wavelength / SPEED_OF_LIGHT
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_of_782nm() {
        // 2π·299792458 / 782e-9, evaluated by hand: 1.8836515673e9 / 7.82e-7
        let w = wavelength_to_omega(782e-9).unwrap();
        assert!((w - 2.408_761e15).abs() / 2.408_761e15 < 1e-6, "{w}");
    }

    #[test]
    fn halving_wavelength_doubles_omega() {
        let a = wavelength_to_omega(782e-9).unwrap();
        let b = wavelength_to_omega(391e-9).unwrap();
        assert_eq!(b, 2.0 * a);
    }

    #[test]
    fn wavelength_round_trip() {
        for lam in [391e-9, 782e-9, 1.55e-6, 3.3e-7] {
            let back = omega_to_wavelength(wavelength_to_omega(lam).unwrap()).unwrap();
            assert!((back - lam).abs() / lam <= 1e-15);
        }
    }

    #[test]
    fn non_positive_wavelength_is_rejected() {
        assert!(matches!(wavelength_to_omega(0.0), Err(Error::Domain(_))));
        assert!(matches!(wavelength_to_omega(-1e-6), Err(Error::Domain(_))));
        assert!(matches!(omega_to_wavelength(f64::NAN), Err(Error::Domain(_))));
    }
}
