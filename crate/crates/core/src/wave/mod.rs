//! Units, sampling grids and energy-preserving Fourier transforms.

mod envelope;
pub(crate) mod fft;
mod fwhm;
mod grid;
pub mod units;

pub use envelope::{from_spectrum, to_spectrum, Domain, Envelope};
pub use fwhm::fwhm;
pub use grid::{make_grid, GridParams, SampledGrid};
pub use units::{omega_to_wavelength, wavelength_to_omega, PhysicalConstants, SPEED_OF_LIGHT};
