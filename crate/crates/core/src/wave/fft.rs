//! Energy-preserving transforms between the time lattice and the monotone
//! detuning lattice of a [`SampledGrid`].
//!
//! Forward: `F(ν_k) = dt · Σ_j f(t_j) e^{+i2πν_k t_j}`
//! Inverse: `f(t_j) = dν · Σ_k F(ν_k) e^{-i2πν_k t_j}`
//!
//! The sign pairs with envelopes written as `f(t)·e^{-iω_c t}`: a spectral
//! component at absolute angular frequency `ω_c + 2πν` appears at detuning `+ν`.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::SampledGrid;

static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let mut planner = PLANNER.lock().expect("fft planner poisoned");
    planner.plan_fft(n, direction)
}

/// `e^{i2π·m·x}` with the argument reduced modulo one so large `m` stays exact.
fn unit_phase(m: i64, x: f64) -> Complex64 {
    let mut y = (m as f64) * x;
    y -= y.round();
    if y == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if y.abs() == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * y)
    }
}

/// Offset of sample 0 from the origin, in units of the period `1/dν`.
fn origin_fraction(grid: &SampledGrid) -> f64 {
    let t0 = grid.time(0);
    t0 * grid.dnu()
}

pub(crate) fn forward_in_place(buf: &mut [Complex64], grid: &SampledGrid) {
    debug_assert_eq!(buf.len(), grid.n_samples());
    forward_rows(buf, grid);
}

pub(crate) fn inverse_in_place(buf: &mut [Complex64], grid: &SampledGrid) {
    debug_assert_eq!(buf.len(), grid.n_samples());
    inverse_rows(buf, grid);
}

/// [`forward_in_place`] applied to every length-`n` row of a row-major buffer.
pub(crate) fn forward_rows(buf: &mut [Complex64], grid: &SampledGrid) {
    let n = grid.n_samples();
    debug_assert_eq!(buf.len() % n, 0);
    let fft = plan(n, FftDirection::Inverse);
    let x = origin_fraction(grid);
    let half = (n / 2) as i64;
    let dt = grid.dt();
    let post: Vec<Complex64> = (0..n).map(|k| unit_phase(k as i64 - half, x) * dt).collect();
    buf.par_chunks_mut(n).for_each(|row| {
        for v in row.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
        fft.process(row);
        for (v, p) in row.iter_mut().zip(&post) {
            *v *= p;
        }
    });
}

/// [`inverse_in_place`] applied to every length-`n` row of a row-major buffer.
pub(crate) fn inverse_rows(buf: &mut [Complex64], grid: &SampledGrid) {
    let n = grid.n_samples();
    debug_assert_eq!(buf.len() % n, 0);
    let fft = plan(n, FftDirection::Forward);
    let x = origin_fraction(grid);
    let half = (n / 2) as i64;
    let dnu = grid.dnu();
    let pre: Vec<Complex64> = (0..n).map(|k| unit_phase(k as i64 - half, x).conj()).collect();
    buf.par_chunks_mut(n).for_each(|row| {
        for (v, p) in row.iter_mut().zip(&pre) {
            *v *= p;
        }
        fft.process(row);
        for (j, v) in row.iter_mut().enumerate() {
            *v *= if j % 2 == 1 { -dnu } else { dnu };
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(n²) evaluation of the forward definition.
    fn naive_forward(f: &[Complex64], grid: &SampledGrid) -> Vec<Complex64> {
        let n = grid.n_samples();
        (0..n)
            .map(|k| {
                let nu = grid.detuning(k);
                (0..n)
                    .map(|j| {
                        let t = grid.time(j);
                        f[j] * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * nu * t)
                    })
                    .sum::<Complex64>()
                    * grid.dt()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum_with_offset_center() {
        let grid = SampledGrid::new(64, 0.37, 1.3).unwrap();
        let f: Vec<Complex64> = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.3).sin(), (j as f64 * 0.11).cos() - 0.2))
            .collect();
        let expect = naive_forward(&f, &grid);
        let mut got = f.clone();
        forward_in_place(&mut got, &grid);
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-11, "{a} vs {b}");
        }
        inverse_in_place(&mut got, &grid);
        for (a, b) in got.iter().zip(&f) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
