use crate::error::{Error, Result};

/// Full width at half maximum of a single dominant peak.
///
/// Crossings are located by linear interpolation on each side of the global
/// maximum. A peak whose half-maximum level is not crossed before an array
/// edge is reported as a measurement error.
pub fn fwhm(values: &[f64], coords: &[f64]) -> Result<f64> {
    if values.len() != coords.len() {
        return Err(Error::Usage(format!(
            "fwhm: {} values but {} coordinates",
            values.len(),
            coords.len()
        )));
    }
    if values.len() < 3 {
        return Err(Error::Usage("fwhm needs at least 3 samples".into()));
    }
    if values.iter().chain(coords).any(|v| !v.is_finite()) {
        return Err(Error::Measurement("fwhm: non-finite input".into()));
    }
    let (peak, max) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    if !(max > 0.0) {
        return Err(Error::Measurement("fwhm: peak value is not positive".into()));
    }
    let half = 0.5 * max;
    let crossing = |i: usize, j: usize| {
        // values[i] >= half > values[j]
        let f = (values[i] - half) / (values[i] - values[j]);
        coords[i] + f * (coords[j] - coords[i])
    };
    let left = (1..=peak)
        .rev()
        .find(|&i| values[i - 1] < half)
        .map(|i| crossing(i, i - 1))
        .ok_or_else(|| Error::Measurement("fwhm: no half-maximum crossing left of the peak".into()))?;
    let right = (peak..values.len() - 1)
        .find(|&i| values[i + 1] < half)
        .map(|i| crossing(i, i + 1))
        .ok_or_else(|| Error::Measurement("fwhm: no half-maximum crossing right of the peak".into()))?;
    Ok((right - left).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_width() {
        let w = 3.7;
        let xs: Vec<f64> = (0..4001).map(|i| -10.0 + i as f64 * 0.005).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (-4.0 * std::f64::consts::LN_2 * x * x / (w * w)).exp()).collect();
        let got = fwhm(&ys, &xs).unwrap();
        assert!((got - w).abs() / w < 1e-3);
    }

    #[test]
    fn triangle_half_height_chord() {
        let xs: Vec<f64> = (0..=20).map(|i| -1.0 + i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 - x.abs()).collect();
        assert!((fwhm(&ys, &xs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_ramp_has_no_width() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(matches!(fwhm(&xs, &xs), Err(Error::Measurement(_))));
    }

    #[test]
    fn length_mismatch_and_short_input() {
        assert!(fwhm(&[1.0, 2.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(fwhm(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }
}
