use crate::wave::SPEED_OF_LIGHT;

/// Squared white-light fringe `[(1 + cos(ω₀z/c))/2]²`, peak 1.
pub fn analytic_white_light(z: f64, omega0: f64) -> f64 {
    let h = 0.5 * (1.0 + (omega0 * z / SPEED_OF_LIGHT).cos());
    h * h
}

/// Sum-frequency fringe `¼·(1 + cos(2ω₀z/c))/2`, peak ¼.
pub fn analytic_sfg(z: f64, omega0: f64) -> f64 {
    0.25 * 0.5 * (1.0 + (2.0 * omega0 * z / SPEED_OF_LIGHT).cos())
}
