use crate::{invalid, Result};
use std::f64::consts::{PI, SQRT_2};

/// `nu{zeta >= y} = y^{-3/2} / (pi sqrt 2)`.
pub fn nu_tail_lifetime(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return invalid("lifetime threshold must be positive");
    }
    Ok(y.powf(-1.5) / (PI * SQRT_2))
}

/// `nu{A >= m} = (3 / 2 sqrt pi) m^{-3/2}`.
pub fn nu_tail_amplitude(m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return invalid("amplitude threshold must be positive");
    }
    Ok(1.5 / PI.sqrt() * m.powf(-1.5))
}

/// Density of the lifetime under `nu`: `(3 / 2 pi sqrt 2) x^{-5/2}`.
pub fn nu_levy_density(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return invalid("argument must be positive");
    }
    Ok(3.0 / (2.0 * PI * SQRT_2) * x.powf(-2.5))
}
