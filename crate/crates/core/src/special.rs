//! Special functions needed by the model families.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Exponential integral `E1(z) = Γ(0, z) = ∫_z^∞ e^{-t}/t dt` for `z > 0`.
///
/// Power series below 1, modified Lentz continued fraction above.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || z.is_nan() {
        return Err(Error::SpecialFunctionDomain(format!("E1 requires z > 0, got {z}")));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    Ok(if z < 1.0 { e1_series(z) } else { (-z).exp() * e1_fraction(z) })
}

/// Upper incomplete gamma function at order zero.
pub fn upper_gamma_zero(z: f64) -> Result<f64> {
    exp_integral_e1(z)
}

/// `e^z E1(z)`, finite for large `z` where `E1` underflows.
pub fn scaled_exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || z.is_nan() {
        return Err(Error::SpecialFunctionDomain(format!("E1 requires z > 0, got {z}")));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    Ok(if z < 1.0 { z.exp() * e1_series(z) } else { e1_fraction(z) })
}

fn e1_series(z: f64) -> f64 {
    // E1(z) = -γ - ln z - Σ_{k>=1} (-z)^k / (k k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -z / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Continued fraction for `e^z E1(z)` (even form), evaluated by Lentz's method.
fn e1_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
