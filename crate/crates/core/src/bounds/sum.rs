use crate::error::{check_range, Error, Result};
use crate::gates::unit_gain_reflectivity;

/// Offline squeezing on the first SUM input in the reference configuration (≈15 dB).
pub const SUM_RA: f64 = 1.726;

fn check(n: f64, r: f64, ra: f64, rb: f64) -> Result<()> {
    check_range(r > 0.0 && r <= 1.0, || format!("R = {r} outside (0, 1]"))?;
    check_range(ra >= 0.0 && rb >= 0.0, || format!("rA = {ra}, rB = {rb} must be non-negative"))?;
    check_range(n >= 0.0, || format!("N = {n} must be non-negative"))
}

/// Fidelity between the ideal and approximate SUM outputs on two TMS states
/// of mean photon number `N`, the SUM acting on one arm of each.
pub fn sum_tms_fidelity(n: f64, r: f64, ra: f64, rb: f64) -> Result<f64> {
    check(n, r, ra, rb)?;
    let kappa = (r - 1.0) * (1.0 + 2.0 * n);
    let rad = (kappa - 2.0 * (2.0 * ra).exp() * r) * (kappa - 2.0 * (2.0 * rb).exp() * r);
    if !(rad > 0.0) {
        return Err(Error::NumericalBreakdown(format!("non-positive radicand {rad}")));
    }
    Ok(2.0 * r * (ra + rb).exp() / rad.sqrt())
}

/// Sine distance at unit gain with `rA = 1.726`.
pub fn sum_sine(rb: f64, n: f64) -> Result<f64> {
    Ok((1.0 - sum_tms_fidelity(n, unit_gain_reflectivity(), SUM_RA, rb)?).max(0.0).sqrt())
}

/// Fidelity on `|z⟩ ⊗ |z⟩`.
pub fn sum_zvac_fidelity(z: f64, r: f64, ra: f64, rb: f64) -> Result<f64> {
    check(0.0, r, ra, rb)?;
    check_range(z > 0.0, || format!("z = {z} must be positive"))?;
    let a = 2.0 * z * r + (1.0 - r) * (-2.0 * ra).exp();
    let b = 2.0 * r + z * (1.0 - r) * (-2.0 * rb).exp();
    Ok(2.0 * z.sqrt() * r / (a * b).sqrt())
}
