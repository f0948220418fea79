//! Uhlmann fidelity `F = ‖√ρ√σ‖₁²` between Gaussian states.
//!
//! Internally the closed forms are written with `σ = V/2` (vacuum `I/2`).

use nalgebra::Complex;

use super::state::GaussianState;
use crate::error::{Error, Result};
use crate::linalg::{inv_real, omega, RMat};

fn check_pair(a: &GaussianState, b: &GaussianState) -> Result<()> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::DimensionMismatch(format!("{} vs {} modes", a.n_modes(), b.n_modes())));
    }
    Ok(())
}

/// `exp(−δᵀ(V₁+V₂)⁻¹δ)` and `V₁+V₂`.
fn displacement_factor(a: &GaussianState, b: &GaussianState) -> Result<(f64, RMat)> {
    let sum = a.cov() + b.cov();
    let inv = inv_real(&sum, "V1+V2")?;
    let delta = a.mean() - b.mean();
    let q = (delta.transpose() * inv * &delta)[(0, 0)];
    Ok(((-q).exp(), sum))
}

fn clamp_unit(f: f64) -> Result<f64> {
    if !f.is_finite() || f < -1e-9 || f > 1.0 + 1e-7 {
        return Err(Error::NumericalBreakdown(format!("fidelity evaluated to {f}")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `det(σ + iΩ/2) = Π_k (ν_k² − 1)/4` over symplectic eigenvalues of `V`,
/// with eigenvalues within 1e-9 of the vacuum value snapped to it so that
/// pure states give exactly zero.
fn impurity_det(st: &GaussianState) -> f64 {
    st.symplectic_eigenvalues()
        .iter()
        .map(|&nu| if (nu - 1.0).abs() < 1e-9 { 0.0 } else { (nu * nu - 1.0) / 4.0 })
        .product::<f64>()
        .max(0.0)
}

/// `Tr(ρσ)`; equals the fidelity whenever one of the two states is pure.
pub fn overlap_gaussian(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_pair(a, b)?;
    let (e, sum) = displacement_factor(a, b)?;
    let det = (sum * 0.5).determinant();
    if det <= 0.0 {
        return Err(Error::NumericalBreakdown("non-positive det((V1+V2)/2)".into()));
    }
    Ok(e / det.sqrt())
}

pub fn fidelity_one_mode(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_pair(a, b)?;
    if a.n_modes() != 1 {
        return Err(Error::DimensionMismatch("one-mode formula".into()));
    }
    let (e, sum) = displacement_factor(a, b)?;
    let delta = (&sum * 0.5).determinant();
    let lam = 4.0 * impurity_det(a) * impurity_det(b);
    // 1/(√(Δ+Λ) − √Λ) rationalized
    clamp_unit(e * ((delta + lam).sqrt() + lam.sqrt()) / delta)
}

pub fn fidelity_two_mode(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_pair(a, b)?;
    if a.n_modes() != 2 {
        return Err(Error::DimensionMismatch("two-mode formula".into()));
    }
    let (e, sum) = displacement_factor(a, b)?;
    let (s1, s2) = (a.cov() * 0.5, b.cov() * 0.5);
    let om = omega(2);
    let delta = (&sum * 0.5).determinant();
    let gamma = 16.0 * (&om * &s1 * &om * &s2 - RMat::identity(4, 4) * 0.25).determinant();
    let lam = 16.0 * impurity_det(a) * impurity_det(b);
    let s = gamma.max(0.0).sqrt() + lam.sqrt();
    let disc = (s * s - delta).max(0.0);
    // 1/(s − √(s² − Δ)) rationalized
    clamp_unit(e * (s + disc.sqrt()) / delta)
}

/// Fidelity for any number of modes via the auxiliary-matrix formula.
pub fn fidelity_general(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.n_modes();
    let (e, sum) = displacement_factor(a, b)?;
    let (s1, s2) = (a.cov() * 0.5, b.cov() * 0.5);
    let om = omega(n);
    let ssum = &sum * 0.5;
    let ssum_inv = inv_real(&ssum, "σ1+σ2")?;
    let v_aux = om.transpose() * &ssum_inv * (&om * 0.25 + &s2 * &om * &s1);
    let a_mat = &v_aux * &om;
    let eig = a_mat.complex_eigenvalues();
    let mut prod = Complex::new(1.0, 0.0);
    for lam in eig.iter() {
        let term = Complex::new(1.0, 0.0) + (Complex::new(1.0, 0.0) + (lam * lam * 4.0).inv()).sqrt();
        prod *= term;
    }
    let f_tot4 = 4f64.powi(n as i32) * v_aux.determinant() * prod.re;
    if f_tot4 <= 0.0 || !f_tot4.is_finite() {
        return Err(Error::NumericalBreakdown(format!("F_tot^4 = {f_tot4}")));
    }
    let root = f_tot4.powf(0.25) / ssum.determinant().powf(0.25);
    clamp_unit(root * root * e)
}

/// Uhlmann fidelity between Gaussian states (squared convention).
pub fn fidelity_gaussian(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_pair(a, b)?;
    if a.is_pure(1e-9) || b.is_pure(1e-9) {
        return clamp_unit(overlap_gaussian(a, b)?);
    }
    match a.n_modes() {
        1 => fidelity_one_mode(a, b),
        2 => fidelity_two_mode(a, b),
        _ => fidelity_general(a, b),
    }
}

/// Sine distance `√(1 − F)`.
pub fn sine_distance(f: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&f) {
        return Err(Error::OutOfRange(format!("fidelity {f} outside [0, 1]")));
    }
    Ok((1.0 - f.clamp(0.0, 1.0)).sqrt())
}
