//! Ideal Gaussian gates and their experimentally realizable approximations.

mod convergence;
mod factory;
mod mixture;

pub use convergence::{displacement_witness_delta2, standard_ladders, sup_char_gap, Ladder, ETA_LADDER, RE_LADDER, SIGMA_LADDER};
pub use factory::{gate_pair, parse_complex, GateFamily, GatePair};
pub use mixture::{ApproxGate, Mixture, MixtureFamily, TruncatedNormalParams};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_bs, symplectic_squeeze, symplectic_sum, GaussianChannel, GaussianState};
use crate::linalg::{RMat, RVec};

fn in_open_unit(name: &str, v: f64) -> Result<()> {
    if 0.0 < v && v < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn in_half_open_unit(name: &str, v: f64) -> Result<()> {
    if 0.0 < v && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {v} must lie in (0, 1]")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {v} must be non-negative")))
    }
}

pub fn coherent_mean(alpha: Complex64) -> RVec {
    GaussianState::coherent(alpha).mean().clone()
}

/// Pure loss: `X = √η I`, `Y = (1−η) I`.
pub fn pure_loss(eta: f64) -> Result<GaussianChannel> {
    in_half_open_unit("eta", eta)?;
    GaussianChannel::new(1, 1, RMat::identity(2, 2) * eta.sqrt(), RMat::identity(2, 2) * (1.0 - eta), RVec::zeros(2))
}

pub fn ideal_displacement(alpha: Complex64) -> GaussianChannel {
    GaussianChannel::displacement(coherent_mean(alpha))
}

/// `D^α ∘ L^η`.
pub fn approx_displacement(eta: f64, alpha: Complex64) -> Result<GaussianChannel> {
    in_open_unit("eta", eta)?;
    ideal_displacement(alpha).after(&pure_loss(eta)?)
}

/// Beamsplitter angle that realizes `a → √η a + √(1−η) b` at `φ = −π/2`.
pub fn bs_theta(eta: f64) -> f64 {
    eta.sqrt().acos()
}

/// Approximate displacement built from its physical dilation: beamsplitter of
/// transmissivity `η` with an environment in `|α/√(1−η)⟩`, environment discarded.
pub fn raw_displacement(eta: f64, alpha: Complex64) -> Result<GaussianChannel> {
    in_open_unit("eta", eta)?;
    let s = symplectic_bs(bs_theta(eta), -std::f64::consts::FRAC_PI_2);
    let env = GaussianState::coherent(alpha / (1.0 - eta).sqrt());
    GaussianChannel::from_dilation(s.x(), &env)
}

/// Ideal beamsplitter of transmissivity `η` and phase `φ`.
pub fn ideal_bs(eta: f64, phi: f64) -> Result<GaussianChannel> {
    in_half_open_unit("eta", eta)?;
    Ok(symplectic_bs(bs_theta(eta), phi))
}

/// Beamsplitter preceded by equal pure loss `η′` on both inputs.
pub fn approx_bs_loss(eta: f64, phi: f64, eta_loss: f64) -> Result<GaussianChannel> {
    in_open_unit("eta", eta)?;
    in_half_open_unit("eta_loss", eta_loss)?;
    let loss2 = pure_loss(eta_loss)?.tensor(&pure_loss(eta_loss)?);
    ideal_bs(eta, phi)?.after(&loss2)
}

/// `ς² = (1−η) e^{−2r_E} / η`.
pub fn squeezer_noise(eta: f64, r_e: f64) -> f64 {
    (1.0 - eta) * (-2.0 * r_e).exp() / eta
}

/// Residual `Ξ^{η,r_E}`: `X = I`, `Y = diag(ς², 0)`.
pub fn squeezer_residual(eta: f64, r_e: f64) -> Result<GaussianChannel> {
    in_open_unit("eta", eta)?;
    non_negative("r_E", r_e)?;
    let y = RMat::from_diagonal(&RVec::from_vec(vec![squeezer_noise(eta, r_e), 0.0]));
    GaussianChannel::new(1, 1, RMat::identity(2, 2), y, RVec::zeros(2))
}

pub fn ideal_squeezer(r: f64) -> GaussianChannel {
    symplectic_squeeze(r)
}

/// `S^r ∘ Ξ^{e^{−2r}, r_E}` for `r > 0`.
pub fn approx_squeezer(r: f64, r_e: f64) -> Result<GaussianChannel> {
    if r <= 0.0 {
        return Err(Error::OutOfRange(format!("squeezing r = {r} must be positive")));
    }
    symplectic_squeeze(r).after(&squeezer_residual((-2.0 * r).exp(), r_e)?)
}

/// `σ_x K⁻¹[(K σ_x V σ_x K) + diag(0, 1)]K⁻¹ σ_x` with `K = diag(ς, 1/ς)`.
pub fn canonical_b1_conjugation(eta: f64, r_e: f64, v: &RMat) -> Result<RMat> {
    in_open_unit("eta", eta)?;
    non_negative("r_E", r_e)?;
    if v.shape() != (2, 2) {
        return Err(Error::DimensionMismatch("single-mode covariance expected".into()));
    }
    let s = squeezer_noise(eta, r_e).sqrt();
    if s == 0.0 {
        return Ok(v.clone());
    }
    let sx = RMat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let k = RMat::from_diagonal(&RVec::from_vec(vec![s, 1.0 / s]));
    let kinv = RMat::from_diagonal(&RVec::from_vec(vec![1.0 / s, s]));
    let yb1 = RMat::from_diagonal(&RVec::from_vec(vec![0.0, 1.0]));
    Ok(&sx * &kinv * (&k * &sx * v * &sx * &k + yb1) * &kinv * &sx)
}

/// SUM-gate gain realized by a beamsplitter reflectivity parameter `R`.
pub fn sum_gain(r: f64) -> f64 {
    1.0 / r.sqrt() - r.sqrt()
}

/// Residual `Λ^{r_A,r_B,R}`: `X = I₄`, correlated `x`/`p` noise.
pub fn sum_residual(ra: f64, rb: f64, r: f64) -> Result<GaussianChannel> {
    in_half_open_unit("R", r)?;
    non_negative("rA", ra)?;
    non_negative("rB", rb)?;
    let a = (1.0 - r) * (-2.0 * ra).exp() / (1.0 + r);
    let b = (1.0 - r) * (-2.0 * rb).exp() / (1.0 + r);
    let sr = r.sqrt();
    let mut y = RMat::zeros(4, 4);
    y[(0, 0)] = a;
    y[(0, 2)] = -a / sr;
    y[(2, 0)] = -a / sr;
    y[(2, 2)] = a / r;
    y[(1, 1)] = b / r;
    y[(1, 3)] = b / sr;
    y[(3, 1)] = b / sr;
    y[(3, 3)] = b;
    GaussianChannel::new(2, 2, RMat::identity(4, 4), y, RVec::zeros(4))
}

pub fn ideal_sum(g: f64) -> GaussianChannel {
    symplectic_sum(g)
}

/// `SUM^G ∘ Λ` with `G = 1/√R − √R`.
pub fn approx_sum(ra: f64, rb: f64, r: f64) -> Result<GaussianChannel> {
    symplectic_sum(sum_gain(r)).after(&sum_residual(ra, rb, r)?)
}

/// The reflectivity giving unit SUM gain, `R = (√5 − 1)²/4`.
pub fn unit_gain_reflectivity() -> f64 {
    (5f64.sqrt() - 1.0).powi(2) / 4.0
}
