use num_complex::Complex64;

use super::problem::{EcdConfig, EcdProblem, EcdSolution};
use super::solver::solve_ecd_with;
use crate::error::{check_range, Result};
use crate::fock::{choi_of, kraus_pure_loss, kraus_raw_displacement, op_displacement_rect, TruncatedChannel};

/// `J = Choi(id) − Choi(L^η)` on `M + 1` levels. By unitary invariance this has
/// the same value as the pair `(D^α, D^α ∘ L^η)`.
pub fn loss_problem(eta: f64, e: f64, m: usize) -> Result<EcdProblem> {
    check_range(0.0 < eta && eta <= 1.0, || format!("eta = {eta} outside (0, 1]"))?;
    let id = choi_of(&TruncatedChannel::identity(m + 1));
    let l = choi_of(&kraus_pure_loss(eta, m)?);
    EcdProblem::from_chois(&id, &l, m + 1, e)
}

/// `J = Choi(D^α) − Choi(D̃)` with the approximation built from its beamsplitter
/// dilation; outputs cut at `out_dim`, environment at `env_dim`.
pub fn displaced_problem(eta: f64, alpha: Complex64, e: f64, m: usize, out_dim: usize, env_dim: usize) -> Result<EcdProblem> {
    let d = op_displacement_rect(alpha, out_dim, m + 1)?;
    let ideal = TruncatedChannel::new(vec![d.mat], d.leakage)?;
    let approx = kraus_raw_displacement(eta, alpha, m + 1, out_dim, env_dim)?;
    EcdProblem::from_chois(&choi_of(&ideal), &choi_of(&approx), m + 1, e)
}

pub fn d2_solution(eta: f64, e: f64, m: usize, cfg: &EcdConfig) -> Result<EcdSolution> {
    solve_ecd_with(&loss_problem(eta, e, m)?, cfg)
}

/// Truncated energy-constrained distance between `D^α` and `D^α ∘ L^η`.
/// The SDP optimum already is the half-norm, so no factor is applied.
pub fn d2_displacement(eta: f64, e: f64, m: usize) -> Result<f64> {
    check_range(0.0 < eta && eta < 1.0, || format!("eta = {eta} outside (0, 1)"))?;
    Ok(d2_solution(eta, e, m, &EcdConfig::default())?.primal)
}

/// `(d₂(M), d₂(M) + 2√(E/(M+1)))`: the untruncated value lies in between.
pub fn sandwich_check(eta: f64, e: f64, m: usize) -> Result<(f64, f64)> {
    let lo = d2_displacement(eta, e, m)?;
    Ok((lo, lo + 2.0 * (e / (m + 1) as f64).sqrt()))
}
