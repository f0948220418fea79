use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, direct_sum, eigh_real, eigvalsh, max_abs, min_eig_plus_i, omega, symmetrize, to_complex, RMat, RVec,
    PSD_TOL,
};

/// Mean vector and covariance of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct GaussianState {
    n_modes: usize,
    mean: RVec,
    cov: RMat,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n_modes: usize,
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

impl TryFrom<StateRepr> for GaussianState {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        let cov = rows_to_mat(&r.cov)?;
        GaussianState::new(r.n_modes, DVector::from_vec(r.mean), cov)
    }
}

impl From<GaussianState> for StateRepr {
    fn from(s: GaussianState) -> Self {
        StateRepr { n_modes: s.n_modes, mean: s.mean.iter().copied().collect(), cov: mat_to_rows(&s.cov) }
    }
}

pub(crate) fn rows_to_mat(rows: &[Vec<f64>]) -> Result<RMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

pub(crate) fn mat_to_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl GaussianState {
    /// Validated constructor: symmetric covariance with `V + iΩ ⪰ 0`.
    pub fn new(n_modes: usize, mean: RVec, cov: RMat) -> Result<Self> {
        let d = 2 * n_modes;
        if n_modes == 0 || mean.len() != d || cov.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "{n_modes} modes need mean {d} and cov {d}x{d}, got {} and {:?}",
                mean.len(),
                cov.shape()
            )));
        }
        if max_abs(&(&cov - cov.transpose())) > 1e-10 {
            return Err(Error::NumericalBreakdown("covariance not symmetric".into()));
        }
        let cov = symmetrize(&cov);
        let min_eig = min_eig_plus_i(&cov, &omega(n_modes));
        if min_eig < -PSD_TOL {
            return Err(Error::UncertaintyViolation { min_eig });
        }
        Ok(Self { n_modes, mean, cov })
    }

    pub(crate) fn new_unchecked(n_modes: usize, mean: RVec, cov: RMat) -> Self {
        Self { n_modes, mean, cov: symmetrize(&cov) }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::new_unchecked(n_modes, RVec::zeros(2 * n_modes), RMat::identity(2 * n_modes, 2 * n_modes))
    }

    pub fn coherent(alpha: Complex64) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self::new_unchecked(1, RVec::from_vec(vec![s * alpha.re, s * alpha.im]), RMat::identity(2, 2))
    }

    pub fn squeezed_vacuum(z: f64) -> Result<Self> {
        if z < 1e-12 {
            return Err(Error::NegativeParameter(format!("squeezing z must exceed 1e-12, got {z}")));
        }
        Ok(Self::new_unchecked(1, RVec::zeros(2), RMat::from_diagonal(&RVec::from_vec(vec![z, 1.0 / z]))))
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        if nbar < 0.0 {
            return Err(Error::NegativeParameter(format!("nbar = {nbar}")));
        }
        Ok(Self::new_unchecked(1, RVec::zeros(2), RMat::identity(2, 2) * (2.0 * nbar + 1.0)))
    }

    /// Two-mode squeezed vacuum with mean photon number `n` per arm.
    pub fn tms(n: f64) -> Result<Self> {
        if n < 0.0 {
            return Err(Error::NegativeParameter(format!("N = {n}")));
        }
        let a = 2.0 * n + 1.0;
        let b = 2.0 * (n * (n + 1.0)).sqrt();
        let mut cov = RMat::identity(4, 4) * a;
        cov[(0, 2)] = b;
        cov[(2, 0)] = b;
        cov[(1, 3)] = -b;
        cov[(3, 1)] = -b;
        Ok(Self::new_unchecked(2, RVec::zeros(4), cov))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &RVec {
        &self.mean
    }

    pub fn cov(&self) -> &RMat {
        &self.cov
    }

    /// Tensor product (direct sum in phase space), `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut mean = RVec::zeros(self.mean.len() + other.mean.len());
        mean.rows_mut(0, self.mean.len()).copy_from(&self.mean);
        mean.rows_mut(self.mean.len(), other.mean.len()).copy_from(&other.mean);
        Self::new_unchecked(self.n_modes + other.n_modes, mean, direct_sum(&self.cov, &other.cov))
    }

    /// Reduced state on the listed modes, in the given order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() || modes.iter().any(|&m| m >= self.n_modes) {
            return Err(Error::DimensionMismatch(format!("modes {modes:?} of {}", self.n_modes)));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = RVec::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = RMat::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        Ok(Self::new_unchecked(modes.len(), mean, cov))
    }

    /// Mean photon number of one mode: `(V_xx + V_pp)/4 + (μ_x² + μ_p²)/2 − 1/2`.
    pub fn mean_photon(&self, mode: usize) -> f64 {
        let (i, j) = (2 * mode, 2 * mode + 1);
        (self.cov[(i, i)] + self.cov[(j, j)]) / 4.0 + (self.mean[i].powi(2) + self.mean[j].powi(2)) / 2.0 - 0.5
    }

    /// Purity `Tr ρ² = 1/√det V`.
    pub fn purity(&self) -> f64 {
        1.0 / self.cov.determinant().sqrt()
    }

    /// Symplectic eigenvalues `ν_k ≥ 1` of the covariance, ascending.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let (w, v) = eigh_real(&self.cov);
        let half = &v * RMat::from_diagonal(&w.map(|x| x.max(0.0).sqrt())) * v.transpose();
        let h = to_complex(&half);
        let m = &h * to_complex(&omega(self.n_modes)).map(|z| z * c(0.0, 1.0)) * &h;
        let mut nu: Vec<f64> = eigvalsh(&m).iter().copied().filter(|x| *x > 0.0).collect();
        nu.sort_by(f64::total_cmp);
        nu.resize(self.n_modes, 1.0);
        nu
    }

    /// All symplectic eigenvalues within `tol` of the vacuum value.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.symplectic_eigenvalues().iter().all(|nu| (nu - 1.0).abs() <= tol)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn vacuum_and_squeezed_are_valid() {
        let v = GaussianState::new(1, RVec::zeros(2), RMat::identity(2, 2)).unwrap();
        assert_eq!(v, GaussianState::vacuum(1));
        let sq = GaussianState::new(1, RVec::zeros(2), RMat::from_diagonal(&RVec::from_vec(vec![0.5, 2.0])));
        assert!(sq.is_ok());
    }

    #[test]
    fn sub_vacuum_covariance_is_rejected() {
        let r = GaussianState::new(1, RVec::zeros(2), RMat::identity(2, 2) * 0.5);
        match r {
            Err(Error::UncertaintyViolation { min_eig }) => assert!((min_eig + 0.5).abs() < 1e-12),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn trivial_families_reduce_to_vacuum() {
        let vac = GaussianState::vacuum(1);
        assert_eq!(GaussianState::coherent(Complex64::new(0.0, 0.0)), vac);
        assert_eq!(GaussianState::thermal(0.0).unwrap(), vac);
        assert_eq!(GaussianState::squeezed_vacuum(1.0).unwrap(), vac);
        assert_eq!(GaussianState::tms(0.0).unwrap(), GaussianState::vacuum(2));
        assert!(GaussianState::squeezed_vacuum(1e-13).is_err());
        assert!(GaussianState::thermal(-0.1).is_err());
    }

    #[test]
    fn tms_blocks_and_photon_number() {
        let t = GaussianState::tms(1.0).unwrap();
        assert!((t.cov()[(0, 0)] - 3.0).abs() < 1e-15);
        assert!((t.cov()[(0, 2)] - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((t.cov()[(1, 3)] + 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let t = GaussianState::tms(0.06).unwrap();
        assert!((t.mean_photon(0) - 0.06).abs() < 1e-14);
        assert!(t.is_pure(1e-12));
    }

    #[test]
    fn coherent_photon_number() {
        let s = GaussianState::coherent(Complex64::new(0.3, -1.1));
        assert!((s.mean_photon(0) - (0.09 + 1.21)).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let t = GaussianState::tms(0.5).unwrap().tensor(&GaussianState::coherent(Complex64::new(1.0, 0.5)));
        let back = GaussianState::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
