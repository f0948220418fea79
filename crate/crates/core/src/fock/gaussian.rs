//! Number-basis images of displaced, rotated, squeezed thermal states and
//! beamsplitter mixes of two of them.

use num_complex::Complex64;

use super::ops::{op_displacement_rect, op_phase, op_squeeze_rect, BeamsplitterSectors};
use super::states::{fock_vec, thermal_populations, FockMixture};
use crate::error::{Error, Result};
use crate::gaussian::{symplectic_bs, symplectic_phase, symplectic_squeeze, GaussianChannel, GaussianState};
use crate::linalg::{c, CMat, RVec};

/// `D(α) R(φ) S(r) τ(n̄) S(r)† R(φ)† D(α)†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRecipe {
    pub nbar: f64,
    pub r: f64,
    pub phi: f64,
    pub alpha: Complex64,
}

impl ModeRecipe {
    pub fn gaussian(&self) -> Result<GaussianState> {
        let st = GaussianState::thermal(self.nbar)?;
        let st = symplectic_squeeze(self.r).apply(&st)?;
        let st = symplectic_phase(self.phi).apply(&st)?;
        let d = RVec::from_vec(vec![2f64.sqrt() * self.alpha.re, 2f64.sqrt() * self.alpha.im]);
        GaussianChannel::displacement(d).apply(&st)
    }

    /// Mixture truncated at `M`; thermal components below `drop_tol` are discarded.
    pub fn fock(&self, m: usize, drop_tol: f64) -> Result<FockMixture> {
        let d = m + 1;
        let pops = thermal_populations(self.nbar, d);
        let keep: Vec<usize> = (0..d).filter(|&n| n == 0 || pops[n] > drop_tol).collect();
        let mut a = CMat::zeros(d, keep.len());
        for (j, &n) in keep.iter().enumerate() {
            a.set_column(j, &(fock_vec(n, d) * c(pops[n].sqrt(), 0.0)));
        }
        let mix = FockMixture::new(vec![d], a)?;
        let s = op_squeeze_rect(self.r, d, d)?.mat;
        let k = op_displacement_rect(self.alpha, d, d)?.mat * op_phase(self.phi, m) * s;
        mix.apply_mode(0, &k)
    }
}

/// Two modes prepared independently and then mixed on a beamsplitter `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeRecipe {
    pub a: ModeRecipe,
    pub b: ModeRecipe,
    pub theta: f64,
    pub phi: f64,
}

impl TwoModeRecipe {
    pub fn gaussian(&self) -> Result<GaussianState> {
        symplectic_bs(self.theta, self.phi).apply(&self.a.gaussian()?.tensor(&self.b.gaussian()?))
    }

    pub fn fock(&self, m: usize, drop_tol: f64) -> Result<FockMixture> {
        let prod = self.a.fock(m, drop_tol)?.tensor(&self.b.fock(m, drop_tol)?);
        apply_bs(&prod, self.theta, self.phi)
    }
}

/// Beamsplitter on a two-mode mixture; amplitude leaving the box is dropped.
pub fn apply_bs(mix: &FockMixture, theta: f64, phi: f64) -> Result<FockMixture> {
    let dims = mix.dims();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch(format!("beamsplitter needs two modes, got {}", dims.len())));
    }
    let (da, db) = (dims[0], dims[1]);
    let sec = BeamsplitterSectors::new(theta, phi, da + db - 2);
    let f = mix.factor();
    let mut out = CMat::zeros(f.nrows(), f.ncols());
    for j in 0..f.ncols() {
        let col: Vec<Complex64> = f.column(j).iter().copied().collect();
        let v = sec.apply(&col, da, db, da, db);
        for (i, z) in v.into_iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    FockMixture::new(dims.to_vec(), out)
}
