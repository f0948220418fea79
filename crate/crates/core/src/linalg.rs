//! Dense real/complex helpers shared by the Gaussian, Fock and SDP layers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const PSD_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Symplectic form for `n` modes with interleaved ordering.
pub fn omega(n: usize) -> RMat {
    let mut m = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

pub fn symmetrize(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

pub fn eigh_real(m: &RMat) -> (RVec, RMat) {
    let e = SymmetricEigen::new(symmetrize(m));
    (e.eigenvalues, e.eigenvectors)
}

/// Hermitian eigen-decomposition after explicit symmetrization.
pub fn eigh(m: &CMat) -> (RVec, CMat) {
    let e = SymmetricEigen::new(hermitize(m));
    (e.eigenvalues, e.eigenvectors)
}

pub fn eigvalsh(m: &CMat) -> RVec {
    hermitize(m).symmetric_eigenvalues()
}

pub fn min_eig_real(m: &RMat) -> f64 {
    symmetrize(m).symmetric_eigenvalues().min()
}

pub fn min_eigh(m: &CMat) -> f64 {
    eigvalsh(m).min()
}

/// Smallest eigenvalue of `A + iΩ`-type Hermitian matrices built from real parts.
pub fn min_eig_plus_i(re: &RMat, im: &RMat) -> f64 {
    let n = re.nrows();
    let m = CMat::from_fn(n, n, |i, j| c(re[(i, j)], im[(i, j)]));
    min_eigh(&m)
}

pub fn trace_norm_herm(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Matrix function of a Hermitian matrix through its spectrum.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (w, v) = eigh(m);
    let fw = CVec::from_iterator(w.len(), w.iter().map(|&x| c(f(x), 0.0)));
    scale_cols(&v, &fw) * v.adjoint()
}

pub fn sqrtm_psd(m: &CMat) -> CMat {
    herm_fn(m, |x| x.max(0.0).sqrt())
}

pub fn scale_cols(v: &CMat, s: &CVec) -> CMat {
    let mut out = v.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= s[j];
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_real(a: &RMat, b: &RMat) -> RMat {
    a.kronecker(b)
}

/// Block-diagonal direct sum of real matrices.
pub fn direct_sum(a: &RMat, b: &RMat) -> RMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = RMat::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Partial trace over the second factor of a `da*db` square matrix, index `a*db + b`.
pub fn ptrace_second(m: &CMat, da: usize, db: usize) -> CMat {
    let mut out = CMat::zeros(da, da);
    for a in 0..da {
        for b in 0..da {
            let mut s = c(0.0, 0.0);
            for k in 0..db {
                s += m[(a * db + k, b * db + k)];
            }
            out[(a, b)] = s;
        }
    }
    out
}

/// Partial trace over the first factor.
pub fn ptrace_first(m: &CMat, da: usize, db: usize) -> CMat {
    let mut out = CMat::zeros(db, db);
    for a in 0..da {
        for i in 0..db {
            for j in 0..db {
                out[(i, j)] += m[(a * db + i, a * db + j)];
            }
        }
    }
    out
}

pub fn inv_real(m: &RMat, what: &str) -> Result<RMat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalBreakdown(format!("singular {what}")))
}

pub fn trace_c(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}
