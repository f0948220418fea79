//! Number-basis states: dense density matrices and low-rank factored mixtures.
//!
//! Multi-mode index order is row-major over `dims` (mode 0 most significant).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, hermitize, max_abs_c, trace_c, CMat, CVec};

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Apply a single-mode operator `k` (`out × in`) to `mode` of every column of `cols`.
pub fn apply_mode_op(cols: &CMat, dims: &[usize], mode: usize, k: &CMat) -> Result<(CMat, Vec<usize>)> {
    if mode >= dims.len() || k.ncols() != dims[mode] || cols.nrows() != total_dim(dims) {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} on mode {mode} of dims {dims:?}",
            k.nrows(),
            k.ncols()
        )));
    }
    let pre: usize = dims[..mode].iter().product();
    let post: usize = dims[mode + 1..].iter().product();
    let (din, dout) = (dims[mode], k.nrows());
    let mut new_dims = dims.to_vec();
    new_dims[mode] = dout;
    let mut out = CMat::zeros(pre * dout * post, cols.ncols());
    for col in 0..cols.ncols() {
        for p in 0..pre {
            // block (din × post) → (dout × post)
            let blk = CMat::from_fn(din, post, |b, q| cols[((p * din + b) * post + q, col)]);
            let res = k * blk;
            for a in 0..dout {
                for q in 0..post {
                    out[((p * dout + a) * post + q, col)] = res[(a, q)];
                }
            }
        }
    }
    Ok((out, new_dims))
}

pub fn fock_vec(n: usize, dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[n] = c(1.0, 0.0);
    v
}

/// Coherent-state amplitudes `e^{−|α|²/2} αⁿ/√n!` for `n < dim` (not renormalized).
pub fn coherent_vec(alpha: Complex64, dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    let mut amp = c((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            amp *= alpha / (n as f64).sqrt();
        }
        v[n] = amp;
    }
    v
}

/// Thermal populations `n̄ⁿ/(n̄+1)^{n+1}` for `n < dim` (not renormalized).
pub fn thermal_populations(nbar: f64, dim: usize) -> Vec<f64> {
    let q = nbar / (nbar + 1.0);
    (0..dim).map(|n| q.powi(n as i32) / (nbar + 1.0)).collect()
}

/// Two-mode squeezed vacuum `Σ √(Nⁿ/(N+1)^{n+1}) |n n⟩` with both modes truncated at `M`.
pub fn tms_vec(n_mean: f64, m: usize) -> CVec {
    let d = m + 1;
    let p = thermal_populations(n_mean, d);
    let mut v = CVec::zeros(d * d);
    for n in 0..d {
        v[n * d + n] = c(p[n].sqrt(), 0.0);
    }
    v
}

/// Hermitian, PSD, unit-trace matrix on a truncated multi-mode number basis.
#[derive(Debug, Clone)]
pub struct FockDensity {
    dims: Vec<usize>,
    mat: CMat,
}

impl FockDensity {
    pub fn new(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let d = total_dim(&dims);
        if mat.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("dims {dims:?} vs matrix {:?}", mat.shape())));
        }
        if max_abs_c(&(&mat - mat.adjoint())) > 1e-10 {
            return Err(Error::InfeasibleInput("density matrix not Hermitian".into()));
        }
        let mat = hermitize(&mat);
        let min = crate::linalg::min_eigh(&mat);
        if min < -1e-9 {
            return Err(Error::InfeasibleInput(format!("density matrix min eigenvalue {min:.3e}")));
        }
        let tr = trace_c(&mat).re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InfeasibleInput(format!("density matrix trace {tr}")));
        }
        Ok(Self { dims, mat })
    }

    /// Build without the unit-trace requirement (e.g. channel outputs with leakage).
    pub fn new_unnormalized(dims: Vec<usize>, mat: CMat) -> Self {
        Self { dims, mat: hermitize(&mat) }
    }

    pub fn from_pure(dims: Vec<usize>, v: &CVec) -> Self {
        Self::new_unnormalized(dims, v * v.adjoint())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        trace_c(&self.mat).re
    }

    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self { dims: self.dims.clone(), mat: &self.mat / c(t, 0.0) }
    }

    /// Apply a single-mode operator on both sides: `(K ⊗ I) ρ (K ⊗ I)†`.
    pub fn conjugate_mode(&self, mode: usize, k: &CMat) -> Result<Self> {
        let (left, dims) = apply_mode_op(&self.mat, &self.dims, mode, k)?;
        let (both, dims2) = apply_mode_op(&left.adjoint(), &self.dims, mode, k)?;
        debug_assert_eq!(dims, dims2);
        Ok(Self::new_unnormalized(dims, both.adjoint()))
    }

    /// `Tr(O_mode ρ)` for a single-mode operator.
    pub fn expect_mode(&self, mode: usize, o: &CMat) -> Result<Complex64> {
        let (om, _) = apply_mode_op(&self.mat, &self.dims, mode, o)?;
        Ok(trace_c(&om))
    }

    pub fn mean_photon(&self, mode: usize) -> Result<f64> {
        let d = self.dims[mode];
        Ok(self.expect_mode(mode, &crate::fock::op_number(d - 1))?.re)
    }

    /// Low-rank factor `A` with `ρ = AA†`, dropping eigenvalues below `rel_tol · λ_max`.
    pub fn factor(&self, rel_tol: f64) -> FockMixture {
        let (w, v) = eigh(&self.mat);
        let wmax = w.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i] > rel_tol * wmax).collect();
        let mut a = CMat::zeros(self.mat.nrows(), keep.len());
        for (j, &i) in keep.iter().enumerate() {
            a.set_column(j, &(v.column(i) * c(w[i].sqrt(), 0.0)));
        }
        FockMixture { dims: self.dims.clone(), a }
    }

    /// Partial trace keeping the listed modes (in increasing order).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        if keep.is_empty() || keep.iter().any(|&k| k >= n) || keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DimensionMismatch(format!("keep {keep:?} of {n} modes")));
        }
        let kd: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let traced: Vec<usize> = (0..n).filter(|m| !keep.contains(m)).collect();
        let td: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let (dk, dt) = (total_dim(&kd), total_dim(&td));
        let index = |kidx: usize, tidx: usize| -> usize {
            let mut digits = vec![0usize; n];
            let mut r = kidx;
            for (i, &m) in keep.iter().enumerate().rev() {
                digits[m] = r % kd[i];
                r /= kd[i];
            }
            let mut r = tidx;
            for (i, &m) in traced.iter().enumerate().rev() {
                digits[m] = r % td[i];
                r /= td[i];
            }
            digits.iter().zip(&self.dims).fold(0, |acc, (&dg, &dm)| acc * dm + dg)
        };
        let mut out = CMat::zeros(dk, dk);
        for t in 0..dt {
            for i in 0..dk {
                let ii = index(i, t);
                for j in 0..dk {
                    out[(i, j)] += self.mat[(ii, index(j, t))];
                }
            }
        }
        Ok(Self::new_unnormalized(kd, out))
    }

    /// Project every mode onto `span{|0⟩..|M⟩}`; returns the renormalized state and `Tr(Πρ)`.
    pub fn project_truncate(&self, m: usize) -> Result<(Self, f64)> {
        let modes: Vec<usize> = (0..self.dims.len()).collect();
        self.project_truncate_modes(m, &modes)
    }

    pub fn project_truncate_modes(&self, m: usize, modes: &[usize]) -> Result<(Self, f64)> {
        let mut cur = self.clone();
        for &mode in modes {
            let d = cur.dims[mode];
            if m + 1 > d {
                return Err(Error::DimensionMismatch(format!("cannot truncate dim {d} to M={m}")));
            }
            let proj = CMat::from_fn(m + 1, d, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
            cur = cur.conjugate_mode(mode, &proj)?;
        }
        let p = cur.trace();
        if p <= 0.0 {
            return Err(Error::NumericalBreakdown("projection has zero weight".into()));
        }
        Ok((cur.normalized(), p))
    }

    /// Embed into larger per-mode dimensions by zero padding.
    pub fn pad(&self, new_dims: &[usize]) -> Result<Self> {
        let mut cur = self.clone();
        for (mode, &nd) in new_dims.iter().enumerate() {
            let d = cur.dims[mode];
            if nd < d {
                return Err(Error::DimensionMismatch("pad cannot shrink".into()));
            }
            let inj = CMat::from_fn(nd, d, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
            cur = cur.conjugate_mode(mode, &inj)?;
        }
        Ok(cur)
    }
}

/// `ρ = AA†` with columns of `A` as weighted pure components.
#[derive(Debug, Clone)]
pub struct FockMixture {
    dims: Vec<usize>,
    a: CMat,
}

impl FockMixture {
    pub fn new(dims: Vec<usize>, a: CMat) -> Result<Self> {
        if a.nrows() != total_dim(&dims) {
            return Err(Error::DimensionMismatch(format!("dims {dims:?} vs {} rows", a.nrows())));
        }
        Ok(Self { dims, a })
    }

    pub fn pure(dims: Vec<usize>, v: &CVec) -> Result<Self> {
        Self::new(dims, CMat::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factor(&self) -> &CMat {
        &self.a
    }

    pub fn trace(&self) -> f64 {
        self.a.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let s = self.trace().sqrt();
        Self { dims: self.dims.clone(), a: &self.a / c(s, 0.0) }
    }

    pub fn to_density(&self) -> FockDensity {
        FockDensity::new_unnormalized(self.dims.clone(), &self.a * self.a.adjoint())
    }

    pub fn apply_mode(&self, mode: usize, k: &CMat) -> Result<Self> {
        let (a, dims) = apply_mode_op(&self.a, &self.dims, mode, k)?;
        Ok(Self { dims, a })
    }

    /// Tensor product, `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let (d1, d2) = (self.a.nrows(), other.a.nrows());
        let (r1, r2) = (self.a.ncols(), other.a.ncols());
        let mut a = CMat::zeros(d1 * d2, r1 * r2);
        for i in 0..r1 {
            for j in 0..r2 {
                for x in 0..d1 {
                    let ax = self.a[(x, i)];
                    if ax == c(0.0, 0.0) {
                        continue;
                    }
                    for y in 0..d2 {
                        a[(x * d2 + y, i * r2 + j)] = ax * other.a[(y, j)];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, a }
    }

    /// Mix with weights: columns of each component scaled by `√w`.
    pub fn mix(parts: &[(f64, Self)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InfeasibleInput("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let rows = first.1.a.nrows();
        let ncols: usize = parts.iter().map(|p| p.1.a.ncols()).sum();
        let mut a = CMat::zeros(rows, ncols);
        let mut off = 0;
        for (w, p) in parts {
            if p.dims != dims {
                return Err(Error::DimensionMismatch("mixture components differ in dims".into()));
            }
            let k = p.a.ncols();
            a.view_mut((0, off), (rows, k)).copy_from(&(&p.a * c(w.sqrt(), 0.0)));
            off += k;
        }
        Ok(Self { dims, a })
    }

    /// Project every mode to `M` photons; returns the renormalized mixture and `Tr(Πρ)`.
    pub fn project_truncate(&self, m: usize) -> Result<(Self, f64)> {
        let mut cur = self.clone();
        for mode in 0..self.dims.len() {
            let d = cur.dims[mode];
            if m + 1 > d {
                return Err(Error::DimensionMismatch(format!("cannot truncate dim {d} to M={m}")));
            }
            let proj = CMat::from_fn(m + 1, d, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
            cur = cur.apply_mode(mode, &proj)?;
        }
        let p = cur.trace();
        Ok((cur.normalized(), p))
    }

    /// Drop columns with negligible weight.
    pub fn compress(&self, tol: f64) -> Self {
        let keep: Vec<usize> = (0..self.a.ncols()).filter(|&j| self.a.column(j).norm_squared() > tol).collect();
        let a = CMat::from_fn(self.a.nrows(), keep.len(), |i, j| self.a[(i, keep[j])]);
        Self { dims: self.dims.clone(), a }
    }

    pub fn expect_mode(&self, mode: usize, o: &CMat) -> Result<Complex64> {
        let (oa, _) = apply_mode_op(&self.a, &self.dims, mode, o)?;
        Ok(self.a.iter().zip(oa.iter()).map(|(x, y)| x.conj() * y).sum())
    }

    /// `⟨O₁ O₂⟩` with `O₂` on `mode2` applied first.
    pub fn expect_pair(&self, mode1: usize, o1: &CMat, mode2: usize, o2: &CMat) -> Result<Complex64> {
        let (t, _) = apply_mode_op(&self.a, &self.dims, mode2, o2)?;
        let (t, _) = apply_mode_op(&t, &self.dims, mode1, o1)?;
        Ok(self.a.iter().zip(t.iter()).map(|(x, y)| x.conj() * y).sum())
    }

    /// Quadrature means and covariance (vacuum covariance `I`) extracted from the truncated state.
    pub fn moments(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let nm = self.dims.len();
        let quads: Vec<(CMat, CMat)> = self.dims.iter().map(|&d| crate::fock::op_quadratures(d - 1)).collect();
        let op = |i: usize| -> (usize, &CMat) {
            let m = i / 2;
            (m, if i % 2 == 0 { &quads[m].0 } else { &quads[m].1 })
        };
        let t = self.trace();
        let mean: Vec<f64> = (0..2 * nm)
            .map(|i| {
                let (m, o) = op(i);
                self.expect_mode(m, o).map(|z| z.re / t)
            })
            .collect::<Result<_>>()?;
        let mut cov = vec![vec![0.0; 2 * nm]; 2 * nm];
        for i in 0..2 * nm {
            for j in i..2 * nm {
                let (mi, oi) = op(i);
                let (mj, oj) = op(j);
                let v = if mi == mj {
                    let prod = oi * oj + oj * oi;
                    self.expect_mode(mi, &prod)?.re / t
                } else {
                    2.0 * self.expect_pair(mi, oi, mj, oj)?.re / t
                };
                cov[i][j] = v - 2.0 * mean[i] * mean[j];
                cov[j][i] = cov[i][j];
            }
        }
        Ok((mean, cov))
    }
}
