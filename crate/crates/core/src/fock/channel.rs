//! Kraus and Choi representations of channels on truncated number spaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ops::{op_displacement_rect, BeamsplitterSectors};
use super::states::{coherent_vec, FockDensity};
use crate::bounds::quadrature::gauss_hermite;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

#[derive(Debug, Clone)]
pub struct TruncatedChannel {
    kraus: Vec<CMat>,
    in_dim: usize,
    out_dim: usize,
    /// Buffer/truncation error carried by the Kraus operators themselves.
    pub leakage: f64,
}

impl TruncatedChannel {
    pub fn new(kraus: Vec<CMat>, leakage: f64) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InfeasibleInput("empty Kraus list".into()))?;
        let (out_dim, in_dim) = first.shape();
        if kraus.iter().any(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self { kraus, in_dim, out_dim, leakage })
    }

    pub fn identity(dim: usize) -> Self {
        Self { kraus: vec![CMat::identity(dim, dim)], in_dim: dim, out_dim: dim, leakage: 0.0 }
    }

    pub fn unitary(u: CMat, leakage: f64) -> Self {
        let (out_dim, in_dim) = u.shape();
        Self { kraus: vec![u], in_dim, out_dim, leakage }
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> CMat {
        self.kraus.iter().fold(CMat::zeros(self.in_dim, self.in_dim), |acc, k| acc + k.adjoint() * k)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if first.out_dim != self.in_dim {
            return Err(Error::DimensionMismatch(format!("compose {} -> {}", first.out_dim, self.in_dim)));
        }
        let kraus = self.kraus.iter().flat_map(|a| first.kraus.iter().map(move |b| a * b)).collect();
        Ok(Self { kraus, in_dim: first.in_dim, out_dim: self.out_dim, leakage: self.leakage + first.leakage })
    }

    /// Keep the first `dim` output levels.
    pub fn cut_output(&self, dim: usize) -> Self {
        let kraus = self.kraus.iter().map(|k| k.rows(0, dim.min(k.nrows())).into_owned()).collect();
        Self { kraus, in_dim: self.in_dim, out_dim: dim.min(self.out_dim), leakage: self.leakage }
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Pure-loss Kraus operators `⟨n−k|K_k|n⟩ = √(C(n,k) η^{n−k} (1−η)^k)`; exactly
/// trace preserving on `span{|0⟩..|M⟩}`.
pub fn kraus_pure_loss(eta: f64, m: usize) -> Result<TruncatedChannel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange(format!("eta = {eta}")));
    }
    let d = m + 1;
    if eta == 1.0 {
        return Ok(TruncatedChannel::identity(d));
    }
    let kraus = (0..d)
        .map(|k| {
            let mut op = CMat::zeros(d, d);
            for n in k..d {
                let amp = binomial_f64(n, k) * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32);
                op[(n - k, n)] = c(amp.sqrt(), 0.0);
            }
            op
        })
        .collect();
    TruncatedChannel::new(kraus, 0.0)
}

/// Random displacement along `x`: adds `diag(var_x, 0)` to the covariance, realised as a
/// Gauss–Hermite mixture of displacements with real `α ~ N(0, var_x/4)`.
pub fn kraus_x_noise(var_x: f64, dim_out: usize, dim_in: usize, nodes: usize) -> Result<TruncatedChannel> {
    if var_x < 0.0 {
        return Err(Error::OutOfRange(format!("noise variance {var_x}")));
    }
    if var_x == 0.0 {
        let id = CMat::from_fn(dim_out, dim_in, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        return TruncatedChannel::new(vec![id], 0.0);
    }
    let s = (var_x / 4.0).sqrt();
    let (t, w) = gauss_hermite(nodes);
    let mut leak: f64 = 0.0;
    let kraus = t
        .iter()
        .zip(&w)
        .map(|(&ti, &wi)| {
            let d = op_displacement_rect(c(std::f64::consts::SQRT_2 * s * ti, 0.0), dim_out, dim_in)?;
            leak = leak.max(d.leakage);
            Ok(d.mat * c((wi / std::f64::consts::PI.sqrt()).sqrt(), 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    TruncatedChannel::new(kraus, leak)
}

/// Raw approximate displacement: beamsplitter of transmissivity `η` with an environment
/// mode in the coherent state `β = α/√(1−η)`, environment traced out in the number basis.
pub fn kraus_raw_displacement(
    eta: f64,
    alpha: Complex64,
    dim_in: usize,
    dim_out: usize,
    env_dim: usize,
) -> Result<TruncatedChannel> {
    if !(0.0 < eta && eta < 1.0) {
        return Err(Error::OutOfRange(format!("eta = {eta}")));
    }
    let beta = alpha / (1.0 - eta).sqrt();
    let env = coherent_vec(beta, env_dim);
    let env_leak = 1.0 - env.norm_squared();
    let theta = eta.sqrt().acos();
    let buf = dim_in + env_dim;
    let sectors = BeamsplitterSectors::new(theta, -std::f64::consts::FRAC_PI_2, dim_in + env_dim);
    let mut kraus = vec![CMat::zeros(dim_out, dim_in); buf];
    for n in 0..dim_in {
        let mut v = vec![c(0.0, 0.0); dim_in * env_dim];
        for j in 0..env_dim {
            v[n * env_dim + j] = env[j];
        }
        let out = sectors.apply(&v, dim_in, env_dim, dim_out, buf);
        for (j, k) in kraus.iter_mut().enumerate() {
            for a in 0..dim_out {
                k[(a, n)] = out[a * buf + j];
            }
        }
    }
    TruncatedChannel::new(kraus, env_leak)
}

/// `(I ⊗ N)(|Γ⟩⟨Γ|)` with `|Γ⟩ = Σ|n⟩|n⟩`, index `r·d_out + b` (reference first).
pub fn choi_of(ch: &TruncatedChannel) -> CMat {
    let (di, dout) = (ch.in_dim, ch.out_dim);
    let mut j = CMat::zeros(di * dout, di * dout);
    for k in &ch.kraus {
        let v = nalgebra::DVector::from_fn(di * dout, |idx, _| k[(idx % dout, idx / dout)]);
        j += &v * v.adjoint();
    }
    j
}

/// Apply to one mode of a multi-mode density; reports the trace deficit instead of renormalizing.
pub fn apply_truncated(ch: &TruncatedChannel, rho: &FockDensity, mode: usize) -> Result<(FockDensity, f64)> {
    if mode >= rho.dims().len() || rho.dims()[mode] != ch.in_dim {
        return Err(Error::DimensionMismatch(format!("channel input {} on mode {mode} of {:?}", ch.in_dim, rho.dims())));
    }
    let mut dims = rho.dims().to_vec();
    dims[mode] = ch.out_dim;
    let d: usize = dims.iter().product();
    let mut acc = CMat::zeros(d, d);
    for k in &ch.kraus {
        acc += rho.conjugate_mode(mode, k)?.mat();
    }
    let out = FockDensity::new_unnormalized(dims, acc);
    let deficit = rho.trace() - out.trace();
    Ok((out, deficit))
}

/// Choi matrix interchange format: reference dimension plus row-major real/imag parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ChoiJson {
    pub fn from_matrix(dim: usize, m: &CMat) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| m.row(i).iter().map(f).collect()).collect();
        Self { dim, re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("Choi JSON must be square with matching re/im".into()));
        }
        if self.dim == 0 || n % self.dim != 0 {
            return Err(Error::DimensionMismatch(format!("size {n} not a multiple of reference dim {}", self.dim)));
        }
        Ok(CMat::from_fn(n, n, |i, j| c(self.re[i][j], self.im[i][j])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{op_displacement, FockMixture};
    use crate::linalg::{max_abs_c, ptrace_second};

    #[test]
    fn loss_kraus_complete_and_identity_limit() {
        for &eta in &[0.0, 0.2, 0.5, 0.97] {
            for &m in &[1usize, 6, 30] {
                let ch = kraus_pure_loss(eta, m).unwrap();
                assert!(max_abs_c(&(ch.completeness() - CMat::identity(m + 1, m + 1))) <= 1e-10);
            }
        }
        let id = kraus_pure_loss(1.0, 5).unwrap();
        assert_eq!(id.kraus().len(), 1);
        assert!(max_abs_c(&(&id.kraus()[0] - CMat::identity(6, 6))) == 0.0);
    }

    #[test]
    fn loss_on_single_photon_and_vacuum() {
        let eta = 0.3;
        let ch = kraus_pure_loss(eta, 3).unwrap();
        let one = FockDensity::from_pure(vec![4], &crate::fock::fock_vec(1, 4));
        let (out, deficit) = apply_truncated(&ch, &one, 0).unwrap();
        assert!((out.mat()[(1, 1)].re - eta).abs() < 1e-15);
        assert!((out.mat()[(0, 0)].re - (1.0 - eta)).abs() < 1e-15);
        assert!(deficit.abs() < 1e-15);
        let vac = FockDensity::from_pure(vec![4], &crate::fock::fock_vec(0, 4));
        let (out, _) = apply_truncated(&ch, &vac, 0).unwrap();
        assert!(max_abs_c(&(out.mat() - vac.mat())) < 1e-15);
    }

    #[test]
    fn choi_partial_trace_and_identity() {
        let ch = kraus_pure_loss(0.5, 6).unwrap();
        let j = choi_of(&ch);
        let tr_b = ptrace_second(&j, 7, 7);
        assert!(max_abs_c(&(tr_b - CMat::identity(7, 7))) < 1e-10);
        let g = choi_of(&TruncatedChannel::identity(7));
        let one = choi_of(&kraus_pure_loss(1.0, 6).unwrap());
        assert!(max_abs_c(&(g - one)) == 0.0);
    }

    #[test]
    fn raw_displacement_equals_displaced_loss() {
        let (eta, alpha) = (0.7, c(1.0, 0.5));
        let (din, dout) = (7, 40);
        let raw = kraus_raw_displacement(eta, alpha, din, dout, 60).unwrap();
        let loss = kraus_pure_loss(eta, din - 1).unwrap();
        let d = op_displacement_rect(alpha, dout, din).unwrap();
        let composed = TruncatedChannel::unitary(d.mat, d.leakage).after(&loss).unwrap();
        let diff = max_abs_c(&(choi_of(&raw) - choi_of(&composed)));
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn loss_on_coherent_state() {
        let eta: f64 = 0.8;
        let v = crate::fock::coherent_vec(c(1.0, 0.0), 31);
        let rho = FockMixture::pure(vec![31], &v).unwrap().to_density();
        let (out, _) = apply_truncated(&kraus_pure_loss(eta, 30).unwrap(), &rho, 0).unwrap();
        let w = crate::fock::coherent_vec(c(eta.sqrt(), 0.0), 31);
        let f = (w.adjoint() * out.mat() * &w)[(0, 0)].re;
        assert!(f >= 1.0 - 1e-8);
        let _ = op_displacement(c(0.0, 0.0), 3).unwrap();
    }
}
