//! Truncated ladder operators and Gaussian unitaries in the number basis.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, max_abs_c, scale_cols, CMat, CVec};

/// Operator restricted to `span{|0⟩..|M⟩}` with the buffer-truncation error of the block.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub mat: CMat,
    pub leakage: f64,
}

const LEAK_TOL: f64 = 1e-6;
const MAX_BUFFER_DIM: usize = 1600;

pub fn op_number(m: usize) -> CMat {
    CMat::from_fn(m + 1, m + 1, |i, j| if i == j { c(i as f64, 0.0) } else { c(0.0, 0.0) })
}

/// `⟨n−1|a|n⟩ = √n`.
pub fn op_annihilation(m: usize) -> CMat {
    CMat::from_fn(m + 1, m + 1, |i, j| if j == i + 1 { c((j as f64).sqrt(), 0.0) } else { c(0.0, 0.0) })
}

pub fn op_creation(m: usize) -> CMat {
    op_annihilation(m).adjoint()
}

/// `x = (a + a†)/√2` and `p = (a − a†)/(i√2)` on the truncated space.
pub fn op_quadratures(m: usize) -> (CMat, CMat) {
    let a = op_annihilation(m);
    let ad = a.adjoint();
    let x = (&a + &ad) * c(FRAC_1_SQRT_2, 0.0);
    let p = (&a - &ad) * c(0.0, -FRAC_1_SQRT_2);
    (x, p)
}

pub fn op_phase(phi: f64, m: usize) -> CMat {
    CMat::from_fn(m + 1, m + 1, |i, j| if i == j { Complex64::from_polar(1.0, phi * i as f64) } else { c(0.0, 0.0) })
}

/// `exp(iH)` for Hermitian `H`.
pub fn expi_herm(h: &CMat) -> CMat {
    let (w, v) = eigh(h);
    let ph = CVec::from_iterator(w.len(), w.iter().map(|&x| Complex64::from_polar(1.0, x)));
    scale_cols(&v, &ph) * v.adjoint()
}

/// Exponentiate the generator built by `gen(dim)` in a buffered dimension, growing the
/// buffer until the leading `(out_dim × in_dim)` block stops changing.
pub fn buffered_exp(
    gen: impl Fn(usize) -> CMat,
    out_dim: usize,
    in_dim: usize,
    k0: usize,
) -> Result<FockOperator> {
    let base = out_dim.max(in_dim);
    let block = |k: usize| -> CMat { expi_herm(&gen(base + k)).view((0, 0), (out_dim, in_dim)).into_owned() };
    let mut k = k0;
    let mut prev = block(k);
    loop {
        let next_k = k + (k / 2).max(10);
        if base + next_k > MAX_BUFFER_DIM {
            return Err(Error::TruncationTooSmall(format!(
                "buffer would exceed {MAX_BUFFER_DIM} before the {out_dim}x{in_dim} block converged"
            )));
        }
        let next = block(next_k);
        let leak = max_abs_c(&(&next - &prev));
        if leak < 1e-12 {
            return Ok(FockOperator { mat: next, leakage: leak });
        }
        if leak < LEAK_TOL && next_k > 4 * k0 {
            return Ok(FockOperator { mat: next, leakage: leak });
        }
        k = next_k;
        prev = next;
    }
}

fn buffer_rule(p: f64) -> usize {
    2 * (p * p).ceil() as usize + 10
}

/// Hermitian generator of `D(α) = exp(α a† − α* a) = exp(iH)`.
fn displacement_generator(alpha: Complex64, dim: usize) -> CMat {
    let a = op_annihilation(dim - 1);
    let ad = a.adjoint();
    (ad * alpha - a * alpha.conj()) * c(0.0, -1.0)
}

/// Displacement `D(α)` from `dim_in` to `dim_out` number states.
pub fn op_displacement_rect(alpha: Complex64, dim_out: usize, dim_in: usize) -> Result<FockOperator> {
    if alpha.norm() == 0.0 {
        let mat = CMat::from_fn(dim_out, dim_in, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        return Ok(FockOperator { mat, leakage: 0.0 });
    }
    buffered_exp(|d| displacement_generator(alpha, d), dim_out, dim_in, buffer_rule(alpha.norm()))
}

pub fn op_displacement(alpha: Complex64, m: usize) -> Result<FockOperator> {
    op_displacement_rect(alpha, m + 1, m + 1)
}

/// Squeezer `exp[(r/2)(a² − a†²)]`, so that `x → e^{−r} x`.
pub fn op_squeeze_rect(r: f64, dim_out: usize, dim_in: usize) -> Result<FockOperator> {
    if r == 0.0 {
        let mat = CMat::from_fn(dim_out, dim_in, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        return Ok(FockOperator { mat, leakage: 0.0 });
    }
    let gen = |d: usize| {
        let a = op_annihilation(d - 1);
        let a2 = &a * &a;
        (&a2 - a2.adjoint()) * c(0.0, -0.5 * r)
    };
    buffered_exp(gen, dim_out, dim_in, buffer_rule(r))
}

pub fn op_squeeze(r: f64, m: usize) -> Result<FockOperator> {
    op_squeeze_rect(r, m + 1, m + 1)
}

/// Beamsplitter `exp[iθ(e^{iφ}a†b + e^{−iφ}ab†)]` on the total-photon sector `n`,
/// basis `|k, n−k⟩` ordered by the photon number `k` of the first mode.
pub fn bs_sector(theta: f64, phi: f64, n: usize) -> CMat {
    let mut g = CMat::zeros(n + 1, n + 1);
    for k in 0..n {
        let amp = ((k + 1) as f64 * (n - k) as f64).sqrt();
        g[(k + 1, k)] = Complex64::from_polar(amp, phi);
        g[(k, k + 1)] = Complex64::from_polar(amp, -phi);
    }
    expi_herm(&(g * c(theta, 0.0)))
}

/// Per-sector beamsplitter blocks for total photon numbers `0..=n_max`.
pub struct BeamsplitterSectors {
    blocks: Vec<CMat>,
}

impl BeamsplitterSectors {
    pub fn new(theta: f64, phi: f64, n_max: usize) -> Self {
        Self { blocks: (0..=n_max).map(|n| bs_sector(theta, phi, n)).collect() }
    }

    /// Apply to a two-mode vector with dims `(da, db)`, index `i·db + j`, writing into
    /// dims `(oa, ob)`. Amplitude leaving the output box is dropped.
    pub fn apply(&self, v: &[Complex64], da: usize, db: usize, oa: usize, ob: usize) -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); oa * ob];
        let n_max = (da - 1) + (db - 1);
        for n in 0..=n_max {
            let blk = &self.blocks[n];
            let k_lo = n.saturating_sub(db - 1);
            let k_hi = n.min(da - 1);
            let ko_lo = n.saturating_sub(ob - 1);
            let ko_hi = n.min(oa - 1);
            if ko_lo > ko_hi {
                continue;
            }
            for ko in ko_lo..=ko_hi {
                let mut s = c(0.0, 0.0);
                for k in k_lo..=k_hi {
                    s += blk[(ko, k)] * v[k * db + (n - k)];
                }
                out[ko * ob + (n - ko)] = s;
            }
        }
        out
    }
}

/// Dense beamsplitter on two modes truncated at `M` each (dimension `(M+1)²`).
pub fn op_bs(theta: f64, phi: f64, m: usize) -> FockOperator {
    let d = m + 1;
    let sec = BeamsplitterSectors::new(theta, phi, 2 * m);
    let mut mat = CMat::zeros(d * d, d * d);
    for col in 0..d * d {
        let mut e = vec![c(0.0, 0.0); d * d];
        e[col] = c(1.0, 0.0);
        let out = sec.apply(&e, d, d, d, d);
        for (row, z) in out.into_iter().enumerate() {
            mat[(row, col)] = z;
        }
    }
    // sectors with n ≤ M sit entirely inside the box and are exactly unitary
    FockOperator { mat, leakage: 0.0 }
}

/// `⟨m|D(α)|n⟩` from the associated-Laguerre closed form.
pub fn displacement_element(alpha: Complex64, m: usize, n: usize) -> Complex64 {
    let x = alpha.norm_sqr();
    let (hi, lo, z) = if m >= n { (m, n, alpha) } else { (n, m, -alpha.conj()) };
    let k = hi - lo;
    // L_lo^{(k)}(x) by upward recurrence
    let lag = {
        let (mut l0, mut l1) = (1.0, 1.0 + k as f64 - x);
        if lo == 0 {
            1.0
        } else {
            for j in 1..lo {
                let jf = j as f64;
                let l2 = ((2.0 * jf + 1.0 + k as f64 - x) * l1 - (jf + k as f64) * l0) / (jf + 1.0);
                l0 = l1;
                l1 = l2;
            }
            l1
        }
    };
    let mut log_ratio = 0.0;
    for j in (lo + 1)..=hi {
        log_ratio -= 0.5 * (j as f64).ln();
    }
    z.powu(k as u32) * (log_ratio - x / 2.0).exp() * lag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_elements() {
        let a = op_annihilation(5);
        assert_eq!(a[(2, 3)], c(3f64.sqrt(), 0.0));
        assert_eq!(a[(3, 2)], c(0.0, 0.0));
        let n = op_number(5);
        assert!(max_abs_c(&(op_creation(5) * op_annihilation(5) - n)) < 1e-14);
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = op_displacement(c(0.0, 0.0), 8).unwrap();
        assert!(max_abs_c(&(d.mat - CMat::identity(9, 9))) == 0.0);
    }

    #[test]
    fn vacuum_overlap_of_displacement() {
        let d = op_displacement(c(1.0, 0.0), 40).unwrap();
        assert!((d.mat[(0, 0)].norm_sqr() - (-1.0f64).exp()).abs() < 1e-8);
        assert!(d.leakage < 1e-10);
    }

    #[test]
    fn displacement_matches_laguerre() {
        let alpha = c(0.7, -0.4);
        let d = op_displacement(alpha, 20).unwrap();
        for m in 0..=20 {
            for n in 0..=20 {
                let e = displacement_element(alpha, m, n);
                assert!((d.mat[(m, n)] - e).norm() < 1e-10, "({m},{n})");
            }
        }
    }

    #[test]
    fn full_reflection_swaps_single_photons() {
        let u = op_bs(std::f64::consts::FRAC_PI_2, 0.0, 2).mat;
        let d = 3;
        let (i10, i01) = (d, 1);
        assert!((u[(i01, i10)].norm() - 1.0).abs() < 1e-12);
        assert!((u[(i10, i01)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beamsplitter_unitary_on_low_sectors() {
        let u = op_bs(0.6, 0.4, 4).mat;
        let uu = u.adjoint() * &u;
        // |k, n−k⟩ with n ≤ 4 are closed under the beamsplitter
        for i in 0..5 {
            for j in 0..5 {
                if i + j <= 4 {
                    let idx = i * 5 + j;
                    assert!((uu[(idx, idx)] - c(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
