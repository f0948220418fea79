use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::state::{mat_to_rows, rows_to_mat, GaussianState};
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, max_abs, min_eig_plus_i, omega, symmetrize, RMat, RVec, PSD_TOL};

/// Gaussian channel `μ → Xμ + d`, `V → XVXᵀ + Y` from `n_in` to `n_out` modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct GaussianChannel {
    n_in: usize,
    n_out: usize,
    x: RMat,
    y: RMat,
    d: RVec,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    n_in: usize,
    n_out: usize,
    #[serde(rename = "X")]
    x: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl TryFrom<ChannelRepr> for GaussianChannel {
    type Error = Error;
    fn try_from(r: ChannelRepr) -> Result<Self> {
        GaussianChannel::new(r.n_in, r.n_out, rows_to_mat(&r.x)?, rows_to_mat(&r.y)?, DVector::from_vec(r.d))
    }
}

impl From<GaussianChannel> for ChannelRepr {
    fn from(c: GaussianChannel) -> Self {
        ChannelRepr {
            n_in: c.n_in,
            n_out: c.n_out,
            x: mat_to_rows(&c.x),
            y: mat_to_rows(&c.y),
            d: c.d.iter().copied().collect(),
        }
    }
}

impl GaussianChannel {
    pub fn new(n_in: usize, n_out: usize, x: RMat, y: RMat, d: RVec) -> Result<Self> {
        let (di, dout) = (2 * n_in, 2 * n_out);
        if n_in == 0 || n_out == 0 || x.shape() != (dout, di) || y.shape() != (dout, dout) || d.len() != dout {
            return Err(Error::DimensionMismatch(format!(
                "channel {n_in}->{n_out} needs X {dout}x{di}, Y {dout}x{dout}, d {dout}"
            )));
        }
        if max_abs(&(&y - y.transpose())) > 1e-10 {
            return Err(Error::NumericalBreakdown("Y not symmetric".into()));
        }
        let ch = Self { n_in, n_out, x, y: symmetrize(&y), d };
        let min_eig = ch.cptp_min_eig();
        if min_eig < -PSD_TOL {
            return Err(Error::NotCompletelyPositive { min_eig });
        }
        Ok(ch)
    }

    pub(crate) fn new_unchecked(n_in: usize, n_out: usize, x: RMat, y: RMat, d: RVec) -> Self {
        Self { n_in, n_out, x, y: symmetrize(&y), d }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked(n, n, RMat::identity(2 * n, 2 * n), RMat::zeros(2 * n, 2 * n), RVec::zeros(2 * n))
    }

    /// Gaussian unitary with symplectic matrix `s`.
    pub fn unitary(s: RMat) -> Self {
        let n = s.nrows() / 2;
        Self::new_unchecked(n, n, s, RMat::zeros(2 * n, 2 * n), RVec::zeros(2 * n))
    }

    pub fn displacement(d: RVec) -> Self {
        let n = d.len() / 2;
        Self::new_unchecked(n, n, RMat::identity(2 * n, 2 * n), RMat::zeros(2 * n, 2 * n), d)
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }
    pub fn n_out(&self) -> usize {
        self.n_out
    }
    pub fn x(&self) -> &RMat {
        &self.x
    }
    pub fn y(&self) -> &RMat {
        &self.y
    }
    pub fn d(&self) -> &RVec {
        &self.d
    }

    /// Smallest eigenvalue of `Y + iΩ − iXΩXᵀ`.
    pub fn cptp_min_eig(&self) -> f64 {
        let im = omega(self.n_out) - &self.x * omega(self.n_in) * self.x.transpose();
        min_eig_plus_i(&self.y, &im)
    }

    pub fn apply(&self, st: &GaussianState) -> Result<GaussianState> {
        if st.n_modes() != self.n_in {
            return Err(Error::DimensionMismatch(format!("channel input {} vs state {}", self.n_in, st.n_modes())));
        }
        let mean = &self.x * st.mean() + &self.d;
        let cov = &self.x * st.cov() * self.x.transpose() + &self.y;
        Ok(GaussianState::new_unchecked(self.n_out, mean, cov))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        compose(self, first)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut d = RVec::zeros(self.d.len() + other.d.len());
        d.rows_mut(0, self.d.len()).copy_from(&self.d);
        d.rows_mut(self.d.len(), other.d.len()).copy_from(&other.d);
        Self::new_unchecked(
            self.n_in + other.n_in,
            self.n_out + other.n_out,
            direct_sum(&self.x, &other.x),
            direct_sum(&self.y, &other.y),
            d,
        )
    }

    /// Lift a mode-preserving channel to act on `modes` of an `n_total`-mode system.
    pub fn embed(&self, n_total: usize, modes: &[usize]) -> Result<Self> {
        if self.n_in != self.n_out || modes.len() != self.n_in || modes.iter().any(|&m| m >= n_total) {
            return Err(Error::DimensionMismatch(format!("cannot embed on modes {modes:?} of {n_total}")));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mut x = RMat::identity(2 * n_total, 2 * n_total);
        let mut y = RMat::zeros(2 * n_total, 2 * n_total);
        let mut d = RVec::zeros(2 * n_total);
        for &i in &idx {
            x[(i, i)] = 0.0;
        }
        for (a, &i) in idx.iter().enumerate() {
            d[i] = self.d[a];
            for (b, &j) in idx.iter().enumerate() {
                x[(i, j)] = self.x[(a, b)];
                y[(i, j)] = self.y[(a, b)];
            }
        }
        Ok(Self::new_unchecked(n_total, n_total, x, y, d))
    }

    /// Channel obtained from a unitary `s` on system ⊕ environment, with the
    /// environment prepared in `env` and traced out afterwards. System modes come first.
    pub fn from_dilation(s: &RMat, env: &GaussianState) -> Result<Self> {
        let ne = env.n_modes();
        let nt = s.nrows() / 2;
        if s.shape() != (2 * nt, 2 * nt) || nt <= ne {
            return Err(Error::DimensionMismatch("dilation sizes".into()));
        }
        let ns = nt - ne;
        let (a, e) = (2 * ns, 2 * ne);
        let x = s.view((0, 0), (a, a)).into_owned();
        let b = s.view((0, a), (a, e)).into_owned();
        let y = &b * env.cov() * b.transpose();
        let d = &b * env.mean();
        Ok(Self::new_unchecked(ns, ns, x, y, d))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.x.shape() != other.x.shape() {
            return f64::INFINITY;
        }
        let dd = (&self.d - &other.d).amax();
        max_abs(&(&self.x - &other.x)).max(max_abs(&(&self.y - &other.y))).max(dd)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `ch2 ∘ ch1`: X = X₂X₁, Y = X₂Y₁X₂ᵀ + Y₂, d = X₂d₁ + d₂.
pub fn compose(ch2: &GaussianChannel, ch1: &GaussianChannel) -> Result<GaussianChannel> {
    if ch1.n_out != ch2.n_in {
        return Err(Error::DimensionMismatch(format!("compose {} -> {}", ch1.n_out, ch2.n_in)));
    }
    Ok(GaussianChannel::new_unchecked(
        ch1.n_in,
        ch2.n_out,
        &ch2.x * &ch1.x,
        &ch2.x * &ch1.y * ch2.x.transpose() + &ch2.y,
        &ch2.x * &ch1.d + &ch2.d,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::symplectic_bs;
    use num_complex::Complex64;

    fn loss(eta: f64) -> GaussianChannel {
        GaussianChannel::new(1, 1, RMat::identity(2, 2) * eta.sqrt(), RMat::identity(2, 2) * (1.0 - eta), RVec::zeros(2))
            .unwrap()
    }

    #[test]
    fn loss_on_coherent_and_vacuum() {
        let out = loss(0.5).apply(&GaussianState::coherent(Complex64::new(1.0, -0.4))).unwrap();
        let want = GaussianState::coherent(Complex64::new(1.0, -0.4) * 0.5f64.sqrt());
        assert!((out.mean() - want.mean()).amax() < 1e-14);
        assert!(max_abs(&(out.cov() - want.cov())) < 1e-14);
        for eta in [0.01, 0.3, 0.99] {
            let v = loss(eta).apply(&GaussianState::vacuum(1)).unwrap();
            assert!(max_abs(&(v.cov() - RMat::identity(2, 2))) < 1e-14);
        }
    }

    #[test]
    fn loss_composition_multiplies_transmissivity() {
        let c = compose(&loss(0.7), &loss(0.4)).unwrap();
        assert!(c.max_diff(&loss(0.28)) < 1e-14);
        let id = GaussianChannel::identity(1);
        assert!(compose(&id, &loss(0.3)).unwrap().max_diff(&loss(0.3)) < 1e-15);
    }

    #[test]
    fn opposite_displacements_cancel() {
        let d = RVec::from_vec(vec![0.3, -1.2]);
        let c = compose(&GaussianChannel::displacement(d.clone()), &GaussianChannel::displacement(-d)).unwrap();
        assert!(c.max_diff(&GaussianChannel::identity(1)) < 1e-15);
    }

    #[test]
    fn non_cp_noise_is_rejected() {
        let r = GaussianChannel::new(1, 1, RMat::identity(2, 2) * 0.5, RMat::zeros(2, 2), RVec::zeros(2));
        assert!(matches!(r, Err(Error::NotCompletelyPositive { .. })));
    }

    #[test]
    fn dilation_of_beamsplitter_with_vacuum_is_loss() {
        let eta: f64 = 0.37;
        let s = symplectic_bs(eta.sqrt().acos(), 0.0);
        let ch = GaussianChannel::from_dilation(s.x(), &GaussianState::vacuum(1)).unwrap();
        assert!(ch.max_diff(&loss(eta)) < 1e-14);
    }

    #[test]
    fn embed_acts_only_on_listed_modes() {
        let ch = loss(0.5).embed(3, &[1]).unwrap();
        let st = GaussianState::coherent(Complex64::new(1.0, 0.0))
            .tensor(&GaussianState::coherent(Complex64::new(1.0, 0.0)))
            .tensor(&GaussianState::thermal(0.4).unwrap());
        let out = ch.apply(&st).unwrap();
        assert!((out.mean()[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!((out.mean()[2] - 1.0).abs() < 1e-14);
        assert!((out.cov()[(4, 4)] - 1.8).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let ch = loss(0.8).tensor(&GaussianChannel::identity(1));
        let back = GaussianChannel::from_json(&ch.to_json().unwrap()).unwrap();
        assert_eq!(back, ch);
        assert!(ch.to_json().unwrap().contains("\"X\""));
    }
}
