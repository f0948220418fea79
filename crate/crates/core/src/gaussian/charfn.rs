use num_complex::Complex64;

use super::channel::GaussianChannel;
use super::state::GaussianState;
use crate::error::{Error, Result};
use crate::linalg::{omega, RVec};

/// Evaluation point of a characteristic function.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    r: RVec,
}

impl PhasePoint {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() || r.len() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("phase point length {}", r.len())));
        }
        Ok(Self { r: RVec::from_vec(r) })
    }

    pub fn from_vec(r: RVec) -> Result<Self> {
        Self::new(r.iter().copied().collect())
    }

    pub fn r(&self) -> &RVec {
        &self.r
    }

    pub fn n_modes(&self) -> usize {
        self.r.len() / 2
    }
}

/// `χ(r) = exp(−¼ rᵀΩᵀVΩr + i rᵀΩᵀμ)`.
pub fn char_fn(st: &GaussianState, r: &PhasePoint) -> Result<Complex64> {
    if r.n_modes() != st.n_modes() {
        return Err(Error::DimensionMismatch(format!("point {} vs state {}", r.n_modes(), st.n_modes())));
    }
    let w = omega(st.n_modes()) * r.r();
    let quad = (w.transpose() * st.cov() * &w)[(0, 0)];
    let lin = w.dot(st.mean());
    Ok(Complex64::new(-0.25 * quad, lin).exp())
}

/// Precomputed `χ` of a fixed state for repeated evaluation on raw slices.
#[derive(Debug, Clone)]
pub struct CharFnEval {
    dim: usize,
    quad: Vec<f64>,
    lin: Vec<f64>,
}

impl CharFnEval {
    pub fn new(st: &GaussianState) -> Self {
        let om = omega(st.n_modes());
        let q = om.transpose() * st.cov() * &om * 0.25;
        let l = om.transpose() * st.mean();
        let dim = 2 * st.n_modes();
        Self { dim, quad: q.transpose().iter().copied().collect(), lin: l.iter().copied().collect() }
    }

    pub fn eval(&self, r: &[f64]) -> Complex64 {
        assert_eq!(r.len(), self.dim, "phase point dimension");
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..self.dim {
            let row = &self.quad[i * self.dim..(i + 1) * self.dim];
            quad += r[i] * row.iter().zip(r).map(|(a, b)| a * b).sum::<f64>();
            lin += r[i] * self.lin[i];
        }
        Complex64::new(-quad, lin).exp()
    }
}

/// Output characteristic function of `ch` given the input one:
/// `χ_in(ΩᵀXᵀΩr) · exp(−¼ rᵀΩᵀYΩr + i rᵀΩᵀd)`.
pub fn char_fn_pushforward<F>(ch: &GaussianChannel, chi_in: F, r: &PhasePoint) -> Result<Complex64>
where
    F: Fn(&PhasePoint) -> Result<Complex64>,
{
    if r.n_modes() != ch.n_out() {
        return Err(Error::DimensionMismatch(format!("point {} vs channel output {}", r.n_modes(), ch.n_out())));
    }
    let w = omega(ch.n_out()) * r.r();
    let pulled = omega(ch.n_in()).transpose() * ch.x().transpose() * &w;
    let inner = chi_in(&PhasePoint { r: pulled })?;
    let quad = (w.transpose() * ch.y() * &w)[(0, 0)];
    Ok(inner * Complex64::new(-0.25 * quad, w.dot(ch.d())).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{symplectic_bs, symplectic_squeeze};
    use crate::linalg::RMat;
    use proptest::prelude::*;

    #[test]
    fn fast_evaluator_matches() {
        let st = GaussianState::tms(0.7).unwrap();
        let ch = symplectic_bs(0.4, 1.1);
        let out = ch.apply(&st).unwrap();
        let ev = CharFnEval::new(&out);
        for r in [[0.1, -0.3, 1.2, 0.5], [2.0, 0.0, -1.0, 0.7]] {
            let want = char_fn(&out, &PhasePoint::new(r.to_vec()).unwrap()).unwrap();
            assert!((ev.eval(&r) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn origin_gives_one() {
        let st = GaussianState::tms(0.7).unwrap();
        let v = char_fn(&st, &PhasePoint::new(vec![0.0; 4]).unwrap()).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn vacuum_and_coherent_values() {
        let (x, p) = (0.8, -1.3);
        let pt = PhasePoint::new(vec![x, p]).unwrap();
        let vac = char_fn(&GaussianState::vacuum(1), &pt).unwrap();
        assert!((vac.re - (-(x * x + p * p) / 4.0).exp()).abs() < 1e-15 && vac.im.abs() < 1e-15);
        let a = Complex64::new(0.6, -0.2);
        let coh = char_fn(&GaussianState::coherent(a), &pt).unwrap();
        let phase = Complex64::new(0.0, 2f64.sqrt() * (p * a.re - x * a.im)).exp();
        assert!((coh - vac * phase).norm() < 1e-14);
    }

    #[test]
    fn identity_pushforward() {
        let st = GaussianState::thermal(0.3).unwrap();
        let pt = PhasePoint::new(vec![0.4, 0.9]).unwrap();
        let v = char_fn_pushforward(&GaussianChannel::identity(1), |q| char_fn(&st, q), &pt).unwrap();
        assert!((v - char_fn(&st, &pt).unwrap()).norm() < 1e-15);
    }

    fn arb_state_2() -> impl Strategy<Value = GaussianState> {
        (0.0..1.0f64, -1.0..1.0f64, 0.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(n, r, th, m1, m2)| {
            let base = GaussianState::thermal(n).unwrap().tensor(&GaussianState::coherent(Complex64::new(m1, m2)));
            let s = symplectic_squeeze(r).tensor(&GaussianChannel::identity(1));
            let u = symplectic_bs(th, 0.3).after(&s).unwrap();
            u.apply(&base).unwrap()
        })
    }

    proptest! {
        #[test]
        fn pushforward_matches_output(st in arb_state_2(), eta in 0.05..1.0f64, pts in proptest::collection::vec(-3.0..3.0f64, 4)) {
            let mut x = RMat::identity(4, 4) * eta.sqrt();
            x[(0, 2)] = 0.2;
            let y = RMat::identity(4, 4) * (1.0 - eta) + RMat::identity(4, 4) * 0.5;
            let ch = GaussianChannel::new(2, 2, x, y, RVec::from_vec(vec![0.1, -0.2, 0.3, 0.0])).unwrap();
            let pt = PhasePoint::new(pts).unwrap();
            let a = char_fn_pushforward(&ch, |q| char_fn(&st, q), &pt).unwrap();
            let b = char_fn(&ch.apply(&st).unwrap(), &pt).unwrap();
            prop_assert!((a - b).norm() <= 1e-10);
            prop_assert!(a.norm() <= 1.0 + 1e-12);
        }
    }
}
