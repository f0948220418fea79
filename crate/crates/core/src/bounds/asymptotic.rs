use crate::error::{check_range, Error, Result};
use crate::gaussian::{fidelity_gaussian, GaussianChannel, GaussianState};
use crate::linalg::{RMat, RVec};

fn residual(xres: &RMat, yres: &RMat) -> Result<GaussianChannel> {
    if xres.shape() != (2, 2) || yres.shape() != (2, 2) {
        return Err(Error::DimensionMismatch("single-mode residual expected".into()));
    }
    GaussianChannel::new(1, 1, xres.clone(), yres.clone(), RVec::zeros(2))
}

/// `F(ψ_TMS(n̄), (id ⊗ G^{X̃,Ỹ})(ψ_TMS(n̄)))` for the residual `G = U⁻¹ ∘ Ũ`.
pub fn arbitrary_unitary_asymptotic(xres: &RMat, yres: &RMat, nbar: f64) -> Result<f64> {
    check_range(nbar >= 0.0 && nbar.is_finite(), || format!("nbar = {nbar} must be non-negative"))?;
    let g = residual(xres, yres)?.embed(2, &[1])?;
    let st = GaussianState::tms(nbar)?;
    fidelity_gaussian(&st, &g.apply(&st)?)
}

/// `1/(−1 + x₁₁ + x₁₂x₂₁ + x₂₂ − x₁₁x₂₂) = −1/det(I − X̃)`, the coefficient as commonly written.
pub fn printed_asymptotic_coefficient(xres: &RMat) -> f64 {
    let (a, b, c, d) = (xres[(0, 0)], xres[(0, 1)], xres[(1, 0)], xres[(1, 1)]);
    1.0 / (-1.0 + a + b * c + d - a * d)
}

/// Limit of `n̄² F` as `n̄ → ∞`: `1/|det(I − X̃)|`.
pub fn asymptotic_coefficient(xres: &RMat) -> Result<f64> {
    let det = (RMat::identity(2, 2) - xres).determinant();
    if det.abs() < 1e-14 {
        return Err(Error::OutOfRange("det(I − X) vanishes; fidelity does not decay as 1/n̄²".into()));
    }
    Ok(1.0 / det.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_residual() {
        for n in [0.0, 1.0, 100.0] {
            let f = arbitrary_unitary_asymptotic(&RMat::identity(2, 2), &RMat::zeros(2, 2), n).unwrap();
            assert!((f - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn loss_residual_decays() {
        let x = RMat::identity(2, 2) * 0.9f64.sqrt();
        let y = RMat::identity(2, 2) * 0.1;
        let f: Vec<f64> = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&n| arbitrary_unitary_asymptotic(&x, &y, n).unwrap())
            .collect();
        assert!(f.windows(2).all(|w| w[1] < w[0]));
        assert!(f[3] < 1e-3);
    }

    #[test]
    fn coefficient_limits() {
        // Loss-like, rotation-like and squeezing-like residuals.
        let cases = [
            (RMat::identity(2, 2) * 0.95, RMat::identity(2, 2) * (1.0 - 0.95f64 * 0.95)),
            (RMat::from_row_slice(2, 2, &[0.6f64.cos(), -0.6f64.sin(), 0.6f64.sin(), 0.6f64.cos()]), RMat::zeros(2, 2)),
            (RMat::from_diagonal(&RVec::from_vec(vec![1.3, 1.0 / 1.3])), RMat::zeros(2, 2)),
        ];
        for (x, y) in cases {
            let c = asymptotic_coefficient(&x).unwrap();
            assert!((printed_asymptotic_coefficient(&x).abs() - c).abs() < 1e-9 * c);
            let n = 1e4;
            let v = n * n * arbitrary_unitary_asymptotic(&x, &y, n).unwrap();
            assert!((v / c - 1.0).abs() < 0.05, "{v} vs {c}");
        }
    }
}
