use super::channel::GaussianChannel;
use crate::linalg::{max_abs, omega, RMat};

/// Beamsplitter `exp[iθ(e^{iφ} a†b + e^{−iφ} a b†)]` on modes (a, b).
pub fn symplectic_bs(theta: f64, phi: f64) -> GaussianChannel {
    let (ct, st) = (theta.cos(), theta.sin());
    let (cp, sp) = (phi.cos(), phi.sin());
    #[rustfmt::skip]
    let x = RMat::from_row_slice(4, 4, &[
        ct, 0.0, -st * sp, -st * cp,
        0.0, ct, st * cp, -st * sp,
        st * sp, -st * cp, ct, 0.0,
        st * cp, st * sp, 0.0, ct,
    ]);
    GaussianChannel::unitary(x)
}

/// Phase rotation `exp(iφ n)`.
pub fn symplectic_phase(phi: f64) -> GaussianChannel {
    let (c, s) = (phi.cos(), phi.sin());
    GaussianChannel::unitary(RMat::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// Single-mode squeezer, `x → e^{−r} x`, `p → e^{r} p`.
pub fn symplectic_squeeze(r: f64) -> GaussianChannel {
    GaussianChannel::unitary(RMat::from_row_slice(2, 2, &[(-r).exp(), 0.0, 0.0, r.exp()]))
}

/// SUM gate `exp(−iG x₁ p₂)`: `x₂ → x₂ + G x₁`, `p₁ → p₁ − G p₂`.
pub fn symplectic_sum(g: f64) -> GaussianChannel {
    #[rustfmt::skip]
    let x = RMat::from_row_slice(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, -g,
        g, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ]);
    GaussianChannel::unitary(x)
}

pub fn is_symplectic(x: &RMat, tol: f64) -> bool {
    let n = x.nrows() / 2;
    x.is_square() && x.nrows() % 2 == 0 && max_abs(&(x * omega(n) * x.transpose() - omega(n))) <= tol
}
