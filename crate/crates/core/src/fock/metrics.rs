use nalgebra::SVD;

use super::states::{FockDensity, FockMixture};
use crate::error::{Error, Result};
use crate::linalg::{c, eigvalsh, CMat};

const FACTOR_TOL: f64 = 1e-14;

fn same_dims(a: &[usize], b: &[usize]) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a:?} vs {b:?}")));
    }
    Ok(())
}

/// `F = ‖A†B‖₁²` for `ρ = AA†`, `σ = BB†`.
pub fn fidelity_mixture(rho: &FockMixture, sigma: &FockMixture) -> Result<f64> {
    same_dims(rho.dims(), sigma.dims())?;
    let m = rho.factor().adjoint() * sigma.factor();
    let sv = SVD::try_new(m, false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::EigenFailure("SVD did not converge".into()))?
        .singular_values;
    let f = sv.iter().sum::<f64>().powi(2);
    Ok(f.clamp(0.0, 1.0))
}

/// `‖ρ − σ‖₁` from a QR factorization of `[A B]`.
pub fn trace_norm_diff_mixture(rho: &FockMixture, sigma: &FockMixture) -> Result<f64> {
    same_dims(rho.dims(), sigma.dims())?;
    let (a, b) = (rho.factor(), sigma.factor());
    let (d, ra, rb) = (a.nrows(), a.ncols(), b.ncols());
    let mut cat = CMat::zeros(d, ra + rb);
    cat.view_mut((0, 0), (d, ra)).copy_from(a);
    cat.view_mut((0, ra), (d, rb)).copy_from(b);
    let r = if d >= ra + rb { cat.qr().r() } else { cat.clone() };
    let mut rs = r.clone();
    for j in ra..ra + rb {
        let mut col = rs.column_mut(j);
        col *= c(-1.0, 0.0);
    }
    let k = rs * r.adjoint();
    let s: f64 = eigvalsh(&k).iter().map(|x| x.abs()).sum();
    Ok(s.clamp(0.0, 2.0))
}

/// Uhlmann fidelity `‖√ρ√σ‖₁²` of dense densities.
pub fn fidelity_fock(rho: &FockDensity, sigma: &FockDensity) -> Result<f64> {
    same_dims(rho.dims(), sigma.dims())?;
    fidelity_mixture(&rho.factor(FACTOR_TOL), &sigma.factor(FACTOR_TOL))
}

/// Trace norm `‖ρ − σ‖₁ ∈ [0, 2]`.
pub fn trace_distance_fock(rho: &FockDensity, sigma: &FockDensity) -> Result<f64> {
    same_dims(rho.dims(), sigma.dims())?;
    let s: f64 = eigvalsh(&(rho.mat() - sigma.mat())).iter().map(|x| x.abs()).sum();
    Ok(s.clamp(0.0, 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_vec, fock_vec, thermal_populations};
    use crate::linalg::CVec;

    fn pure(v: &CVec) -> FockDensity {
        FockDensity::from_pure(vec![v.len()], v)
    }

    #[test]
    fn identical_and_orthogonal() {
        let v = coherent_vec(c(0.4, 0.2), 30);
        let r = pure(&v);
        assert!((fidelity_fock(&r, &r).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance_fock(&r, &r).unwrap() < 1e-12);
        let (a, b) = (pure(&fock_vec(1, 5)), pure(&fock_vec(3, 5)));
        assert!(fidelity_fock(&a, &b).unwrap() < 1e-20);
        assert!((trace_distance_fock(&a, &b).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_coherent_overlap() {
        let f = fidelity_fock(&pure(&fock_vec(0, 41)), &pure(&coherent_vec(c(1.0, 0.0), 41))).unwrap();
        assert!((f - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn vacuum_thermal() {
        for nbar in [0.5, 1.0] {
            let p = thermal_populations(nbar, 61);
            let th = FockDensity::new_unnormalized(
                vec![61],
                CMat::from_fn(61, 61, |i, j| if i == j { c(p[i], 0.0) } else { c(0.0, 0.0) }),
            );
            let f = fidelity_fock(&pure(&fock_vec(0, 61)), &th).unwrap();
            assert!((f - 1.0 / (1.0 + nbar)).abs() < 1e-12);
        }
    }

    #[test]
    fn qr_trace_norm_matches_dense() {
        let a = FockMixture::mix(&[
            (0.6, FockMixture::pure(vec![12], &coherent_vec(c(0.5, 0.1), 12)).unwrap()),
            (0.4, FockMixture::pure(vec![12], &fock_vec(2, 12)).unwrap()),
        ])
        .unwrap();
        let b = FockMixture::pure(vec![12], &coherent_vec(c(-0.2, 0.3), 12)).unwrap();
        let t1 = trace_norm_diff_mixture(&a, &b).unwrap();
        let t2 = trace_distance_fock(&a.to_density(), &b.to_density()).unwrap();
        assert!((t1 - t2).abs() < 1e-12);
    }
}
