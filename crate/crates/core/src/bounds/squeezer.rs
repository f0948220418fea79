use crate::error::{check_range, Result};

/// `10 log₁₀(e^{2r})`.
pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

fn excess(r: f64, r_e: f64) -> Result<f64> {
    check_range(r.is_finite(), || format!("r = {r} must be finite"))?;
    check_range(r_e >= 0.0, || format!("r_E = {r_e} must be non-negative"))?;
    Ok(((2.0 * r.abs()).exp() - 1.0) * (-2.0 * r_e).exp())
}

/// Fidelity between `(id ⊗ S^r)(ψ_TMS(N))` and the offline-squeezing approximation.
/// Squeezing the other quadrature (`r < 0`) gives the same value as `|r|`.
pub fn squeezer_tms_fidelity(r: f64, r_e: f64, n: f64) -> Result<f64> {
    check_range(n >= 0.0, || format!("N = {n} must be non-negative"))?;
    Ok(1.0 / (1.0 + (n + 0.5) * excess(r, r_e)?).sqrt())
}

pub fn squeezer_tms_sine(r: f64, r_e: f64, n: f64) -> Result<f64> {
    Ok((1.0 - squeezer_tms_fidelity(r, r_e, n)?).max(0.0).sqrt())
}

/// Fidelity on the squeezed vacuum `|z⟩` (covariance `diag(z, 1/z)`).
pub fn squeezer_zvac_fidelity(z: f64, r: f64, r_e: f64) -> Result<f64> {
    check_range(z > 0.0, || format!("z = {z} must be positive"))?;
    Ok((2.0 * z / (2.0 * z + excess(r, r_e)?)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{approx_squeezer, ideal_squeezer, squeezer_residual};
    use crate::gaussian::{fidelity_gaussian, GaussianState};

    #[test]
    fn db_conversion() {
        assert_eq!(r_to_db(0.0), 0.0);
        assert!((db_to_r(15.0) - 1.7269).abs() < 1e-4);
        assert!((r_to_db(1.0) - 8.686).abs() < 1e-3);
        for r in [0.1, 0.46, 1.726, 3.0] {
            assert!((db_to_r(r_to_db(r)) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn limits() {
        assert_eq!(squeezer_tms_sine(0.0, 1.0, 3.0).unwrap(), 0.0);
        assert!(squeezer_tms_sine(0.46, 40.0, 0.06).unwrap() < 1e-8);
        assert!(squeezer_tms_fidelity(0.46, -1.0, 0.06).is_err());
    }

    #[test]
    fn tms_fidelity_against_engine() {
        for (r, re, n) in [(0.46f64, db_to_r(26.0), 0.06), (0.8, 0.5, 1.3), (0.2, 2.0, 0.0)] {
            let st = GaussianState::tms(n).unwrap();
            let xi = squeezer_residual((-2.0 * r).exp(), re).unwrap().embed(2, &[0]).unwrap();
            let f = fidelity_gaussian(&st, &xi.apply(&st).unwrap()).unwrap();
            assert!((f - squeezer_tms_fidelity(r, re, n).unwrap()).abs() < 1e-10, "{r} {re} {n}");
            let ideal = ideal_squeezer(r).embed(2, &[0]).unwrap().apply(&st).unwrap();
            let appr = approx_squeezer(r, re).unwrap().embed(2, &[0]).unwrap().apply(&st).unwrap();
            assert!((fidelity_gaussian(&ideal, &appr).unwrap() - f).abs() < 1e-10);
        }
    }

    #[test]
    fn zvac_against_engine() {
        for z in [0.2, 1.0, 4.0] {
            let st = GaussianState::squeezed_vacuum(z).unwrap();
            let xi = squeezer_residual((-0.92f64).exp(), 1.0).unwrap();
            let f = fidelity_gaussian(&st, &xi.apply(&st).unwrap()).unwrap();
            assert!((f - squeezer_zvac_fidelity(z, 0.46, 1.0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_in_n_and_re() {
        for re in [0.5, 1.0, 2.0, 3.0] {
            let mut last = 0.0;
            for k in 0..20 {
                let s = squeezer_tms_sine(0.46, re, 0.1 * k as f64).unwrap();
                assert!(s >= last);
                last = s;
            }
        }
        for n in [0.06, 0.5, 2.0] {
            let mut last = 1.0;
            for k in 0..20 {
                let s = squeezer_tms_sine(0.46, 0.25 * k as f64, n).unwrap();
                assert!(s <= last);
                last = s;
            }
        }
    }
}
