use num_complex::Complex64;

use super::energy::{BoundKind, BoundMethod, BoundValue, EnergyConstraint};
use crate::error::{check_range, Error, Result};
use crate::fock::{apply_truncated, fock_vec, kraus_pure_loss, trace_distance_fock, FockDensity};
use crate::linalg::{trace_norm_herm, CVec, RMat};

fn check_eta(eta: f64) -> Result<()> {
    check_range((0.0..=1.0).contains(&eta), || format!("eta = {eta} outside [0, 1]"))
}

/// `(1−{E})√η^{⌊E⌋} + {E}√η^{⌈E⌉}`, the root fidelity on the optimal input.
fn bracket(eta: f64, e: &EnergyConstraint) -> f64 {
    let s = eta.sqrt();
    (1.0 - e.frac()) * s.powi(e.floor() as i32) + e.frac() * s.powi(e.ceil() as i32)
}

/// Fidelity between `ψ` and `(id ⊗ L^η)(ψ)` on the optimal input of energy `E`.
pub fn displacement_fidelity(eta: f64, e: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(bracket(eta, &EnergyConstraint::new(e)?).powi(2))
}

/// Energy-constrained sine distance between `D^α` and `D^α ∘ L^η`.
pub fn f_sine(eta: f64, e: f64) -> Result<f64> {
    Ok((1.0 - displacement_fidelity(eta, e)?).max(0.0).sqrt())
}

/// `exp(−|δ|²(1−√η)²)`: fidelity of `|δ⟩` with its lossy image, up to the common displacement.
pub fn coherent_loss_fidelity(delta: Complex64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok((-delta.norm_sqr() * (1.0 - eta.sqrt()).powi(2)).exp())
}

/// `√(1−{E})|⌊E⌋⟩_A|0⟩_R + √{E}|⌈E⌉⟩_A|1⟩_R` with dims `[M+1, 2]`.
pub fn optimal_state_vec(e: f64, m: usize) -> Result<CVec> {
    let ec = EnergyConstraint::new(e)?;
    if m < ec.ceil() {
        return Err(Error::TruncationTooSmall(format!("M = {m} below ceil(E) = {}", ec.ceil())));
    }
    let a0 = fock_vec(ec.floor(), m + 1);
    let a1 = fock_vec(ec.ceil(), m + 1);
    let v = kron_vec(&a0, &fock_vec(0, 2)) * Complex64::new((1.0 - ec.frac()).sqrt(), 0.0)
        + kron_vec(&a1, &fock_vec(1, 2)) * Complex64::new(ec.frac().sqrt(), 0.0);
    Ok(v)
}

pub fn optimal_state(e: f64, m: usize) -> Result<FockDensity> {
    Ok(FockDensity::from_pure(vec![m + 1, 2], &optimal_state_vec(e, m)?))
}

fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    CVec::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

fn frac_in_unit(e: f64) -> Result<f64> {
    check_range(e > 0.0 && e < 1.0, || format!("E = {e} must lie in (0, 1)"))?;
    Ok(e)
}

/// Half trace distance between the ideal and approximate displacement outputs
/// on the optimal input, for `0 < E < 1`.
pub fn d1(eta: f64, e: f64) -> Result<f64> {
    check_eta(eta)?;
    let f = frac_in_unit(e)?;
    let s = eta.sqrt();
    let kappa = (f * (4.0 + f * (eta + 2.0 * s - 3.0))).sqrt();
    Ok(0.5 * (f * (1.0 - eta) + (1.0 - s) * kappa))
}

/// `(id ⊗ L^η)(ψ) − ψ` in the basis `|00⟩, |01⟩, |10⟩, |11⟩` (A first), and its trace norm.
pub fn varrho_matrix(eta: f64, e: f64) -> Result<(RMat, f64)> {
    check_eta(eta)?;
    let f = frac_in_unit(e)?;
    let off = -((1.0 - f) * f).sqrt() * (1.0 - eta.sqrt());
    let mut m = RMat::zeros(4, 4);
    m[(1, 1)] = f * (1.0 - eta);
    m[(3, 3)] = -f * (1.0 - eta);
    m[(0, 3)] = off;
    m[(3, 0)] = off;
    let norm = trace_norm_herm(&m.map(|x| Complex64::new(x, 0.0)));
    Ok((m, norm))
}

/// Lower bound on half the energy-constrained distance: closed form for
/// `0 < E < 1`, number-basis trace distance on the optimal input otherwise.
pub fn d1_bound(eta: f64, e: f64) -> Result<BoundValue> {
    check_eta(eta)?;
    let ec = EnergyConstraint::new(e)?;
    if e > 0.0 && e < 1.0 {
        return Ok(BoundValue { value: d1(eta, e)?, kind: BoundKind::Lower, method: BoundMethod::ClosedForm });
    }
    if e == 0.0 {
        return Ok(BoundValue { value: 0.0, kind: BoundKind::Lower, method: BoundMethod::ClosedForm });
    }
    // Loss never raises photon number, so cutting at ⌈E⌉ is exact.
    let m = ec.ceil();
    let psi = optimal_state(e, m)?;
    let (out, _) = apply_truncated(&kraus_pure_loss(eta, m)?, &psi, 0)?;
    Ok(BoundValue { value: 0.5 * trace_distance_fock(&psi, &out)?, kind: BoundKind::Lower, method: BoundMethod::FockTrace })
}

fn total(etas: &[f64], alloc: &[f64]) -> Result<f64> {
    etas.iter().zip(alloc).map(|(&eta, &e)| f_sine(eta, e.max(0.0))).sum()
}

fn compositions(k: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        cur.push(k);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for i in 0..=k {
        cur.push(i);
        compositions(k - i, parts - 1, cur, out);
        cur.pop();
    }
}

/// Finest per-axis step of the simplex search.
const FINEST_STEP: f64 = 1e-3;
const TOP_K: usize = 6;

/// Maximizer of `Σ f(η_i, E_i)` over `{E_i ≥ 0, Σ E_i ≤ E}` and its value.
///
/// A coarse lattice over the simplex (with a slack coordinate) seeds pairwise
/// transfer moves whose step is halved down to 1e-3.
pub fn tensor_disp_allocation(etas: &[f64], e: f64) -> Result<(f64, Vec<f64>)> {
    check_range(!etas.is_empty() && etas.len() <= 8, || format!("{} factors; expected 1..=8", etas.len()))?;
    for &eta in etas {
        check_eta(eta)?;
    }
    EnergyConstraint::new(e)?;
    let l = etas.len();
    if e == 0.0 {
        return Ok((0.0, vec![0.0; l]));
    }
    let mut k = 1;
    while k < 64 && binom(k + 1 + l, l) <= 20_000 {
        k += 1;
    }
    let mut lattice = Vec::new();
    compositions(k, l + 1, &mut Vec::new(), &mut lattice);
    let mut scored = lattice
        .into_iter()
        .map(|c| {
            let a: Vec<f64> = c.iter().map(|&u| e * u as f64 / k as f64).collect();
            total(etas, &a[..l]).map(|v| (v, a))
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    scored.truncate(TOP_K);

    let mut best = scored[0].clone();
    for (mut val, mut a) in scored {
        let mut step = e / k as f64 / 2.0;
        loop {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..=l {
                    for j in 0..=l {
                        if i == j || a[i] < step {
                            continue;
                        }
                        a[i] -= step;
                        a[j] += step;
                        let v = total(etas, &a[..l])?;
                        if v > val + 1e-15 {
                            val = v;
                            improved = true;
                        } else {
                            a[i] += step;
                            a[j] -= step;
                        }
                    }
                }
            }
            if step <= FINEST_STEP {
                break;
            }
            step = (step / 2.0).max(FINEST_STEP);
        }
        if val > best.0 {
            best = (val, a);
        }
    }
    best.1.truncate(l);
    Ok(best)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Upper bound on half the energy-constrained distance of `⊗_i (D^{α_i}, D^{α_i} ∘ L^{η_i})`.
pub fn tensor_disp_bound(etas: &[f64], e: f64) -> Result<f64> {
    Ok(tensor_disp_allocation(etas, e)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fidelity_fock, op_number};
    use proptest::prelude::*;

    #[test]
    fn f_sine_limits() {
        for e in [0.0, 0.3, 1.0, 2.5, 7.0] {
            assert_eq!(f_sine(1.0, e).unwrap(), 0.0);
        }
        for eta in [0.0, 0.2, 0.9] {
            assert_eq!(f_sine(eta, 0.0).unwrap(), 0.0);
        }
        assert!(f_sine(1.1, 1.0).is_err());
        assert!(f_sine(0.5, -1.0).is_err());
        assert!((f_sine(0.0, 0.5).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn integer_energy_fidelity_against_oracle() {
        for eta in [0.3, 0.5, 0.9] {
            for e in [1.0, 2.0, 3.0] {
                let psi = optimal_state(e, 6).unwrap();
                let (out, _) = apply_truncated(&kraus_pure_loss(eta, 6).unwrap(), &psi, 0).unwrap();
                let f = fidelity_fock(&psi, &out).unwrap();
                assert!((f - eta.powf(e)).abs() < 1e-10);
                assert!((displacement_fidelity(eta, e).unwrap() - eta.powf(e)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fractional_energy_fidelity_against_oracle() {
        for (eta, e) in [(0.4, 0.06), (0.7, 1.3), (0.95, 2.75)] {
            let psi = optimal_state(e, 5).unwrap();
            let (out, _) = apply_truncated(&kraus_pure_loss(eta, 5).unwrap(), &psi, 0).unwrap();
            let f = fidelity_fock(&psi, &out).unwrap();
            assert!((f - displacement_fidelity(eta, e).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn optimal_state_energy() {
        let n = op_number(5);
        for e in [0.06, 0.3, 1.0, 1.7] {
            let psi = optimal_state(e, 5).unwrap();
            assert!((psi.expect_mode(0, &n).unwrap().re - e).abs() < 1e-14);
        }
        let v = optimal_state_vec(0.06, 3).unwrap();
        assert!((v[0].re - 0.94f64.sqrt()).abs() < 1e-15);
        assert!((v[3].re - 0.06f64.sqrt()).abs() < 1e-15);
        let v = optimal_state_vec(1.0, 3).unwrap();
        assert!((v[2].re - 1.0).abs() < 1e-15);
        assert!(matches!(optimal_state(2.5, 2), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn d1_against_oracle() {
        let e = 0.06;
        for k in 1..10 {
            let eta = k as f64 / 10.0;
            let psi = optimal_state(e, 12).unwrap();
            let (out, _) = apply_truncated(&kraus_pure_loss(eta, 12).unwrap(), &psi, 0).unwrap();
            let td = 0.5 * trace_distance_fock(&psi, &out).unwrap();
            assert!((td - d1(eta, e).unwrap()).abs() < 1e-12);
        }
        assert_eq!(d1(1.0, 0.4).unwrap(), 0.0);
        assert!(d1(0.5, 1e-12).unwrap() < 1e-5);
        assert!(d1(0.5, 1.0).is_err());
    }

    #[test]
    fn varrho_structure() {
        let (m, norm) = varrho_matrix(0.64, 0.5).unwrap();
        assert!(m.trace().abs() < 1e-15);
        assert!((norm / 2.0 - d1(0.64, 0.5).unwrap()).abs() < 1e-12);
        let (m, norm) = varrho_matrix(1.0, 0.5).unwrap();
        assert_eq!(m.abs().max(), 0.0);
        assert_eq!(norm, 0.0);
    }

    #[test]
    fn d1_bound_routes() {
        assert_eq!(d1_bound(0.5, 0.3).unwrap().method, BoundMethod::ClosedForm);
        let b = d1_bound(0.5, 2.0).unwrap();
        assert_eq!(b.method, BoundMethod::FockTrace);
        // Integer E: ψ = |2⟩|0⟩ and the loss output differs by 1 − η² in trace distance.
        assert!((b.value - (1.0 - 0.25)).abs() < 1e-12);
        assert!(b.value <= f_sine(0.5, 2.0).unwrap());
    }

    #[test]
    fn tensor_bound_examples() {
        for (eta, e) in [(0.9, 1.0), (0.3, 2.4)] {
            assert!((tensor_disp_bound(&[eta], e).unwrap() - f_sine(eta, e).unwrap()).abs() < 1e-15);
        }
        assert_eq!(tensor_disp_bound(&[1.0, 1.0, 1.0], 3.0).unwrap(), 0.0);
        let b = tensor_disp_bound(&[0.9, 0.9], 1.0).unwrap();
        assert!(b >= f_sine(0.9, 1.0).unwrap());
        assert!(b >= 2.0 * f_sine(0.9, 0.5).unwrap() - 1e-15);
        let (v, a) = tensor_disp_allocation(&[0.2, 0.95, 0.6], 1.5).unwrap();
        assert!(a.iter().sum::<f64>() <= 1.5 + 1e-12 && a.iter().all(|&x| x >= 0.0));
        assert!((v - total(&[0.2, 0.95, 0.6], &a).unwrap()).abs() < 1e-14);
        assert!(tensor_disp_bound(&[0.5; 9], 1.0).is_err());
    }

    #[test]
    fn tensor_bound_beats_random_feasible_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let etas = [0.5, 0.8, 0.95, 0.3];
        let e = 2.3;
        let b = tensor_disp_bound(&etas, e).unwrap();
        for _ in 0..2000 {
            let mut w: Vec<f64> = (0..5).map(|_| -rng.random::<f64>().ln()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x *= e / s);
            assert!(total(&etas, &w[..4]).unwrap() <= b + 1e-6);
        }
    }

    proptest! {
        #[test]
        fn d1_below_f(eta in 0.0..1.0f64, e in 0.001..0.999f64) {
            prop_assert!(d1(eta, e).unwrap() <= f_sine(eta, e).unwrap() + 1e-12);
        }

        #[test]
        fn f_monotone(eta in 0.0..0.99f64, de in 0.0..0.01f64, e in 0.0..10.0f64, dx in 0.0..2.0f64) {
            prop_assert!(f_sine(eta + de, e).unwrap() <= f_sine(eta, e).unwrap() + 1e-15);
            prop_assert!(f_sine(eta, e + dx).unwrap() + 1e-15 >= f_sine(eta, e).unwrap());
        }

        #[test]
        fn varrho_norm_matches_d1(eta in 0.0..1.0f64, e in 0.001..0.999f64) {
            let (_, n) = varrho_matrix(eta, e).unwrap();
            prop_assert!((n - 2.0 * d1(eta, e).unwrap()).abs() < 1e-12);
        }
    }
}
