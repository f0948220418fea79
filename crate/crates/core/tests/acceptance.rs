//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use gaussgate::bounds::{
    coherent_loss_fidelity, d1, db_to_r, f_sine, g_angle_bound, optimal_state, squeezer_tms_fidelity, sum_tms_fidelity,
    sum_zvac_fidelity, SUM_RA,
};
use gaussgate::fock::{
    apply_truncated, coherent_vec, fidelity_fock, fidelity_mixture, kraus_pure_loss, kraus_raw_displacement, kraus_x_noise,
    op_displacement_rect, op_number, tms_vec, trace_distance_fock, trace_norm_diff_mixture, FockDensity, FockMixture,
    ModeRecipe, TwoModeRecipe,
};
use gaussgate::gates::{
    approx_squeezer, approx_sum, ideal_squeezer, ideal_sum, squeezer_noise, standard_ladders, sum_gain,
    unit_gain_reflectivity,
};
use gaussgate::gaussian::{fidelity_gaussian, GaussianState};
use gaussgate::linalg::CMat;
use gaussgate::sdp::{d2_displacement, d2_solution, EcdConfig};
use gaussgate::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn c1_integer_energy() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for eta in [0.5, 0.9] {
        for e in [1.0, 2.0] {
            let psi = optimal_state(e, 30)?;
            let (out, _) = apply_truncated(&kraus_pure_loss(eta, 30)?, &psi, 0)?;
            let f = fidelity_fock(&psi, &out)?;
            worst = worst.max((f - eta.powf(e)).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |F - eta^E| = {worst:.2e}"))
}

fn c2_d1_oracle() -> Result<Outcome> {
    let (e, m, out_dim, env_dim) = (0.06, 12, 40, 30);
    let alpha = Complex64::new(0.5, 0.2);
    let psi = optimal_state(e, m)?;
    let ideal = psi.conjugate_mode(0, &op_displacement_rect(alpha, out_dim, m + 1)?.mat)?;
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let eta = k as f64 / 10.0;
        let ch = kraus_raw_displacement(eta, alpha, m + 1, out_dim, env_dim)?;
        let (appr, _) = apply_truncated(&ch, &psi, 0)?;
        let half = 0.5 * trace_distance_fock(&ideal, &appr)?;
        worst = worst.max((half - d1(eta, e)?).abs());
    }
    outcome(worst <= 1e-6, format!("max |d1 - oracle half trace norm| = {worst:.2e}"))
}

fn c3_fig5() -> Result<Outcome> {
    let (e, m) = (0.06, 6);
    let cfg = EcdConfig::default();
    let (mut min_slack, mut max_gap, mut max_small_eta): (f64, f64, f64) = (f64::INFINITY, 0.0, 0.0);
    for k in 1..20 {
        let eta = k as f64 * 0.05;
        let sol = d2_solution(eta, e, m, &cfg)?;
        let (lo, hi) = (d1(eta, e)?, f_sine(eta, e)?);
        min_slack = min_slack.min(sol.primal - lo).min(hi - sol.primal);
        max_gap = max_gap.max(sol.dual_gap);
        if eta <= 0.2 + 1e-12 {
            max_small_eta = max_small_eta.max(sol.primal - lo);
        }
    }
    let pass = min_slack >= -1e-6 && max_small_eta <= 0.02 && max_gap <= 1e-6;
    outcome(pass, format!("min slack {min_slack:.2e}, max d2-d1 (eta<=0.2) {max_small_eta:.2e}, max gap {max_gap:.2e}"))
}

fn c4_sandwich() -> Result<Outcome> {
    let (eta, e) = (0.5, 0.06);
    let (a, b) = (d2_displacement(eta, e, 4)?, d2_displacement(eta, e, 8)?);
    let width = 2.0 * (e / 5.0f64).sqrt();
    let pass = a <= b + 1e-6 && b - a <= width;
    outcome(pass, format!("d2(M=4) = {a:.9}, d2(M=8) = {b:.9}, allowed growth {width:.4}"))
}

fn random_mode(rng: &mut ChaCha8Rng, nbar_max: f64, r_max: f64, alpha_max: f64) -> ModeRecipe {
    ModeRecipe {
        nbar: rng.random_range(0.0..nbar_max),
        r: rng.random_range(-r_max..r_max),
        phi: rng.random_range(0.0..2.0 * PI),
        alpha: Complex64::from_polar(rng.random_range(0.0..alpha_max), rng.random_range(0.0..2.0 * PI)),
    }
}

fn pad_rows(mix: &FockMixture, dim: usize) -> Result<FockMixture> {
    let f = mix.factor();
    let mut a = CMat::zeros(dim, f.ncols());
    a.view_mut((0, 0), (f.nrows(), f.ncols())).copy_from(f);
    FockMixture::new(vec![dim], a)
}

fn c5_projection() -> Result<Outcome> {
    let m_full = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut states = 0;
    let mut worst_p: f64 = f64::INFINITY;
    let mut worst_d: f64 = f64::INFINITY;
    while states < 50 {
        let parts = rng.random_range(1..=3);
        let comps = (0..parts)
            .map(|_| {
                let w = rng.random_range(0.1..1.0);
                let rc = random_mode(&mut rng, 0.8, 0.7, 1.2);
                Ok((w, rc.fock(m_full, 1e-15)?.normalized()))
            })
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = comps.iter().map(|p| p.0).sum();
        let comps: Vec<_> = comps.into_iter().map(|(w, p)| (w / total, p)).collect();
        let rho = FockMixture::mix(&comps)?.normalized();
        let e = rho.expect_mode(0, &op_number(m_full))?.re;
        if e > 2.0 {
            continue;
        }
        states += 1;
        for m in [5, 10, 20] {
            let (proj, p) = rho.project_truncate(m)?;
            worst_p = worst_p.min(p - (1.0 - e / (m as f64 + 1.0)));
            let dist = 0.5 * trace_norm_diff_mixture(&rho, &pad_rows(&proj, m_full + 1)?)?;
            worst_d = worst_d.min((e / (m as f64 + 1.0)).sqrt() - dist);
        }
    }
    let pass = worst_p >= 0.0 && worst_d >= 0.0;
    outcome(pass, format!("50 states; min margin: pass prob {worst_p:.3e}, trace distance {worst_d:.3e}"))
}

fn c6_squeezer() -> Result<Outcome> {
    let (r, n, re) = (0.46f64, 0.06, db_to_r(26.0));
    let f = squeezer_tms_fidelity(r, re, n)?;
    let st = GaussianState::tms(n)?;
    let ideal = ideal_squeezer(r).embed(2, &[0])?.apply(&st)?;
    let appr = approx_squeezer(r, re)?.embed(2, &[0])?.apply(&st)?;
    let f_engine = fidelity_gaussian(&ideal, &appr)?;

    let m = 14;
    let out_dim = m + 6;
    let psi = FockDensity::from_pure(vec![m + 1, m + 1], &tms_vec(n, m));
    let noise = kraus_x_noise(squeezer_noise((-2.0 * r).exp(), re), out_dim, m + 1, 24)?;
    let (out, _) = apply_truncated(&noise, &psi, 0)?;
    let f_fock = fidelity_fock(&psi.pad(&[out_dim, m + 1])?, &out)?;

    let in_band = (0.96..=0.98).contains(&f);
    let pass = in_band && (f - f_engine).abs() <= 1e-6 && (f - f_fock).abs() <= 1e-4;
    outcome(
        pass,
        format!(
            "F = {f:.6} (band [0.96, 0.98]: {}), 1 - sqrt(1-F) = {:.4}, |F - engine| = {:.1e}, |F - Fock M=14| = {:.1e}",
            if in_band { "in" } else { "out" },
            1.0 - (1.0 - f).sqrt(),
            (f - f_engine).abs(),
            (f - f_fock).abs()
        ),
    )
}

fn c7_sum() -> Result<Outcome> {
    let (n, r) = (0.06, unit_gain_reflectivity());
    let f = sum_tms_fidelity(n, r, SUM_RA, SUM_RA)?;
    let st = GaussianState::tms(n)?.tensor(&GaussianState::tms(n)?);
    let ideal = ideal_sum(sum_gain(r)).embed(4, &[1, 3])?.apply(&st)?;
    let appr = approx_sum(SUM_RA, SUM_RA, r)?.embed(4, &[1, 3])?.apply(&st)?;
    let f_engine = fidelity_gaussian(&ideal, &appr)?;
    let in_band = (0.80..=0.86).contains(&f);
    let pass = in_band && (f - f_engine).abs() <= 1e-6;
    outcome(
        pass,
        format!(
            "F = {f:.6} (band [0.80, 0.86]: {}), 1 - sqrt(1-F) = {:.4}, |F - engine| = {:.1e}",
            if in_band { "in" } else { "out" },
            1.0 - (1.0 - f).sqrt(),
            (f - f_engine).abs()
        ),
    )
}

fn c8_ladders() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for ladder in standard_ladders()? {
        let gaps = ladder.gaps()?;
        let mono = gaps.windows(2).all(|w| w[1] <= w[0]);
        let last = *gaps.last().unwrap_or(&f64::INFINITY);
        pass &= mono && last < 1e-3;
        parts.push(format!("{}/{} {:.1e}{}", ladder.family, ladder.variant, last, if mono { "" } else { " (not monotone)" }));
    }
    outcome(pass, parts.join(", "))
}

fn c9_witnesses() -> Result<Outcome> {
    let (eta, delta) = (0.8f64, Complex64::new(2.0, 0.0));
    let alpha = Complex64::new(0.5, 0.0);
    let (din, dout, denv) = (40, 60, 30);
    let rho = FockDensity::from_pure(vec![din], &coherent_vec(delta, din));
    let ideal = FockDensity::from_pure(vec![dout], &coherent_vec(delta + alpha, dout));
    let (appr, _) = apply_truncated(&kraus_raw_displacement(eta, alpha, din, dout, denv)?, &rho, 0)?;
    let f_oracle = fidelity_fock(&ideal, &appr)?;
    let f_closed = coherent_loss_fidelity(delta, eta)?;
    let f_halved = (-0.5 * delta.norm_sqr() * (1.0 - eta.sqrt()).powi(2)).exp();
    let a_ok = (f_oracle - f_closed).abs() <= 1e-6;

    let rate = -f_oracle.ln() / (delta.norm_sqr() * (1.0 - eta.sqrt()).powi(2));
    let delta2 = -(1e-3f64).ln() / (rate * (1.0 - eta.sqrt()).powi(2));
    let f_far = coherent_loss_fidelity(Complex64::new(delta2.sqrt(), 0.0), eta)?;
    let b_ok = f_far < 0.01;

    let f_sum = sum_zvac_fidelity(1e-4, unit_gain_reflectivity(), 1.0, 1.0)?;
    let c_ok = f_sum < 0.05;
    outcome(
        a_ok && b_ok && c_ok,
        format!(
            "oracle {f_oracle:.9} vs exp(-|d|^2(1-sqrt eta)^2) {f_closed:.9} (halved exponent {f_halved:.6}); \
             F at |d|^2 = {delta2:.1} is {f_far:.1e}; SUM z=1e-4 F = {f_sum:.2e}"
        ),
    )
}

fn perturb(rng: &mut ChaCha8Rng, m: &ModeRecipe, r_cap: f64, nbar_cap: f64) -> ModeRecipe {
    ModeRecipe {
        nbar: (m.nbar + rng.random_range(0.0..0.05)).min(nbar_cap),
        r: (m.r + rng.random_range(-0.2..0.2)).clamp(-r_cap, r_cap),
        phi: m.phi + rng.random_range(-0.5..0.5),
        alpha: m.alpha + Complex64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)),
    }
}

fn energy_ok(st: &GaussianState) -> bool {
    (0..st.n_modes()).all(|k| st.mean_photon(k) <= 2.0)
}

fn c10_engine_vs_oracle() -> Result<Outcome> {
    let m = 30;
    let drop = 1e-13;
    let (r_cap, nbar_cap) = (0.6, 0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let (mut one, mut two) = (0, 0);
    while one < 50 {
        let a = random_mode(&mut rng, nbar_cap, r_cap, 1.0);
        let b = perturb(&mut rng, &a, r_cap, nbar_cap);
        let (ga, gb) = (a.gaussian()?, b.gaussian()?);
        if !energy_ok(&ga) || !energy_ok(&gb) {
            continue;
        }
        one += 1;
        let f_fock = fidelity_mixture(&a.fock(m, drop)?, &b.fock(m, drop)?)?;
        worst = worst.max((f_fock - fidelity_gaussian(&ga, &gb)?).abs());
    }
    while two < 50 {
        let pure = two % 2 == 0;
        let cap = if pure { 0.0 } else { 0.1 };
        let mode = |rng: &mut ChaCha8Rng| {
            let mut md = random_mode(rng, 1.0, r_cap, 0.8);
            md.nbar = if pure { 0.0 } else { md.nbar * cap };
            md
        };
        let a = TwoModeRecipe { a: mode(&mut rng), b: mode(&mut rng), theta: rng.random_range(0.0..PI), phi: rng.random_range(0.0..2.0 * PI) };
        let b = TwoModeRecipe {
            a: perturb(&mut rng, &a.a, r_cap, cap),
            b: perturb(&mut rng, &a.b, r_cap, cap),
            theta: a.theta + rng.random_range(-0.3..0.3),
            phi: a.phi,
        };
        let (ga, gb) = (a.gaussian()?, b.gaussian()?);
        if !energy_ok(&ga) || !energy_ok(&gb) {
            continue;
        }
        two += 1;
        let f_fock = fidelity_mixture(&a.fock(m, drop)?, &b.fock(m, drop)?)?;
        worst = worst.max((f_fock - fidelity_gaussian(&ga, &gb)?).abs());
    }
    outcome(worst <= 1e-4, format!("50 one-mode + 50 two-mode pairs at M=30, max |dF| = {worst:.2e}"))
}

fn c11_bounds() -> Result<Outcome> {
    let es = [0.06, 0.1, 0.2, 0.5, 1.0, 2.0];
    let mut tiny = Vec::new();
    for e in [0.06, 0.2] {
        tiny.push(g_angle_bound(FRAC_PI_4, 1e-4, e)?);
    }
    let limit_ok = tiny.iter().all(|&g| g <= 1e-4);
    let mut g_mono = true;
    for s in [0.05, 0.1, 0.2, 0.3, 0.5] {
        let row = es.iter().map(|&e| g_angle_bound(FRAC_PI_4, s, e)).collect::<Result<Vec<_>>>()?;
        g_mono &= row.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    }
    let ef = [0.5, 1.0, 2.0, 5.0, 10.0];
    let mut f_mono = true;
    let grid: Vec<f64> = (0..100).map(|k| k as f64 / 99.0).collect();
    let table = ef
        .iter()
        .map(|&e| grid.iter().map(|&eta| f_sine(eta, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    for row in &table {
        f_mono &= row.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    }
    for k in 0..grid.len() {
        f_mono &= table.windows(2).all(|w| w[1][k] >= w[0][k] - 1e-12);
    }
    outcome(
        limit_ok && g_mono && f_mono,
        format!(
            "g(pi/4, 1e-4, E) = {:.2e} (E=0.06), {:.2e} (E=0.2) vs 1e-4; g monotone in E: {g_mono}; f_sine monotone: {f_mono}",
            tiny[0], tiny[1]
        ),
    )
}

type Criterion = (u32, &'static str, f64, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "integer-energy displacement fidelity", 5.0, c1_integer_energy),
        (2, "d1 closed form vs oracle", 5.0, c2_d1_oracle),
        (3, "d1 <= d2 <= f at E=0.06, M=6", 120.0, c3_fig5),
        (4, "truncation sandwich", 60.0, c4_sandwich),
        (5, "projection bounds on random states", 30.0, c5_projection),
        (6, "squeezer headline fidelity", 30.0, c6_squeezer),
        (7, "SUM headline fidelity", 10.0, c7_sum),
        (8, "strong-convergence gap ladders", 30.0, c8_ladders),
        (9, "uniform-failure witnesses", 30.0, c9_witnesses),
        (10, "Gaussian fidelity vs Fock oracle", 120.0, c10_engine_vs_oracle),
        (11, "bound behaviours", 10.0, c11_bounds),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let res = run();
        let secs = t0.elapsed().as_secs_f64();
        let (pass, detail) = match res {
            Ok(o) => (o.pass && secs < budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name}: {detail} [{secs:.2}s / {budget:.0}s]",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
