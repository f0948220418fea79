//! `gaussgate check`: invariant suites with a JSON-lines report.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use gaussgate::bounds::{
    coherent_loss_fidelity, d1, f_sine, g_angle_bound, optimal_state, squeezer_tms_fidelity, sum_tms_fidelity, SUM_RA,
};
use gaussgate::fock::{
    apply_truncated, coherent_vec, fidelity_fock, fidelity_mixture, kraus_pure_loss, kraus_raw_displacement,
    op_displacement_rect, op_number, trace_distance_fock, trace_norm_diff_mixture, FockDensity, FockMixture, ModeRecipe,
    TwoModeRecipe,
};
use gaussgate::gates::{
    approx_squeezer, approx_sum, gate_pair, ideal_squeezer, ideal_sum, standard_ladders, sum_gain, unit_gain_reflectivity,
    ApproxGate,
};
use gaussgate::gaussian::{fidelity_gaussian, GaussianState};
use gaussgate::linalg::CMat;
use gaussgate::sdp::{d2_displacement, d2_solution, diagonal_ascent, loss_problem, EcdConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(CliError::BadArgument(format!("level must be fast or full, got {s}"))),
        }
    }
}

/// Deliberate corruptions for exercising the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    NegateFSine,
}

impl std::str::FromStr for Mutation {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "none" => Ok(Mutation::None),
            "negate-f-sine" => Ok(Mutation::NegateFSine),
            _ => Err(CliError::BadArgument(format!("unknown mutation {s}"))),
        }
    }
}

pub struct Ctx {
    mutation: Mutation,
}

impl Ctx {
    fn f_sine(&self, eta: f64, e: f64) -> gaussgate::Result<f64> {
        let v = f_sine(eta, e)?;
        Ok(match self.mutation {
            Mutation::None => v,
            Mutation::NegateFSine => -v,
        })
    }
}

type Outcome = gaussgate::Result<(bool, String)>;

struct Check {
    id: &'static str,
    anchor: &'static str,
    full_only: bool,
    run: fn(&Ctx) -> Outcome,
}

#[derive(Serialize)]
struct Line<'a> {
    check: &'a str,
    anchor: &'a str,
    pass: bool,
    detail: String,
    seconds: f64,
}

#[derive(Serialize)]
struct Summary<'a> {
    level: &'a str,
    passed: usize,
    failed: usize,
}

const CHECKS: &[Check] = &[
    Check { id: "f_sine_range", anchor: "sine distance lies in [0,1] and vanishes at unit transmissivity", full_only: false, run: f_sine_range },
    Check { id: "bound_ordering", anchor: "trace-distance lower bound d1 never exceeds the sine-distance upper bound f", full_only: false, run: bound_ordering },
    Check { id: "f_sine_monotone", anchor: "f decreases in transmissivity and increases in energy", full_only: false, run: f_sine_monotone },
    Check { id: "integer_energy_fidelity", anchor: "fidelity on the optimal input equals eta^E at integer energy (Fock oracle)", full_only: false, run: integer_energy },
    Check { id: "d1_vs_oracle", anchor: "d1 closed form equals half the output trace norm (Fock oracle)", full_only: false, run: d1_oracle },
    Check { id: "coherent_exponent", anchor: "coherent-state fidelity exp(-|delta|^2(1-sqrt eta)^2) (Fock oracle)", full_only: false, run: coherent_exponent },
    Check { id: "gate_zoo_cptp", anchor: "every gate and approximation is a valid Gaussian channel", full_only: false, run: gate_zoo_cptp },
    Check { id: "squeezer_engine", anchor: "squeezer closed-form fidelity matches the Gaussian engine", full_only: false, run: squeezer_engine },
    Check { id: "sum_engine", anchor: "SUM closed-form fidelity matches the Gaussian engine", full_only: false, run: sum_engine },
    Check { id: "gaussian_vs_fock_one_mode", anchor: "Gaussian fidelity engine agrees with the Fock oracle (one mode)", full_only: false, run: engine_one_mode },
    Check { id: "projection_bounds", anchor: "projection onto M photons: pass probability and gentle-measurement bounds", full_only: false, run: projection_fast },
    Check { id: "g_angle_monotone", anchor: "beamsplitter angle-mixture bound grows with energy and width", full_only: false, run: g_angle_monotone },
    Check { id: "ladders_one_mode", anchor: "characteristic-function gaps shrink along the single-mode ladders", full_only: false, run: ladders_one_mode },
    Check { id: "ladders_two_mode", anchor: "characteristic-function gaps shrink along the two-mode ladders", full_only: true, run: ladders_two_mode },
    Check { id: "d1_d2_f_overlap", anchor: "d1 <= d2 <= f on the E=0.06, M=6 transmissivity grid, with certified dual gap", full_only: true, run: overlap },
    Check { id: "truncation_sandwich", anchor: "truncated diamond distance grows with M by at most 2 sqrt(E/(M+1))", full_only: true, run: sandwich },
    Check { id: "sdp_ascent_crosscheck", anchor: "diagonal-input ascent stays below and close to the SDP value", full_only: true, run: ascent_crosscheck },
    Check { id: "projection_bounds_m60", anchor: "projection bounds at M_full = 60", full_only: true, run: projection_full },
    Check { id: "gaussian_vs_fock_two_mode", anchor: "Gaussian fidelity engine agrees with the Fock oracle (two modes)", full_only: true, run: engine_two_mode },
];

pub fn run(level: Level, mutation: Mutation, out: &mut dyn std::io::Write) -> CliResult<bool> {
    let ctx = Ctx { mutation };
    let (mut passed, mut failed) = (0, 0);
    for c in CHECKS.iter().filter(|c| level == Level::Full || !c.full_only) {
        let t0 = Instant::now();
        let (pass, detail) = match (c.run)(&ctx) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let seconds = (t0.elapsed().as_secs_f64() * 1000.0).round() / 1000.0;
        if pass {
            passed += 1;
        } else {
            failed += 1;
        }
        writeln!(out, "{}", serde_json::to_string(&Line { check: c.id, anchor: c.anchor, pass, detail, seconds })?)?;
    }
    let level = if level == Level::Full { "full" } else { "fast" };
    writeln!(out, "{}", serde_json::to_string(&Summary { level, passed, failed })?)?;
    Ok(failed == 0)
}

fn f_sine_range(ctx: &Ctx) -> Outcome {
    let mut ok = true;
    for e in [0.06, 0.5, 1.0, 2.5, 10.0] {
        ok &= ctx.f_sine(1.0, e)?.abs() < 1e-15;
        for k in 0..=20 {
            let v = ctx.f_sine(k as f64 / 20.0, e)?;
            ok &= (0.0..=1.0).contains(&v);
        }
    }
    Ok((ok, "eta grid 0..1 step 0.05, E in {0.06, 0.5, 1, 2.5, 10}".into()))
}

fn bound_ordering(ctx: &Ctx) -> Outcome {
    let mut worst = f64::INFINITY;
    for e in [0.06, 0.3, 0.7, 0.95] {
        for k in 0..=20 {
            let eta = k as f64 / 20.0;
            worst = worst.min(ctx.f_sine(eta, e)? - d1(eta, e)?);
        }
    }
    Ok((worst >= -1e-12, format!("min f - d1 = {worst:.3e}")))
}

fn f_sine_monotone(ctx: &Ctx) -> Outcome {
    let es = [0.5, 1.0, 2.0, 5.0, 10.0];
    let mut ok = true;
    for k in 0..100 {
        let (a, b) = (k as f64 / 100.0, (k + 1) as f64 / 100.0);
        for w in es.windows(2) {
            ok &= ctx.f_sine(a, w[0])? <= ctx.f_sine(a, w[1])? + 1e-12;
        }
        for &e in &es {
            ok &= ctx.f_sine(b, e)? <= ctx.f_sine(a, e)? + 1e-12;
        }
    }
    Ok((ok, "101 x 5 grid".into()))
}

fn integer_energy(_: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for eta in [0.5, 0.9] {
        for e in [1.0, 2.0] {
            let psi = optimal_state(e, 20)?;
            let (out, _) = apply_truncated(&kraus_pure_loss(eta, 20)?, &psi, 0)?;
            worst = worst.max((fidelity_fock(&psi, &out)? - eta.powf(e)).abs());
        }
    }
    Ok((worst <= 1e-6, format!("max |F - eta^E| = {worst:.2e} at M=20")))
}

fn d1_oracle(_: &Ctx) -> Outcome {
    let (e, m) = (0.06, 12);
    let alpha = Complex64::new(0.5, 0.2);
    let psi = optimal_state(e, m)?;
    let ideal = psi.conjugate_mode(0, &op_displacement_rect(alpha, 40, m + 1)?.mat)?;
    let mut worst: f64 = 0.0;
    for eta in [0.1, 0.5, 0.9] {
        let (appr, _) = apply_truncated(&kraus_raw_displacement(eta, alpha, m + 1, 40, 30)?, &psi, 0)?;
        worst = worst.max((0.5 * trace_distance_fock(&ideal, &appr)? - d1(eta, e)?).abs());
    }
    Ok((worst <= 1e-6, format!("max deviation {worst:.2e} at M=12")))
}

fn coherent_exponent(_: &Ctx) -> Outcome {
    let (eta, delta, alpha) = (0.8, Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0));
    let rho = FockDensity::from_pure(vec![40], &coherent_vec(delta, 40));
    let ideal = FockDensity::from_pure(vec![60], &coherent_vec(delta + alpha, 60));
    let (appr, _) = apply_truncated(&kraus_raw_displacement(eta, alpha, 40, 60, 30)?, &rho, 0)?;
    let f = fidelity_fock(&ideal, &appr)?;
    let want = coherent_loss_fidelity(delta, eta)?;
    Ok(((f - want).abs() <= 1e-6, format!("oracle {f:.9}, closed form {want:.9}")))
}

fn gate_zoo_cptp(_: &Ctx) -> Outcome {
    let ids = [
        "displacement:eta=0.9,alpha=1+0.5i",
        "beamsplitter:eta=0.3,phi=0.4,eta_loss=0.95",
        "phase:phi=1.1,eta_loss=0.9",
        "squeezer:r=0.46,rE=2",
        "sum:rA=1.726,rB=1.726",
    ];
    let mut worst = f64::INFINITY;
    for id in ids {
        let p = gate_pair(id)?;
        worst = worst.min(p.ideal.cptp_min_eig());
        if let ApproxGate::Channel(ch) = &p.approx {
            worst = worst.min(ch.cptp_min_eig());
        }
    }
    Ok((worst >= -1e-9, format!("min eigenvalue of Y + i(Omega - X Omega X^T) = {worst:.2e}")))
}

fn squeezer_engine(_: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for (r, re, n) in [(0.46, 2.99, 0.06), (0.8, 0.5, 1.3), (0.2, 2.0, 0.0)] {
        let st = GaussianState::tms(n)?;
        let ideal = ideal_squeezer(r).embed(2, &[0])?.apply(&st)?;
        let appr = approx_squeezer(r, re)?.embed(2, &[0])?.apply(&st)?;
        worst = worst.max((fidelity_gaussian(&ideal, &appr)? - squeezer_tms_fidelity(r, re, n)?).abs());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
}

fn sum_engine(_: &Ctx) -> Outcome {
    let r = unit_gain_reflectivity();
    let mut worst: f64 = 0.0;
    for (n, ra, rb) in [(0.06, SUM_RA, SUM_RA), (0.5, 0.3, 1.2)] {
        let st = GaussianState::tms(n)?.tensor(&GaussianState::tms(n)?);
        let ideal = ideal_sum(sum_gain(r)).embed(4, &[1, 3])?.apply(&st)?;
        let appr = approx_sum(ra, rb, r)?.embed(4, &[1, 3])?.apply(&st)?;
        worst = worst.max((fidelity_gaussian(&ideal, &appr)? - sum_tms_fidelity(n, r, ra, rb)?).abs());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
}

fn random_mode(rng: &mut ChaCha8Rng, nbar: f64, r: f64, alpha: f64) -> ModeRecipe {
    ModeRecipe {
        nbar: rng.random_range(0.0..nbar),
        r: rng.random_range(-r..r),
        phi: rng.random_range(0.0..2.0 * PI),
        alpha: Complex64::from_polar(rng.random_range(0.0..alpha), rng.random_range(0.0..2.0 * PI)),
    }
}

fn nudge(rng: &mut ChaCha8Rng, m: &ModeRecipe) -> ModeRecipe {
    ModeRecipe {
        nbar: m.nbar * rng.random_range(0.5..1.5),
        r: m.r + rng.random_range(-0.15..0.15),
        phi: m.phi + rng.random_range(-0.4..0.4),
        alpha: m.alpha + Complex64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)),
    }
}

fn engine_one_mode(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = random_mode(&mut rng, 0.15, 0.4, 0.8);
        let b = nudge(&mut rng, &a);
        let f = fidelity_mixture(&a.fock(30, 1e-13)?, &b.fock(30, 1e-13)?)?;
        worst = worst.max((f - fidelity_gaussian(&a.gaussian()?, &b.gaussian()?)?).abs());
    }
    Ok((worst <= 1e-4, format!("10 pairs at M=30, max deviation {worst:.2e}")))
}

fn engine_two_mode(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let scale = if k % 2 == 0 { 0.0 } else { 0.05 };
        let mut a = TwoModeRecipe {
            a: random_mode(&mut rng, 1.0, 0.4, 0.7),
            b: random_mode(&mut rng, 1.0, 0.4, 0.7),
            theta: rng.random_range(0.0..PI),
            phi: rng.random_range(0.0..2.0 * PI),
        };
        a.a.nbar *= scale;
        a.b.nbar *= scale;
        let b = TwoModeRecipe { a: nudge(&mut rng, &a.a), b: nudge(&mut rng, &a.b), theta: a.theta + 0.2, phi: a.phi };
        let f = fidelity_mixture(&a.fock(30, 1e-13)?, &b.fock(30, 1e-13)?)?;
        worst = worst.max((f - fidelity_gaussian(&a.gaussian()?, &b.gaussian()?)?).abs());
    }
    Ok((worst <= 1e-4, format!("8 pairs at M=30, max deviation {worst:.2e}")))
}

fn projection(m_full: usize, states: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut worst) = (0, f64::INFINITY);
    while done < states {
        let rc = random_mode(&mut rng, 0.6, 0.6, 1.0);
        let rho = rc.fock(m_full, 1e-15)?.normalized();
        let e = rho.expect_mode(0, &op_number(m_full))?.re;
        if e > 2.0 {
            continue;
        }
        done += 1;
        for m in [5usize, 10, 20] {
            let (proj, p) = rho.project_truncate(m)?;
            let f = proj.factor();
            let mut padded = CMat::zeros(m_full + 1, f.ncols());
            padded.view_mut((0, 0), (f.nrows(), f.ncols())).copy_from(f);
            let dist = 0.5 * trace_norm_diff_mixture(&rho, &FockMixture::new(vec![m_full + 1], padded)?)?;
            let bound = e / (m as f64 + 1.0);
            worst = worst.min(p - (1.0 - bound)).min(bound.sqrt() - dist);
        }
    }
    Ok((worst >= 0.0, format!("{states} states at M_full={m_full}, min margin {worst:.3e}")))
}

fn projection_fast(_: &Ctx) -> Outcome {
    projection(30, 10, 303)
}

fn projection_full(_: &Ctx) -> Outcome {
    projection(60, 30, 404)
}

fn g_angle_monotone(_: &Ctx) -> Outcome {
    let es = [0.06, 0.2, 0.5, 1.0];
    let ss = [0.05, 0.1, 0.3, 0.6];
    let mut ok = true;
    let mut table = Vec::new();
    for &s in &ss {
        table.push(es.iter().map(|&e| g_angle_bound(FRAC_PI_4, s, e)).collect::<gaussgate::Result<Vec<_>>>()?);
    }
    for row in &table {
        ok &= row.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    }
    for j in 0..es.len() {
        ok &= table.windows(2).all(|w| w[1][j] >= w[0][j] - 1e-12);
    }
    Ok((ok, "sigma x E grid 4 x 4 at theta = pi/4".into()))
}

fn ladders(two_mode: bool) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for l in standard_ladders()? {
        if (l.input.n_modes() == 2) != two_mode {
            continue;
        }
        let g = l.gaps()?;
        let last = *g.last().unwrap_or(&f64::INFINITY);
        ok &= g.windows(2).all(|w| w[1] <= w[0]) && last < 1e-3;
        parts.push(format!("{}/{} {last:.1e}", l.family, l.variant));
    }
    Ok((ok, parts.join(", ")))
}

fn ladders_one_mode(_: &Ctx) -> Outcome {
    ladders(false)
}

fn ladders_two_mode(_: &Ctx) -> Outcome {
    ladders(true)
}

fn overlap(ctx: &Ctx) -> Outcome {
    let cfg = EcdConfig::default();
    let etas: Vec<f64> = (1..20).map(|k| k as f64 * 0.05).collect();
    let sols = etas.par_iter().map(|&eta| d2_solution(eta, 0.06, 6, &cfg)).collect::<gaussgate::Result<Vec<_>>>()?;
    let (mut slack, mut gap) = (f64::INFINITY, 0.0f64);
    for (&eta, s) in etas.iter().zip(&sols) {
        slack = slack.min(s.primal - d1(eta, 0.06)?).min(ctx.f_sine(eta, 0.06)? - s.primal);
        gap = gap.max(s.dual_gap);
    }
    Ok((slack >= -1e-6 && gap <= 1e-6, format!("min slack {slack:.2e}, max dual gap {gap:.2e}")))
}

fn sandwich(_: &Ctx) -> Outcome {
    let (a, b) = (d2_displacement(0.5, 0.06, 4)?, d2_displacement(0.5, 0.06, 8)?);
    let ok = a <= b + 1e-6 && b - a <= 2.0 * (0.06f64 / 5.0).sqrt();
    Ok((ok, format!("d2(M=4) = {a:.9}, d2(M=8) = {b:.9}")))
}

fn ascent_crosscheck(_: &Ctx) -> Outcome {
    let pb = loss_problem(0.5, 0.06, 4)?;
    let sol = d2_solution(0.5, 0.06, 4, &EcdConfig::default())?;
    let asc = diagonal_ascent(&pb, 400)?;
    let ok = asc.value <= sol.dual + 1e-9 && (sol.primal - asc.value).abs() <= 1e-4;
    Ok((ok, format!("ascent {:.9}, SDP {:.9}", asc.value, sol.primal)))
}
