//! Log-barrier Newton method for the energy-constrained diamond-norm SDP.
//!
//! Minimizes `−t Tr(WJ) − log det W − log det S − log det ρ − log s` with
//! `S = ρ⊗I − W`, `s = E − Tr(nρ)`, subject to `Tr ρ = 1`, for increasing `t`.
//! The `W` block of the Newton system is eliminated through a simultaneous
//! diagonalization of `W` and `S⁻¹`, leaving a `dim_r² + 1` complex system.

use nalgebra::Cholesky;
use num_complex::Complex64;

use super::problem::{EcdConfig, EcdProblem, EcdSolution, Residuals};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, eigvalsh, hermitize, kron, min_eigh, ptrace_second, trace_c, CMat, RMat};

fn re_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn chol(m: &CMat) -> Option<Cholesky<Complex64, nalgebra::Dyn>> {
    hermitize(m).cholesky()
}

fn logdet(ch: &Cholesky<Complex64, nalgebra::Dyn>) -> f64 {
    2.0 * ch.l_dirty().diagonal().iter().map(|z| z.re.ln()).sum::<f64>()
}

struct Point {
    w: CMat,
    rho: CMat,
}

struct Eval {
    /// Barrier terms only; the linear term is handled as an exact difference.
    logs: f64,
    obj: f64,
    w_chol: Cholesky<Complex64, nalgebra::Dyn>,
    s_chol: Cholesky<Complex64, nalgebra::Dyn>,
    r_chol: Cholesky<Complex64, nalgebra::Dyn>,
    slack: f64,
}

impl EcdProblem {
    fn lift(&self, rho: &CMat) -> CMat {
        kron(rho, &CMat::identity(self.dim_b(), self.dim_b()))
    }

    fn energy_of(&self, rho: &CMat) -> f64 {
        self.number().iter().enumerate().map(|(k, n)| n * rho[(k, k)].re).sum()
    }

    fn eval(&self, p: &Point) -> Option<Eval> {
        let slack = self.energy() - self.energy_of(&p.rho);
        if !(slack > 0.0) {
            return None;
        }
        let w_chol = chol(&p.w)?;
        let s_chol = chol(&(self.lift(&p.rho) - &p.w))?;
        let r_chol = chol(&p.rho)?;
        let obj = re_inner(&p.w, self.j());
        let logs = -logdet(&w_chol) - logdet(&s_chol) - logdet(&r_chol) - slack.ln();
        logs.is_finite().then_some(Eval { logs, obj, w_chol, s_chol, r_chol, slack })
    }

    /// Barrier parameter: total "rank" of the cone constraints.
    fn barrier_rank(&self) -> f64 {
        let d = self.dim_r() * self.dim_b();
        (2 * d + self.dim_r() + 1) as f64
    }
}

/// Newton direction `(ΔW, Δρ)` and the squared decrement.
fn newton(pb: &EcdProblem, ev: &Eval, t: f64) -> Result<(CMat, CMat, f64)> {
    let (dr, db) = (pb.dim_r(), pb.dim_b());
    let d = dr * db;
    let winv = ev.w_chol.inverse();
    let sinv = hermitize(&ev.s_chol.inverse());
    let rinv = hermitize(&ev.r_chol.inverse());
    let s = ev.slack;
    let ncol = |k: usize| pb.number()[k];

    let g_w = -pb.j() * c(t, 0.0) - &winv + &sinv;
    let mut g_r = -ptrace_second(&sinv, dr, db) - &rinv;
    for k in 0..dr {
        g_r[(k, k)] += ncol(k) / s;
    }

    // W = L Lᴴ, Lᴴ S⁻¹ L = Q Λ Qᴴ, P = L Q. For X = P Y Pᴴ the map
    // X ↦ W⁻¹XW⁻¹ + S⁻¹XS⁻¹ becomes Y ↦ Y ∘ (1 + λᵢλⱼ) in the P frame.
    let l = ev.w_chol.l();
    let (lam, q) = eigh(&hermitize(&(l.adjoint() * &sinv * &l)));
    let pm = &l * &q;
    let denom = CMat::from_fn(d, d, |i, j| c(1.0 + lam[i] * lam[j], 0.0));
    let linv = |r: &CMat| -> CMat {
        let core = (pm.adjoint() * r * &pm).component_div(&denom);
        hermitize(&(&pm * core * pm.adjoint()))
    };

    let dw0 = linv(&(-&g_w));
    let rhs = -&g_r + ptrace_second(&(&sinv * &dw0 * &sinv), dr, db);

    // Reduced operator on Δρ, index (a, b) → a·dr + b.
    let nn = dr * dr;
    let mut k = CMat::zeros(nn + 1, nn + 1);
    let blk = |m: &CMat, a: usize, b: usize| m.view((a * db, b * db), (db, db)).into_owned();
    for a in 0..dr {
        for b in 0..dr {
            for cc in 0..dr {
                let bac = blk(&sinv, a, cc);
                for dd in 0..dr {
                    let bdb = blk(&sinv, dd, b);
                    let mut acc = c(0.0, 0.0);
                    for beta in 0..db {
                        for gamma in 0..db {
                            acc += bac[(beta, gamma)] * bdb[(gamma, beta)];
                        }
                    }
                    acc += rinv[(a, cc)] * rinv[(dd, b)];
                    if a == b && cc == dd {
                        acc += c(ncol(a) * ncol(cc) / (s * s), 0.0);
                    }
                    k[(a * dr + b, cc * dr + dd)] = acc;
                }
            }
        }
    }
    let g = &sinv * &pm;
    let scale = CMat::from_fn(d, d, |i, j| c(1.0 / (1.0 + lam[i] * lam[j]).sqrt(), 0.0));
    // Term2 = T̃ᴴT̃ with columns vec(G_cᴴ G_d / √(1 + λᵢλⱼ)); formed as real products.
    let mut t_re = RMat::zeros(d * d, nn);
    let mut t_im = RMat::zeros(d * d, nn);
    for cc in 0..dr {
        let gc = g.rows(cc * db, db);
        for dd in 0..dr {
            let gd = g.rows(dd * db, db);
            let tcd = (gc.adjoint() * gd).component_mul(&scale);
            for (row, z) in tcd.iter().enumerate() {
                t_re[(row, cc * dr + dd)] = z.re;
                t_im[(row, cc * dr + dd)] = z.im;
            }
        }
    }
    let (tr_t, ti_t) = (t_re.transpose(), t_im.transpose());
    let g_re = &tr_t * &t_re + &ti_t * &t_im;
    let g_im = &tr_t * &t_im - &ti_t * &t_re;
    let term2 = CMat::from_fn(nn, nn, |i, j| c(g_re[(i, j)], g_im[(i, j)]));
    for i in 0..nn {
        for j in 0..nn {
            k[(i, j)] -= term2[(i, j)];
        }
    }
    for a in 0..dr {
        k[(a * dr + a, nn)] = c(1.0, 0.0);
        k[(nn, a * dr + a)] = c(1.0, 0.0);
    }
    let mut b = nalgebra::DVector::<Complex64>::zeros(nn + 1);
    for a in 0..dr {
        for bb in 0..dr {
            b[a * dr + bb] = rhs[(a, bb)];
        }
    }
    let x = k
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::NumericalBreakdown("singular reduced Newton system".into()))?;
    let d_rho = hermitize(&CMat::from_fn(dr, dr, |a, bb| x[a * dr + bb]));
    let d_w = &dw0 + linv(&(&sinv * pb.lift(&d_rho) * &sinv));
    let dec2 = -(re_inner(&g_w, &d_w) + re_inner(&g_r, &d_rho));
    Ok((d_w, d_rho, dec2))
}

/// Smallest `ν + μE` with `νI ⪰ T − μn` over `μ ≥ 0`, for `T = Tr_B Z`.
fn dual_value(pb: &EcdProblem, t_mat: &CMat) -> f64 {
    let phi = |mu: f64| {
        let mut m = t_mat.clone();
        for k in 0..pb.dim_r() {
            m[(k, k)] -= c(mu * pb.number()[k], 0.0);
        }
        let ev = eigvalsh(&m);
        ev.max() + mu * pb.energy()
    };
    let top = phi(0.0);
    if pb.energy() == 0.0 {
        return top;
    }
    let hi = ((top - t_mat[(0, 0)].re) / pb.energy()).max(0.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    for _ in 0..120 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = phi(x2);
        }
    }
    top.min(f1.min(f2)).min(phi(hi))
}

/// Dual value of `Z` after the smallest identity shift making `Z ⪰ 0` and `Z ⪰ J`.
fn shifted_dual(pb: &EcdProblem, mut z: CMat) -> f64 {
    z = hermitize(&z);
    let shift = (-min_eigh(&(&z - pb.j()))).max(-min_eigh(&z)).max(0.0);
    for i in 0..z.nrows() {
        z[(i, i)] += c(shift, 0.0);
    }
    dual_value(pb, &ptrace_second(&z, pb.dim_r(), pb.dim_b()))
}

/// Best dual bound from the two central-path estimates `S⁻¹/t` and `J + W⁻¹/t`.
fn certificate(pb: &EcdProblem, ev: &Eval, t: f64) -> f64 {
    let a = shifted_dual(pb, ev.s_chol.inverse() / c(t, 0.0));
    let b = shifted_dual(pb, pb.j() + ev.w_chol.inverse() / c(t, 0.0));
    a.min(b)
}

fn residuals(pb: &EcdProblem, w: &CMat, rho: &CMat) -> Residuals {
    Residuals {
        min_eig_w: min_eigh(w),
        min_eig_slack: min_eigh(&(pb.lift(rho) - w)),
        trace_err: (trace_c(rho).re - 1.0).abs(),
        energy_slack: pb.energy() - pb.energy_of(rho),
    }
}

/// Zero-energy case: only the vacuum is admissible, the optimum is `Tr[(J₀₀)₊]`.
fn solve_vacuum_only(pb: &EcdProblem) -> EcdSolution {
    let (dr, db) = (pb.dim_r(), pb.dim_b());
    let j00 = pb.j().view((0, 0), (db, db)).into_owned();
    let (vals, vecs) = eigh(&hermitize(&j00));
    let mut proj = CMat::zeros(db, db);
    let mut value = 0.0;
    for (k, &v) in vals.iter().enumerate() {
        if v > 0.0 {
            value += v;
            let col = vecs.column(k);
            proj += &col * col.adjoint();
        }
    }
    let mut rho = CMat::zeros(dr, dr);
    rho[(0, 0)] = c(1.0, 0.0);
    let mut w = CMat::zeros(dr * db, dr * db);
    w.view_mut((0, 0), (db, db)).copy_from(&proj);
    let residuals = residuals(pb, &w, &rho);
    EcdSolution { w, rho, primal: value, dual: value, dual_gap: 0.0, iterations: 0, residuals }
}

pub fn solve_ecd(pb: &EcdProblem) -> Result<EcdSolution> {
    solve_ecd_with(pb, &EcdConfig::default())
}

pub fn solve_ecd_with(pb: &EcdProblem, cfg: &EcdConfig) -> Result<EcdSolution> {
    if pb.energy() == 0.0 {
        return Ok(solve_vacuum_only(pb));
    }
    let dr = pb.dim_r();
    let mean_n = pb.number().iter().sum::<f64>() / dr as f64;
    let eps = if mean_n > 0.0 { (0.5 * pb.energy() / mean_n).min(0.5) } else { 0.5 };
    let mut rho = CMat::identity(dr, dr) * c(eps / dr as f64, 0.0);
    rho[(0, 0)] += c(1.0 - eps, 0.0);
    let w = pb.lift(&rho) * c(0.5, 0.0);
    let mut p = Point { w, rho };

    let m = pb.barrier_rank();
    let jn = crate::linalg::max_abs_c(pb.j()).max(1e-300);
    let mut t = (1.0 / jn).max(1e-3);
    let mut iters = 0;
    let mut best_dual = f64::INFINITY;
    loop {
        // Center.
        loop {
            let ev = pb.eval(&p).ok_or_else(|| Error::NumericalBreakdown("iterate left the interior".into()))?;
            if iters >= cfg.max_iter {
                break;
            }
            let (dw, dr_, dec2) = newton(pb, &ev, t)?;
            iters += 1;
            if dec2 / 2.0 < cfg.center_tol {
                break;
            }
            // The barrier value is O(t); compare differences so rounding in the
            // linear term does not swamp the Armijo test.
            let lin = re_inner(&dw, pb.j());
            let mut a = 1.0;
            let mut moved = false;
            while a > 1e-12 {
                let q = Point { w: &p.w + &dw * c(a, 0.0), rho: &p.rho + &dr_ * c(a, 0.0) };
                if let Some(e2) = pb.eval(&q) {
                    let df = -t * a * lin + (e2.logs - ev.logs);
                    if dec2 < 1e-2 || df <= -0.25 * a * dec2 {
                        p = q;
                        moved = true;
                        break;
                    }
                }
                a *= 0.5;
            }
            if !moved {
                break;
            }
        }
        let ev = pb.eval(&p).ok_or_else(|| Error::NumericalBreakdown("iterate left the interior".into()))?;
        let primal = ev.obj;
        let dual = best_dual.min(certificate(pb, &ev, t));
        best_dual = dual;
        let gap = dual - primal;
        if gap <= cfg.gap_tol && m / t <= cfg.path_tol {
            let residuals = residuals(pb, &p.w, &p.rho);
            return Ok(EcdSolution { w: p.w, rho: p.rho, primal, dual, dual_gap: gap, iterations: iters, residuals });
        }
        if iters >= cfg.max_iter || m / t < 1e-4 * cfg.path_tol.min(cfg.gap_tol) {
            return Err(Error::SolverStall(format!(
                "gap {gap:.3e} after {iters} Newton steps (primal {primal:.12}, dual {dual:.12})"
            )));
        }
        t *= cfg.t_growth;
    }
}
