//! Independent lower bound for cross-checking the barrier solver.
//!
//! For fixed `ρ` the inner maximum over `W` is `Tr[(√ρ J √ρ)₊]` (with `√ρ⊗I`),
//! a concave function of `ρ`. This module restricts `ρ` to be diagonal in the
//! number basis and runs Frank–Wolfe over the energy-constrained simplex.

use super::problem::EcdProblem;
use crate::error::Result;
use crate::linalg::{c, eigh, hermitize, CMat};

#[derive(Clone, Debug)]
pub struct AscentResult {
    pub value: f64,
    pub populations: Vec<f64>,
    pub iterations: usize,
}

/// `(Tr[K₊], Σ_β ⟨kβ|K₊|kβ⟩)` for `K = (√ρ⊗I) J (√ρ⊗I)`, `ρ = diag(p)`.
fn inner(pb: &EcdProblem, p: &[f64]) -> (f64, Vec<f64>) {
    let (dr, db) = (pb.dim_r(), pb.dim_b());
    let sq: Vec<f64> = p.iter().map(|x| x.max(0.0).sqrt()).collect();
    let k = CMat::from_fn(dr * db, dr * db, |i, j| pb.j()[(i, j)] * c(sq[i / db] * sq[j / db], 0.0));
    let (vals, vecs) = eigh(&hermitize(&k));
    let mut value = 0.0;
    let mut diag = vec![0.0; dr];
    for (idx, &v) in vals.iter().enumerate() {
        if v <= 0.0 {
            continue;
        }
        value += v;
        let col = vecs.column(idx);
        for (row, z) in col.iter().enumerate() {
            diag[row / db] += v * z.norm_sqr();
        }
    }
    (value, diag)
}

/// Value of the inner maximum at diagonal `ρ = diag(p)`.
pub fn diagonal_value(pb: &EcdProblem, p: &[f64]) -> f64 {
    inner(pb, p).0
}

/// Vertices of `{p ≥ 0, Σp = 1, Σ n p ≤ E}`.
fn vertices(pb: &EcdProblem) -> Vec<Vec<f64>> {
    let n = pb.number();
    let e = pb.energy();
    let d = n.len();
    let mut out = Vec::new();
    for i in 0..d {
        if n[i] <= e {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            out.push(v);
            for j in 0..d {
                if n[j] > e {
                    let w = (e - n[i]) / (n[j] - n[i]);
                    let mut v = vec![0.0; d];
                    v[i] = 1.0 - w;
                    v[j] = w;
                    out.push(v);
                }
            }
        }
    }
    out
}

pub fn diagonal_ascent(pb: &EcdProblem, iterations: usize) -> Result<AscentResult> {
    let d = pb.dim_r();
    let verts = vertices(pb);
    let mean_n = pb.number().iter().sum::<f64>() / d as f64;
    let eps = if mean_n > 0.0 { (0.5 * pb.energy() / mean_n).min(0.5) } else { 0.5 };
    let mut p: Vec<f64> = (0..d).map(|k| eps / d as f64 + if k == 0 { 1.0 - eps } else { 0.0 }).collect();
    let mut best = diagonal_value(pb, &p);
    for it in 0..iterations {
        // Supergradient Tr_B Z* with Z* = √ρ⁻¹ K₊ √ρ⁻¹, evaluated slightly inside the simplex.
        let pf: Vec<f64> = p.iter().map(|x| 0.999 * x + 0.001 / d as f64).collect();
        let (_, diag) = inner(pb, &pf);
        let grad: Vec<f64> = diag.iter().zip(&pf).map(|(g, q)| g / q).collect();
        let dot = |v: &[f64]| v.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
        let s = verts.iter().max_by(|a, b| dot(a).total_cmp(&dot(b))).expect("vertex set is non-empty").clone();
        let along = |g: f64| -> Vec<f64> { p.iter().zip(&s).map(|(a, b)| a + g * (b - a)).collect() };
        let f = |g: f64| diagonal_value(pb, &along(g));
        let gr = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0, 1.0);
        let (mut x1, mut x2) = (b - gr * (b - a), a + gr * (b - a));
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..40 {
            if f1 >= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            }
        }
        let (g, v) = [(0.0, best), (x1, f1), (x2, f2), (1.0, f(1.0))]
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        if v <= best + 1e-14 {
            return Ok(AscentResult { value: best, populations: p, iterations: it });
        }
        p = along(g);
        best = v;
    }
    Ok(AscentResult { value: best, populations: p, iterations })
}
