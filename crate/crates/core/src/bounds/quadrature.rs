//! Adaptive Gauss–Kronrod (7/15) integration and Golub–Welsch Gauss rules.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::RMat;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-8, max_subdivisions: 10_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrate over `[a, b]`, first splitting at the supplied `breaks` (integrand kinks).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], cfg: QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::QuadratureFailure(format!("bad interval [{a}, {b}]")));
    }
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut segs: Vec<(f64, f64, f64, f64)> = pts
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let err: f64 = segs.iter().map(|s| s.3).sum();
        let value: f64 = segs.iter().map(|s| s.2).sum();
        if !value.is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand".into()));
        }
        if err <= cfg.abs_tol {
            return Ok(QuadResult { value, abs_err: err, intervals: segs.len() });
        }
        if segs.len() >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure(format!("error {err:.3e} after {} intervals", segs.len())));
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = segs.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
}

fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = RMat::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let e = SymmetricEigen::new(j);
    let mut nw: Vec<(f64, f64)> =
        (0..n).map(|k| (e.eigenvalues[k], mu0 * e.eigenvectors[(0, k)].powi(2))).collect();
    nw.sort_by(|a, b| a.0.total_cmp(&b.0));
    nw.into_iter().unzip()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    golub_welsch(&vec![0.0; n], &off, 2.0)
}

/// Gauss–Hermite nodes and weights for the weight `e^{−t²}`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&vec![0.0; n], &off, std::f64::consts::PI.sqrt())
}
