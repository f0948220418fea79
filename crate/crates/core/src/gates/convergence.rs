//! Characteristic-function gaps along parameter ladders, and the inputs that
//! witness the lack of uniform convergence.

use num_complex::Complex64;

use super::factory::{gate_pair, GateFamily, GatePair};
use crate::error::Result;
use crate::gaussian::{CharFnEval, GaussianState};

pub const GRID_POINTS: usize = 17;
pub const GRID_HALF_WIDTH: f64 = 3.0;

/// `sup_r |χ_approx(r) − χ_ideal(r)|` over the product grid
/// `{−3, …, 3}^{2n}` with 17 points per axis.
pub fn sup_char_gap(pair: &GatePair, st: &GaussianState) -> Result<f64> {
    let n = 2 * pair.n_modes();
    let ideal = CharFnEval::new(&pair.ideal.apply(st)?);
    let terms = pair.approx.char_terms(st)?;
    let axis: Vec<f64> = (0..GRID_POINTS)
        .map(|k| -GRID_HALF_WIDTH + 2.0 * GRID_HALF_WIDTH * k as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let total = GRID_POINTS.pow(n as u32);
    let mut gap = 0.0f64;
    let mut r = vec![0.0; n];
    for idx in 0..total {
        let mut k = idx;
        for slot in r.iter_mut().rev() {
            *slot = axis[k % GRID_POINTS];
            k /= GRID_POINTS;
        }
        let approx: Complex64 = terms.iter().map(|(w, ev)| *w * ev.eval(&r)).sum();
        gap = gap.max((approx - ideal.eval(&r)).norm());
    }
    Ok(gap)
}

/// A gate family's documented ladder: parameter values, the pairs, and the
/// fixed low-energy input.
pub struct Ladder {
    pub family: GateFamily,
    pub variant: &'static str,
    pub rungs: Vec<f64>,
    pub pairs: Vec<GatePair>,
    pub input: GaussianState,
}

impl Ladder {
    pub fn gaps(&self) -> Result<Vec<f64>> {
        self.pairs.iter().map(|p| sup_char_gap(p, &self.input)).collect()
    }
}

fn build(family: GateFamily, variant: &'static str, rungs: &[f64], input: GaussianState, id: impl Fn(f64) -> String) -> Result<Ladder> {
    let pairs = rungs.iter().map(|&x| gate_pair(&id(x))).collect::<Result<Vec<_>>>()?;
    Ok(Ladder { family, variant, rungs: rungs.to_vec(), pairs, input })
}

pub const ETA_LADDER: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
pub const RE_LADDER: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
pub const SIGMA_LADDER: [f64; 4] = [0.5, 0.1, 0.02, 0.004];

/// One ladder per approximation studied.
pub fn standard_ladders() -> Result<Vec<Ladder>> {
    let coh = GaussianState::coherent(Complex64::new(0.5, 0.0));
    let coh_vac = coh.tensor(&GaussianState::vacuum(1));
    let sq = GaussianState::squeezed_vacuum(0.6)?;
    Ok(vec![
        build(GateFamily::Displacement, "loss", &ETA_LADDER, coh.clone(), |x| format!("displacement:eta={x},alpha=1+0.5i"))?,
        build(GateFamily::Beamsplitter, "loss", &ETA_LADDER, coh_vac.clone(), |x| {
            format!("beamsplitter:eta=0.5,phi=0,eta_loss={x}")
        })?,
        build(GateFamily::Beamsplitter, "angle_mixture", &SIGMA_LADDER, coh_vac, |x| {
            format!("beamsplitter:theta=0.7853981633974483,sigma={x}")
        })?,
        build(GateFamily::Phase, "loss", &ETA_LADDER, coh.clone(), |x| format!("phase:phi=0.7853981633974483,eta_loss={x}"))?,
        build(GateFamily::Phase, "angle_mixture", &SIGMA_LADDER, coh, |x| {
            format!("phase:phi=0.7853981633974483,sigma={x}")
        })?,
        build(GateFamily::Squeezer, "offline", &RE_LADDER, sq.clone(), |x| format!("squeezer:r=0.46,rE={x}"))?,
        build(GateFamily::Sum, "offline", &RE_LADDER, sq.tensor(&sq), |x| format!("sum:rA={x},rB={x}"))?,
    ])
}

/// `|δ|²` at which the coherent-input fidelity `exp(−|δ|²(1−√η)²)` equals `target`.
pub fn displacement_witness_delta2(eta: f64, target: f64) -> f64 {
    -target.ln() / (1.0 - eta.sqrt()).powi(2)
}
