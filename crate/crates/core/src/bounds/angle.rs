use super::quadrature::{integrate, QuadConfig};
use crate::error::{check_range, Result};
use crate::gates::TruncatedNormalParams;

pub fn trunc_normal_pdf(x: f64, loc: f64, scale: f64, lo: f64, hi: f64) -> Result<f64> {
    TruncatedNormalParams::new(loc, scale, lo, hi)?.pdf(x)
}

/// `∫₀^{2π} p(θ′; loc, scale) · 2√(E|θ′ − loc|) dθ′`.
///
/// Upper bound on half the energy-constrained distance of the random-angle
/// beamsplitter and phase-rotation mixtures from their ideal gates.
pub fn g_angle_bound(loc: f64, scale: f64, e: f64) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    check_range((0.0..=two_pi).contains(&loc), || format!("loc = {loc} outside [0, 2π]"))?;
    check_range(e >= 0.0 && e.is_finite(), || format!("E = {e} must be non-negative"))?;
    let p = TruncatedNormalParams::on_circle(loc, scale)?;
    if e == 0.0 {
        return Ok(0.0);
    }
    let mut breaks = vec![loc];
    for k in 0..8 {
        let w = scale * f64::from(1u32 << k);
        breaks.extend([loc - w, loc + w]);
    }
    breaks.retain(|&b| b > 0.0 && b < two_pi);
    let res = integrate(
        |x| p.pdf(x).unwrap_or(0.0) * 2.0 * (e * (x - loc).abs()).sqrt(),
        0.0,
        two_pi,
        &breaks,
        QuadConfig::default(),
    )?;
    Ok(res.value)
}
