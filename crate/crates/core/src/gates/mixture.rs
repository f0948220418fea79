use num_complex::Complex64;
use statrs::function::erf::erfc;

use crate::bounds::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::gaussian::{
    char_fn, fidelity_gaussian, CharFnEval, symplectic_bs, symplectic_phase, GaussianChannel, GaussianState, PhasePoint,
};

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Normal density with location `loc` and scale `scale`, truncated to `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedNormalParams {
    pub loc: f64,
    pub scale: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TruncatedNormalParams {
    pub fn new(loc: f64, scale: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::OutOfRange(format!("scale = {scale} must be positive")));
        }
        if !(lo < hi) || !loc.is_finite() {
            return Err(Error::OutOfRange(format!("support [{lo}, {hi}] or loc = {loc} invalid")));
        }
        Ok(Self { loc, scale, lo, hi })
    }

    /// Angle density on `[0, 2π]`.
    pub fn on_circle(loc: f64, scale: f64) -> Result<Self> {
        Self::new(loc, scale, 0.0, 2.0 * std::f64::consts::PI)
    }

    pub fn mass(&self) -> f64 {
        std_normal_cdf((self.hi - self.loc) / self.scale) - std_normal_cdf((self.lo - self.loc) / self.scale)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(self.lo..=self.hi).contains(&x) {
            return Err(Error::OutOfRange(format!("x = {x} outside [{}, {}]", self.lo, self.hi)));
        }
        Ok(std_normal_pdf((x - self.loc) / self.scale) / (self.scale * self.mass()))
    }

    /// Nodes and weights of a composite Gauss–Legendre rule for `∫ p(x) f(x) dx`.
    ///
    /// The window is clipped to `loc ± 12·scale`; the discarded mass is below 1e-30.
    pub fn rule(&self, panels: usize, order: usize) -> Vec<(f64, f64)> {
        let a = self.lo.max(self.loc - 12.0 * self.scale);
        let b = self.hi.min(self.loc + 12.0 * self.scale);
        let (t, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * order);
        for k in 0..panels {
            let (pa, pb) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            for (ti, wi) in t.iter().zip(&w) {
                let x = 0.5 * (pa + pb) + 0.5 * (pb - pa) * ti;
                let p = std_normal_pdf((x - self.loc) / self.scale) / (self.scale * self.mass());
                out.push((x, 0.5 * (pb - pa) * wi * p));
            }
        }
        out
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.rule(DEFAULT_PANELS, DEFAULT_ORDER).iter().map(|&(x, w)| w * f(x)).sum()
    }
}

const DEFAULT_PANELS: usize = 8;
const DEFAULT_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixtureFamily {
    /// `B^{θ′}` at `φ = 0` on two modes.
    Beamsplitter,
    /// `U^{φ′} = exp(i n̂ φ′)` on one mode.
    Phase,
}

/// Random-angle gate: `∫ p(θ′) G^{θ′} dθ′`.
#[derive(Clone, Debug)]
pub struct Mixture {
    pub density: TruncatedNormalParams,
    pub family: MixtureFamily,
}

impl Mixture {
    pub fn new(loc: f64, scale: f64, family: MixtureFamily) -> Result<Self> {
        Ok(Self { density: TruncatedNormalParams::on_circle(loc, scale)?, family })
    }

    pub fn n_modes(&self) -> usize {
        match self.family {
            MixtureFamily::Beamsplitter => 2,
            MixtureFamily::Phase => 1,
        }
    }

    pub fn base(&self, angle: f64) -> GaussianChannel {
        match self.family {
            MixtureFamily::Beamsplitter => symplectic_bs(angle, 0.0),
            MixtureFamily::Phase => symplectic_phase(angle),
        }
    }

    pub fn char_fn(&self, st: &GaussianState, r: &PhasePoint) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.density.rule(DEFAULT_PANELS, DEFAULT_ORDER) {
            acc += w * char_fn(&self.base(x).apply(st)?, r)?;
        }
        Ok(acc)
    }

    /// `∫ p(θ′) F(ref, G^{θ′}(st)) dθ′`; equals the fidelity of `ref` with the
    /// mixed output whenever `ref` is pure.
    pub fn fidelity_with(&self, reference: &GaussianState, st: &GaussianState) -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in self.density.rule(DEFAULT_PANELS, DEFAULT_ORDER) {
            acc += w * fidelity_gaussian(reference, &self.base(x).apply(st)?)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub enum ApproxGate {
    Channel(GaussianChannel),
    Mixture(Mixture),
}

impl ApproxGate {
    pub fn n_modes(&self) -> usize {
        match self {
            ApproxGate::Channel(ch) => ch.n_in(),
            ApproxGate::Mixture(m) => m.n_modes(),
        }
    }

    pub fn char_fn(&self, st: &GaussianState, r: &PhasePoint) -> Result<Complex64> {
        match self {
            ApproxGate::Channel(ch) => char_fn(&ch.apply(st)?, r),
            ApproxGate::Mixture(m) => m.char_fn(st, r),
        }
    }

    /// Output characteristic function as a weighted sum of Gaussian ones.
    pub fn char_terms(&self, st: &GaussianState) -> Result<Vec<(f64, CharFnEval)>> {
        match self {
            ApproxGate::Channel(ch) => Ok(vec![(1.0, CharFnEval::new(&ch.apply(st)?))]),
            ApproxGate::Mixture(m) => m
                .density
                .rule(DEFAULT_PANELS, DEFAULT_ORDER)
                .into_iter()
                .map(|(x, w)| Ok((w, CharFnEval::new(&m.base(x).apply(st)?))))
                .collect(),
        }
    }

    pub fn fidelity_with(&self, reference: &GaussianState, st: &GaussianState) -> Result<f64> {
        match self {
            ApproxGate::Channel(ch) => fidelity_gaussian(reference, &ch.apply(st)?),
            ApproxGate::Mixture(m) => m.fidelity_with(reference, st),
        }
    }
}
