use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::mixture::{ApproxGate, Mixture, MixtureFamily};
use super::*;
use crate::gaussian::symplectic_phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateFamily {
    Displacement,
    Beamsplitter,
    Phase,
    Squeezer,
    Sum,
}

impl fmt::Display for GateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateFamily::Displacement => "displacement",
            GateFamily::Beamsplitter => "beamsplitter",
            GateFamily::Phase => "phase",
            GateFamily::Squeezer => "squeezer",
            GateFamily::Sum => "sum",
        })
    }
}

impl FromStr for GateFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "displacement" => GateFamily::Displacement,
            "beamsplitter" => GateFamily::Beamsplitter,
            "phase" => GateFamily::Phase,
            "squeezer" => GateFamily::Squeezer,
            "sum" => GateFamily::Sum,
            _ => return Err(Error::Parse(format!("unknown gate family '{s}'"))),
        })
    }
}

/// An ideal unitary gate together with one of its approximations.
#[derive(Clone, Debug)]
pub struct GatePair {
    pub ideal: GaussianChannel,
    pub approx: ApproxGate,
    pub label: GateFamily,
}

impl GatePair {
    pub fn n_modes(&self) -> usize {
        self.ideal.n_in()
    }

    /// Fidelity between the ideal and approximate outputs on `st`.
    ///
    /// Exact for channel approximations; for mixtures, exact when the ideal
    /// output is pure.
    pub fn output_fidelity(&self, st: &GaussianState) -> Result<f64> {
        let ideal_out = self.ideal.apply(st)?;
        self.approx.fidelity_with(&ideal_out, st)
    }
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad complex number '{s}'"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is not the leading one nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| err())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(s: &str) -> Result<Self> {
        let mut m = BTreeMap::new();
        for kv in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
            m.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self(m))
    }

    fn take_f64(&mut self, k: &str, default: Option<f64>) -> Result<f64> {
        match self.0.remove(k) {
            Some(v) => v.parse().map_err(|_| Error::Parse(format!("bad value for {k}: '{v}'"))),
            None => default.ok_or_else(|| Error::Parse(format!("missing parameter {k}"))),
        }
    }

    fn has(&self, k: &str) -> bool {
        self.0.contains_key(k)
    }

    fn finish(self) -> Result<()> {
        match self.0.keys().next() {
            Some(k) => Err(Error::Parse(format!("unexpected parameter {k}"))),
            None => Ok(()),
        }
    }
}

/// Builds a gate pair from an id such as `displacement:eta=0.99,alpha=1+0i`.
///
/// | family | keys |
/// |---|---|
/// | `displacement` | `eta`, `alpha` (default `1`) |
/// | `beamsplitter` | `eta`, `phi` (0), `eta_loss`; or `theta` (π/4), `sigma` |
/// | `phase` | `phi`, and `sigma` or `eta_loss` |
/// | `squeezer` | `r`, `rE` |
/// | `sum` | `rA`, `rB`, `R` (unit gain) |
pub fn gate_pair(id: &str) -> Result<GatePair> {
    let (fam, rest) = id.split_once(':').unwrap_or((id, ""));
    let label: GateFamily = fam.trim().parse()?;
    let mut p = Params::parse(rest)?;
    let pair = match label {
        GateFamily::Displacement => {
            let eta = p.take_f64("eta", None)?;
            let alpha = match p.0.remove("alpha") {
                Some(a) => parse_complex(&a)?,
                None => Complex64::new(1.0, 0.0),
            };
            GatePair { ideal: ideal_displacement(alpha), approx: ApproxGate::Channel(approx_displacement(eta, alpha)?), label }
        }
        GateFamily::Beamsplitter if p.has("sigma") => {
            let theta = p.take_f64("theta", Some(std::f64::consts::FRAC_PI_4))?;
            let sigma = p.take_f64("sigma", None)?;
            GatePair {
                ideal: symplectic_bs(theta, 0.0),
                approx: ApproxGate::Mixture(Mixture::new(theta, sigma, MixtureFamily::Beamsplitter)?),
                label,
            }
        }
        GateFamily::Beamsplitter => {
            let eta = p.take_f64("eta", None)?;
            let phi = p.take_f64("phi", Some(0.0))?;
            let el = p.take_f64("eta_loss", None)?;
            GatePair { ideal: ideal_bs(eta, phi)?, approx: ApproxGate::Channel(approx_bs_loss(eta, phi, el)?), label }
        }
        GateFamily::Phase => {
            let phi = p.take_f64("phi", None)?;
            let approx = if p.has("sigma") {
                ApproxGate::Mixture(Mixture::new(phi, p.take_f64("sigma", None)?, MixtureFamily::Phase)?)
            } else {
                ApproxGate::Channel(symplectic_phase(phi).after(&pure_loss(p.take_f64("eta_loss", None)?)?)?)
            };
            GatePair { ideal: symplectic_phase(phi), approx, label }
        }
        GateFamily::Squeezer => {
            let r = p.take_f64("r", None)?;
            let re = p.take_f64("rE", None)?;
            GatePair { ideal: ideal_squeezer(r), approx: ApproxGate::Channel(approx_squeezer(r, re)?), label }
        }
        GateFamily::Sum => {
            let ra = p.take_f64("rA", None)?;
            let rb = p.take_f64("rB", None)?;
            let rr = p.take_f64("R", Some(unit_gain_reflectivity()))?;
            GatePair { ideal: ideal_sum(sum_gain(rr)), approx: ApproxGate::Channel(approx_sum(ra, rb, rr)?), label }
        }
    };
    p.finish()?;
    Ok(pair)
}
