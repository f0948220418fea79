use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};

/// Mean-photon-number budget `E` on the channel input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyConstraint {
    e: f64,
}

impl EnergyConstraint {
    pub fn new(e: f64) -> Result<Self> {
        check_range(e >= 0.0 && e.is_finite(), || format!("energy E = {e} must be finite and non-negative"))?;
        Ok(Self { e })
    }

    pub fn value(&self) -> f64 {
        self.e
    }

    pub fn floor(&self) -> usize {
        self.e.floor() as usize
    }

    pub fn ceil(&self) -> usize {
        self.e.ceil() as usize
    }

    /// `{E} = E − ⌊E⌋`.
    pub fn frac(&self) -> f64 {
        self.e - self.e.floor()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    ClosedForm,
    Quadrature,
    Sdp,
    FockTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub kind: BoundKind,
    pub method: BoundMethod,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts() {
        let e = EnergyConstraint::new(2.25).unwrap();
        assert_eq!((e.floor(), e.ceil()), (2, 3));
        assert!((e.frac() - 0.25).abs() < 1e-15);
        let e = EnergyConstraint::new(3.0).unwrap();
        assert_eq!((e.floor(), e.ceil(), e.frac()), (3, 3, 0.0));
        assert!(EnergyConstraint::new(-0.1).is_err());
        assert!(EnergyConstraint::new(f64::NAN).is_err());
    }

    #[test]
    fn json_tags() {
        let b = BoundValue { value: 0.5, kind: BoundKind::Upper, method: BoundMethod::ClosedForm };
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"upper\"") && s.contains("\"closed_form\""), "{s}");
    }
}
