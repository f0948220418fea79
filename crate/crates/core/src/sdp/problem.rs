use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::ChoiJson;
use crate::linalg::{hermitize, max_abs_c, CMat};

/// `sup Tr(W J)` over `0 ⪯ W ⪯ ρ ⊗ I_B`, `Tr ρ = 1`, `Tr(n ρ) ≤ E`, with `ρ`
/// on the reference factor `R` (first tensor factor of `J`).
#[derive(Clone, Debug)]
pub struct EcdProblem {
    j: CMat,
    dim_r: usize,
    dim_b: usize,
    energy: f64,
    number: Vec<f64>,
}

impl EcdProblem {
    /// `J` on `R ⊗ B` with index `r·dim_b + b`; the number operator is `diag(0, …, dim_r − 1)`.
    pub fn new(j: CMat, dim_r: usize, energy: f64) -> Result<Self> {
        let d = j.nrows();
        if j.ncols() != d || dim_r == 0 || d % dim_r != 0 {
            return Err(Error::DimensionMismatch(format!("J is {}x{}, reference dim {dim_r}", j.nrows(), j.ncols())));
        }
        let herm_err = max_abs_c(&(&j - j.adjoint()));
        if herm_err > 1e-10 * (1.0 + max_abs_c(&j)) {
            return Err(Error::InfeasibleInput(format!("J is not Hermitian (deviation {herm_err:.3e})")));
        }
        if !(energy >= 0.0 && energy.is_finite()) {
            return Err(Error::OutOfRange(format!("energy E = {energy} must be non-negative")));
        }
        Ok(Self { j: hermitize(&j), dim_r, dim_b: d / dim_r, energy, number: (0..dim_r).map(|k| k as f64).collect() })
    }

    /// Difference of two Choi matrices with equal reference dimension.
    pub fn from_chois(choi_n: &CMat, choi_m: &CMat, dim_r: usize, energy: f64) -> Result<Self> {
        if choi_n.shape() != choi_m.shape() {
            return Err(Error::DimensionMismatch("Choi matrices differ in shape".into()));
        }
        Self::new(choi_n - choi_m, dim_r, energy)
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }
    pub fn dim_r(&self) -> usize {
        self.dim_r
    }
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
    /// Truncation parameter `M = dim_r − 1`.
    pub fn truncation(&self) -> usize {
        self.dim_r - 1
    }
    pub fn number(&self) -> &[f64] {
        &self.number
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { j: &self.j * crate::linalg::c(k, 0.0), ..self.clone() }
    }

    pub fn from_json(s: &str, energy: f64) -> Result<Self> {
        match serde_json::from_str::<ProblemJson>(s)? {
            ProblemJson::Difference(c) => Self::new(c.to_matrix()?, c.dim, energy),
            ProblemJson::Pair { n, m } => {
                if n.dim != m.dim {
                    return Err(Error::DimensionMismatch("reference dimensions differ".into()));
                }
                Self::from_chois(&n.to_matrix()?, &m.to_matrix()?, n.dim, energy)
            }
        }
    }
}

/// Either the difference `J` itself or the two Choi matrices `{n, m}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ProblemJson {
    Pair { n: ChoiJson, m: ChoiJson },
    Difference(ChoiJson),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub min_eig_w: f64,
    pub min_eig_slack: f64,
    pub trace_err: f64,
    /// `E − Tr(n ρ)`.
    pub energy_slack: f64,
}

impl Residuals {
    pub fn feasible(&self, tol: f64) -> bool {
        self.min_eig_w >= -tol && self.min_eig_slack >= -tol && self.trace_err <= tol && self.energy_slack >= -tol
    }
}

#[derive(Clone, Debug)]
pub struct EcdSolution {
    pub w: CMat,
    pub rho: CMat,
    pub primal: f64,
    /// Value of an explicit dual-feasible point; an upper bound on the optimum.
    pub dual: f64,
    pub dual_gap: f64,
    pub iterations: usize,
    pub residuals: Residuals,
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    primal: f64,
    dual: f64,
    dual_gap: f64,
    iterations: usize,
    residuals: &'a Residuals,
    rho: ChoiLike,
}

#[derive(Serialize)]
struct ChoiLike {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl EcdSolution {
    pub fn to_json(&self) -> Result<String> {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..self.rho.nrows()).map(|i| (0..self.rho.ncols()).map(|j| f(&self.rho[(i, j)])).collect()).collect()
        };
        let out = SolutionJson {
            primal: self.primal,
            dual: self.dual,
            dual_gap: self.dual_gap,
            iterations: self.iterations,
            residuals: &self.residuals,
            rho: ChoiLike { re: rows(|z| z.re), im: rows(|z| z.im) },
        };
        Ok(serde_json::to_string(&out)?)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EcdConfig {
    /// Required certified gap.
    pub gap_tol: f64,
    /// Required barrier bound `m/t` on suboptimality of the central point.
    pub path_tol: f64,
    /// Newton-step budget.
    pub max_iter: usize,
    pub t_growth: f64,
    /// Centering stops when half the squared Newton decrement drops below this.
    pub center_tol: f64,
    pub feas_tol: f64,
}

impl Default for EcdConfig {
    fn default() -> Self {
        Self { gap_tol: 1e-7, path_tol: 1e-7, max_iter: 200, t_growth: 10.0, center_tol: 1e-9, feas_tol: 1e-8 }
    }
}
