//! Energy-constrained diamond distance on truncated number bases.

mod ascent;
mod displacement;
mod problem;
mod solver;

pub use problem::{EcdConfig, EcdProblem, EcdSolution, Residuals};
pub use solver::{solve_ecd, solve_ecd_with};
pub use displacement::{d2_displacement, d2_solution, displaced_problem, loss_problem, sandwich_check};
pub use ascent::{diagonal_ascent, diagonal_value, AscentResult};
