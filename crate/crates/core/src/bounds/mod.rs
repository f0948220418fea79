//! Closed-form distances and bounds between ideal gates and their approximations.

mod angle;
mod asymptotic;
mod displacement;
mod energy;
pub mod quadrature;
mod squeezer;
mod sum;

pub use angle::{g_angle_bound, trunc_normal_pdf};
pub use asymptotic::{arbitrary_unitary_asymptotic, asymptotic_coefficient, printed_asymptotic_coefficient};
pub use displacement::{
    coherent_loss_fidelity, d1, d1_bound, displacement_fidelity, f_sine, optimal_state, optimal_state_vec,
    tensor_disp_allocation, tensor_disp_bound, varrho_matrix,
};
pub use energy::{BoundKind, BoundMethod, BoundValue, EnergyConstraint};
pub use squeezer::{db_to_r, r_to_db, squeezer_tms_fidelity, squeezer_tms_sine, squeezer_zvac_fidelity};
pub use sum::{sum_sine, sum_tms_fidelity, sum_zvac_fidelity, SUM_RA};
