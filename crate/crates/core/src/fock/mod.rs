//! Brute-force number-basis oracle used as ground truth for the closed forms.

mod channel;
mod gaussian;
mod metrics;
mod ops;
mod states;

pub use channel::{
    apply_truncated, choi_of, kraus_pure_loss, kraus_raw_displacement, kraus_x_noise, ChoiJson, TruncatedChannel,
};
pub use gaussian::{apply_bs, ModeRecipe, TwoModeRecipe};
pub use metrics::{fidelity_fock, fidelity_mixture, trace_distance_fock, trace_norm_diff_mixture};
pub use ops::{
    bs_sector, buffered_exp, displacement_element, expi_herm, op_annihilation, op_bs, op_creation, op_displacement,
    op_displacement_rect, op_number, op_phase, op_quadratures, op_squeeze, op_squeeze_rect, BeamsplitterSectors,
    FockOperator,
};
pub use states::{
    apply_mode_op, coherent_vec, fock_vec, thermal_populations, tms_vec, total_dim, FockDensity, FockMixture,
};
