//! Phase-space layer: Gaussian states and channels in the `(x₁, p₁, …)` ordering
//! with vacuum covariance equal to the identity.

mod channel;
mod charfn;
mod fidelity;
mod state;
mod symplectic;

pub use channel::{compose as compose_channels, GaussianChannel};
pub use charfn::{char_fn, CharFnEval, char_fn_pushforward, PhasePoint};
pub use fidelity::{
    fidelity_gaussian, fidelity_general, fidelity_one_mode, fidelity_two_mode, overlap_gaussian,
    sine_distance,
};
pub use state::GaussianState;
pub use symplectic::{
    is_symplectic, symplectic_bs, symplectic_phase, symplectic_squeeze, symplectic_sum,
};
