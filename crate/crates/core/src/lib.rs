//! Gaussian gate channels, their experimental approximations, and the
//! distances used to compare them: closed-form bounds, a truncated Fock-space
//! oracle, and an energy-constrained diamond-norm SDP.

pub mod bounds;
pub mod error;
pub mod fock;
pub mod gates;
pub mod gaussian;
pub mod linalg;
pub mod sdp;

pub use error::{Error, Result};
pub use fock::{FockDensity, FockMixture, TruncatedChannel};
pub use gaussian::{GaussianChannel, GaussianState, PhasePoint};
