//! SDP-based distinguishability and information measures for quantum
//! channels — root fidelity, Bures distance and SLD Fisher information —
//! together with the lower bounds they imply on error probabilities and
//! query complexities of binary channel discrimination and of channel
//! estimation, in both the parallel and adaptive access models.
//!
//! Everything numerical is cross-checked by the independent references in
//! [`oracle`]: exact diamond-norm error probabilities at small query counts,
//! probe-sampling extrema and finite-difference consistency checks.

pub mod channel;
pub mod channel_metrics;
pub mod discrimination;
pub mod error;
pub mod estimation;
pub mod matrix;
pub mod oracle;
pub mod sdp;
pub mod state_metrics;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
