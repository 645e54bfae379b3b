//! Degenerations, connectivity certificates and the smoothing family of
//! partition singularities.

pub mod connect;
pub mod degenerate;
pub mod pencil;
pub mod poly;
pub mod smoothing;

pub use connect::{
    connect_to_partition_point, connect_with_cap, ConnectOutcome, DEFAULT_STATE_CAP,
};
pub use degenerate::{degeneration_pencil, initial_subalgebra, tie_break_weights};
pub use pencil::{default_samples, PathCertificate, PathStep, Pencil};
pub use poly::Poly;
pub use smoothing::{GluingBranch, SmoothingFamily};
