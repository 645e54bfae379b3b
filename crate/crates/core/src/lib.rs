//! Exact computation with reduced curve singularities encoded as unital
//! subalgebras of the truncated germ algebras `A(c)` and `A+(c)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] and [`linalg`]: exact scalars over `F_p` and `Q`, canonical
//!   reduced row echelon subspaces;
//! * [`algebra`]: the germ algebras with their fixed monomial basis;
//! * [`subalgebra`]: closure, verification, constant parts and conductors;
//! * [`invariants`]: branches, conductances, delta and genus, partition
//!   singularities;
//! * [`territory`]: the partition-indexed product decomposition and brute
//!   force enumeration over finite fields;
//! * [`families`]: weight degenerations, pencils, connectivity certificates
//!   and the explicit smoothing family of partition singularities;
//! * [`wire`]: the JSON documents exchanged by the command-line tool.

pub mod algebra;
pub mod error;
pub mod families;
pub mod field;
pub mod invariants;
pub mod linalg;
pub mod partition;
pub mod subalgebra;
pub mod territory;
pub mod wire;

pub use algebra::{AlgebraKind, BasisElement, GermAlgebra};
pub use error::{Error, Result};
pub use families::{
    connect_to_partition_point, initial_subalgebra, ConnectOutcome, PathCertificate, PathStep,
    Pencil, SmoothingFamily,
};
pub use field::{FieldSpec, Scalar};
pub use invariants::{
    conductances, delta_genus, make_partition_singularity, realize_for_genus, record,
    SingularityRecord,
};
pub use linalg::{rref, Subspace};
pub use partition::SetPartition;
pub use subalgebra::{verify, Subalgebra};
pub use territory::{
    assemble, check_counting_identity, decompose, enumerate, CountingReport, DecomposedPoint,
    TerritoryIndex, DEFAULT_MAX_CANDIDATES,
};
