//! Complex hyperbolic geometry in the Siegel domain model and discrete
//! surface-group representations into PU(2,1).
//!
//! The centerpiece is [`amalgam::AmalgamRep`]: two cusped Fuchsian groups are
//! embedded as stabilizers of parallel totally real planes and amalgamated
//! along a shared horizontal Heisenberg translation, producing a
//! representation of a closed surface group with an accidental parabolic.
//! The [`verify`] module samples the Maskit combination hypotheses and runs a
//! parabolic census, [`toledo`] integrates the Kähler form over a spanning
//! annulus, and [`limitset`] enumerates boundary orbits.
//!
//! All values are immutable after construction and all operations are pure;
//! everything is safe to share across threads read-only. Every sampling
//! routine takes an explicit RNG seed and is deterministic given that seed.

pub mod amalgam;
pub mod error;
pub mod fuchsian;
pub mod heisenberg;
pub mod isometry;
pub mod limitset;
pub mod linalg;
pub mod siegel;
pub mod toledo;
pub mod totally_real;
pub mod verify;
pub mod words;

pub use amalgam::AmalgamRep;
pub use error::{Error, Result};
pub use isometry::{Isometry, IsometryKind};
pub use siegel::{HoroCoord, ProjPoint, SiegelPoint};

/// Default tolerance for interior/boundary predicates.
pub const TOL_BOUNDARY: f64 = 1e-10;
/// Default tolerance on the trace discriminant used by classification.
pub const TOL_CLASSIFY: f64 = 1e-9;
/// Tolerance for the J-unitarity residual of freshly constructed isometries.
pub const TOL_FORM: f64 = 1e-12;
