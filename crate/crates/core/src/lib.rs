//! Computational toolkit for slitherings of 3-manifolds around the circle.
//!
//! The period convention is 1 throughout: the circle is `R/Z` and the deck
//! translation is `Z(x) = x + 1`.

pub mod circle_homeo;
pub mod currents;
pub mod error;
pub mod hyperbolic;
pub mod render;
pub mod report;
pub mod rotation;
pub mod slither;
pub mod suite;
pub mod triples;

pub use circle_homeo::rep::GroupRepresentation;
pub use circle_homeo::word::{Letter, Word};
pub use circle_homeo::{canonical_equal, FixedPoint, LiftedCircleMap, MapKind};
pub use error::{Error, Result};
pub use report::Status;
pub use rotation::{classify, delta_r, rotation_number, Classification, RotationEnclosure, RotationOptions};
