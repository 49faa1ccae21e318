//! Slice towers for `S^n ∧ HZ` over odd-order cyclic `p`-groups.

pub mod error;
pub mod linalg;
pub mod homology;
pub mod mackey;
pub mod params;
pub mod rep;
pub mod tower;

pub use error::{Error, Result};
pub use params::{slice_params, Group, SliceParams};
pub use rep::{parse_rep, Rep};
pub use rep::RepDiff;
pub use mackey::{AbGroup, MackeyFunctor};
pub use homology::BredonHomology;
pub use tower::{tower, verify_slice, verify_tower, Coefficient, SliceDescriptor, SliceKind, SliceVerification, Stage, Tower};
