//! Exact symbolic calculus on the standard Podleś quantum sphere.
//!
//! Scalars live in `Q(q)` with `q` transcendental, so every identity checked
//! here is a representational equality of rational functions.

pub mod algebra;
pub mod cochains;
pub mod complex;
pub mod error;
pub mod expr;
pub mod homology;
pub mod linalg;
pub mod qfield;
pub mod verify;
pub mod volume;

pub use algebra::{AlgElem, Automorphism, BasisIndex, Generator, Truncation};
pub use cochains::Cochain;
pub use complex::Chain;
pub use error::{Error, Result};
pub use qfield::RatFunc;
