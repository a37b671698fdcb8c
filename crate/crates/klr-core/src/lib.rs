//! Exact arithmetic in affine and cyclotomic KLR algebras of type A over the integers.

pub mod affine_algebra;
pub mod combinatorics;
pub mod cyclotomic;
pub mod error;
pub mod intlinalg;
pub mod par;
pub mod quiver;
pub mod repn;

pub use error::{KlrError, Result};
