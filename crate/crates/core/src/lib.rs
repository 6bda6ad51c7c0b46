//! Kernels and operators attached to the classical and exotic Bessel operators
//! on the half-line, together with weighted norms and the exact `(p, delta)`
//! regions on which the associated maximal, Riesz, square and potential
//! operators are bounded.

pub mod error;
pub mod format;
pub mod grid;
pub mod kernels;
pub mod norms;
pub mod operators;
pub mod quad;
pub mod sharpness;
pub mod special_fn;
pub mod verify;

pub use error::{Error, Result};
