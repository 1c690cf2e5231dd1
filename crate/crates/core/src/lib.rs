//! Exact and high-precision machinery for D-finite small-step walks in the
//! quarter plane.
//!
//! Everything here works without `std`; the companion `qwalk` crate adds
//! file formats, caching and the command line.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod arith;
pub mod asymptotics;
pub mod closedform;
pub mod cones;
pub mod dfinite;
mod error;
pub mod series;
pub mod walks;

pub use arith::{BigF, LPoly1, LPoly2, Poly, Rat, RatFn, RatFn2, UPoly};
pub use error::{Error, Result};
pub use series::TSeries;
