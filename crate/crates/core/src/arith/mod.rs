//! Exact scalars and polynomials, plus a binary big-float for numerics.

mod bigf;
mod bivariate;
mod rat;
mod ratfn;
mod upoly;

pub use bigf::BigF;
pub use bivariate::{LPoly2, RatFn2};
pub use rat::{binomial, factorial, Rat};
pub use ratfn::{LPoly1, RatFn};
pub use upoly::{integer_content, Field, Poly, UPoly};
