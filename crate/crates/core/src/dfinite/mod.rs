//! Linear differential operators with polynomial coefficients, guessing
//! from initial terms, and coefficient recurrences.

mod builtin;
mod guess;
mod ops;
mod rec;

pub use builtin::{
    builtin_operators, builtin_targets, case18_basis, case18_operator, case18_right_factor, king_left_factor,
    king_operator, king_right_factor, validate_builtin_operators,
};
pub use guess::{annihilates, guess, guess_auto, nullspace_bareiss, nullspace_crt, PrimeStream, BAREISS_MAX_UNKNOWNS};
pub use ops::{DiffOp, RatDiffOp};
pub use rec::{to_recurrence, unroll, PRec};
