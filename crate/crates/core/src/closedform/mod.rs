//! Gauss hypergeometric series, closed-form expression trees and their
//! formal and numeric evaluation.

mod builtin;
mod expr;
mod hyper;
mod identities;
pub mod quad;

pub use builtin::{
    builtin_closed_forms, case18_side_formula, case3_formula, case5_formula, case5_inner, case7_formula, case7_inner,
    king_formula, validate_closed_form, ClosedForm, KING_ELLIPTIC_VARIANT,
};
pub use expr::{cf_eval_numeric, cf_eval_series, ratfn_at, CFExpr};
pub use hyper::{elliptic_e, elliptic_k, hg_numeric, hg_series, pochhammer, HGParams};
pub use identities::{verify_identity, Identity};
