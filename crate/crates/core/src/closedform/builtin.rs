use alloc::vec;
use alloc::vec::Vec;

use super::expr::{cf_eval_series, CFExpr};
use super::hyper::HGParams;
use crate::arith::{Poly, Rat, RatFn};
use crate::error::{Error, Result};
use crate::walks::{dp_series, SpecPoint, StepSet};

/// Elliptic-integral form of the king-walk series. Kept as text: whether
/// K' is the derivative or the complementary integral is ambiguous.
pub const KING_ELLIPTIC_VARIANT: &str =
    "Q(t) = (1/t) ∫_0^t K'(4 sqrt(x(1+x))/(1+4x)) / (π (1+4x)^2 sqrt(x(1+x))) dx";

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub model: u32,
    pub spec: SpecPoint,
    pub label: &'static str,
    pub expr: CFExpr,
    /// Numeric evaluation is safe for 0 < t < radius.
    pub radius: Rat,
}

fn p(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

fn rat(n: &[i64], d: &[i64]) -> CFExpr {
    CFExpr::Rational(RatFn::new(p(n), p(d)))
}

fn half(n: i64) -> Rat {
    Rat::frac(n, 2)
}

/// King walks, total count: (1/t) ∫ (1+4u)^{-3} ₂F₁(3/2,3/2;2; 16u(1+u)/(1+4u)²).
pub fn king_formula() -> CFExpr {
    let w = RatFn::new(p(&[0, 16, 16]), p(&[1, 4]).pow(2));
    CFExpr::Prod(vec![
        CFExpr::Rational(RatFn::new(p(&[1]), p(&[1, 4]).pow(3))),
        CFExpr::HG(HGParams::frac((3, 2), (3, 2), (2, 1)), w),
    ])
    .int0t()
    .inv_t()
}

/// Case 3, Q(1,1).
pub fn case3_formula() -> CFExpr {
    let d = &p(&[1, 2]) * &p(&[1, 6]);
    let w = RatFn::new(p(&[0, 16]), d.clone());
    CFExpr::Prod(vec![
        CFExpr::poly(&[1, -2]),
        CFExpr::Rational(RatFn::from_poly(d)).pow(half(-3)),
        CFExpr::HG(HGParams::frac((3, 2), (3, 2), (2, 1)), w),
    ])
    .int0t()
    .inv_t()
}

/// Innermost integrand f of the case-7 formula.
pub fn case7_inner() -> CFExpr {
    let w = RatFn::new(p(&[0, 0, 16]), p(&[1, 0, 4]));
    let bracket = CFExpr::Sum(vec![
        CFExpr::Prod(vec![CFExpr::poly(&[1, -1]), CFExpr::HG(HGParams::frac((3, 2), (1, 2), (1, 1)), w.clone())]),
        CFExpr::Prod(vec![
            // −(1+v)(1−4v+8v²)
            CFExpr::poly(&[-1, 3, -4, -8]),
            CFExpr::HG(HGParams::frac((1, 2), (1, 2), (1, 1)), w),
        ]),
    ]);
    CFExpr::Prod(vec![
        CFExpr::poly(&[1, -4]).pow(half(1)),
        rat(&[1, 2], &[0, 0, 2]),
        CFExpr::Sum(vec![
            CFExpr::poly(&[1]),
            CFExpr::Prod(vec![
                rat(&[1], &[0, 2, 4]),
                CFExpr::poly(&[1, 0, 4]).pow(half(-1)),
                bracket,
            ]),
        ]),
    ])
}

/// Case 7, Q(1,1).
pub fn case7_formula() -> CFExpr {
    CFExpr::Prod(vec![
        rat(&[1], &[0, -1, 1]),
        CFExpr::Prod(vec![
            CFExpr::poly(&[0, 1]),
            CFExpr::poly(&[1, -4]).pow(half(-3)),
            CFExpr::Sum(vec![CFExpr::poly(&[4]), case7_inner().int0t()]),
        ])
        .int0t(),
    ])
}

/// Innermost integrand f of the case-5 formula.
pub fn case5_inner() -> CFExpr {
    let w = RatFn::from_poly(p(&[0, 0, 0, 0, 64]));
    CFExpr::Prod(vec![
        CFExpr::poly(&[1, -3]).pow(half(1)),
        rat(&[1], &[0, 0, 0, 1]),
        CFExpr::poly(&[1, 1]).pow(half(-1)),
        CFExpr::Sum(vec![
            CFExpr::poly(&[1]),
            CFExpr::Prod(vec![
                CFExpr::poly(&[1, 0, 0, -10]),
                CFExpr::HG(HGParams::frac((3, 4), (5, 4), (1, 1)), w.clone()),
            ]),
            CFExpr::Prod(vec![
                CFExpr::poly(&[0, 0, 0, 18, -48, 84]),
                CFExpr::HG(HGParams::frac((5, 4), (7, 4), (2, 1)), w),
            ]),
        ]),
    ])
}

/// Case 5, Q(1,1).
pub fn case5_formula() -> CFExpr {
    CFExpr::Prod(vec![
        rat(&[1], &[0, -1, 1]),
        CFExpr::Prod(vec![
            CFExpr::poly(&[0, 0, 1]),
            CFExpr::poly(&[1, 1]).pow(half(-1)),
            CFExpr::poly(&[1, -3]).pow(half(-3)),
            CFExpr::Sum(vec![CFExpr::poly(&[-7]), case5_inner().int0t()]),
        ])
        .int0t(),
    ])
}

/// (a + b·t − sqrt(disc)) / (k t²).
fn surd_over_t2(a: i64, b: i64, disc: &[i64], k: i64) -> CFExpr {
    CFExpr::Sum(vec![CFExpr::poly(&[a, b]), CFExpr::poly(disc).pow(half(1)).scale(Rat::from(-1))])
        .inv_t()
        .inv_t()
        .scale(Rat::frac(1, k))
}

/// Case 18, Q(1,0) = Q(0,1).
pub fn case18_side_formula() -> CFExpr {
    CFExpr::Sum(vec![
        CFExpr::Prod(vec![CFExpr::poly(&[1, -6]).pow(half(3)), CFExpr::poly(&[1, 2]).pow(half(1))]),
        CFExpr::poly(&[-1, 8, -4]),
    ])
    .inv_t()
    .inv_t()
    .inv_t()
    .scale(Rat::frac(1, 32))
}

pub fn builtin_closed_forms() -> Vec<ClosedForm> {
    let sp = |a, b| SpecPoint { alpha: a, beta: b };
    vec![
        ClosedForm { model: 4, spec: sp(1, 1), label: "king", expr: king_formula(), radius: Rat::frac(1, 8) },
        ClosedForm { model: 3, spec: sp(1, 1), label: "case 3", expr: case3_formula(), radius: Rat::frac(1, 6) },
        ClosedForm { model: 7, spec: sp(1, 1), label: "case 7", expr: case7_formula(), radius: Rat::frac(1, 4) },
        ClosedForm { model: 5, spec: sp(1, 1), label: "case 5", expr: case5_formula(), radius: Rat::frac(1, 3) },
        ClosedForm {
            model: 17,
            spec: sp(1, 1),
            label: "case 17 algebraic",
            expr: surd_over_t2(1, -1, &[1, -2, -3], 2),
            radius: Rat::frac(1, 3),
        },
        ClosedForm {
            model: 18,
            spec: sp(1, 1),
            label: "case 18 algebraic",
            expr: surd_over_t2(1, -2, &[1, -4, -12], 8),
            radius: Rat::frac(1, 6),
        },
        ClosedForm {
            model: 18,
            spec: sp(1, 0),
            label: "case 18 algebraic",
            expr: case18_side_formula(),
            radius: Rat::frac(1, 6),
        },
        ClosedForm {
            model: 18,
            spec: sp(0, 1),
            label: "case 18 algebraic",
            expr: case18_side_formula(),
            radius: Rat::frac(1, 6),
        },
    ]
}

/// Series of the formula against DP through t^n.
pub fn validate_closed_form(cf: &ClosedForm, steps: &StepSet, n: usize) -> Result<()> {
    let s = cf_eval_series(&cf.expr, n as i64)?;
    let dp = dp_series(steps, &[cf.spec.rats()], n).remove(0);
    match s.first_mismatch(&dp) {
        None => Ok(()),
        Some(k) => Err(Error::ValidationFailed(alloc::format!(
            "closed form for model {} at {} differs at t^{}",
            cf.model,
            cf.spec,
            k
        ))),
    }
}
