use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ops::{DiffOp, RatDiffOp};
use crate::arith::{Poly, Rat, RatFn};
use crate::error::{Error, Result};
use crate::series::TSeries;
use crate::walks::{dp_series, SpecPoint, StepSet};

fn p(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

fn prod(fs: &[&[i64]]) -> Poly {
    fs.iter().fold(Poly::one(), |acc, f| &acc * &p(f))
}

/// Third-order annihilator of the king-walk total count.
pub fn king_operator() -> DiffOp {
    DiffOp::new(vec![
        p(&[-12, -144, -72, 384]),
        prod(&[&[4], &[1, -12, -117, 22, 288]]),
        prod(&[&[0, 1], &[5, -33, -252, 200, 576]]),
        prod(&[&[0, 0, 1], &[1, 4], &[-1, 8], &[-1, 2], &[1, 1]]),
    ])
}

/// Left factor L₂ of the king operator.
pub fn king_left_factor() -> DiffOp {
    DiffOp::new(vec![
        p(&[2, -30, -306, 8, 768]),
        prod(&[&[0, 2], &[2, -14, -111, 80, 256]]),
        prod(&[&[0, 0, 1], &[1, 4], &[1, -8], &[1, -2], &[1, 1]]),
    ])
}

/// Right factor ∂ + 1/t, whose polynomial form is t∂ + 1.
pub fn king_right_factor() -> RatDiffOp {
    RatDiffOp::new(vec![RatFn::var_pow(-1), RatFn::one()])
}

/// Fourth-order operator of model 18.
pub fn case18_operator() -> DiffOp {
    DiffOp::new(vec![
        p(&[24, 288]),
        p(&[-24, 168, 1152]),
        prod(&[&[0, 36], &[1, 3], &[-1, 8]]),
        prod(&[&[0, 0, 4], &[-3, 13, 48]]),
        prod(&[&[0, 0, 0, 1], &[1, 2], &[-1, 6]]),
    ])
}

/// ∂ + 3/t.
pub fn case18_right_factor() -> RatDiffOp {
    RatDiffOp::new(vec![RatFn::var_pow(-1).scale(&Rat::from(3)), RatFn::one()])
}

/// The four solutions s₁..s₄ of the model-18 operator, through t^n.
pub fn case18_basis(n: i64) -> Result<Vec<TSeries>> {
    let m = n + 4;
    let s1 = TSeries::monomial(Rat::one(), -1, n);
    let s2 = TSeries::from_poly(&p(&[1, -8, 4]), m).shift(-3).truncate(n);
    let s3 = TSeries::from_poly(&p(&[-1, 0, 12]), m).shift(-3).truncate(n);
    let a = TSeries::from_poly(&p(&[1, 2]), m).pow_rational(&Rat::frac(1, 2))?;
    let b = TSeries::from_poly(&p(&[1, -6]), m).pow_rational(&Rat::frac(3, 2))?;
    let s4 = a.mul(&b).shift(-3).truncate(n);
    Ok(vec![s1, s2, s3, s4])
}

/// Named transcribed operators.
pub fn builtin_operators() -> BTreeMap<&'static str, DiffOp> {
    let mut m = BTreeMap::new();
    m.insert("king", king_operator());
    m.insert("king_left", king_left_factor());
    m.insert("king_right", king_right_factor().clear_denominators());
    m.insert("case18", case18_operator());
    m
}

/// Models and spec points each builtin operator annihilates.
pub fn builtin_targets() -> Vec<(&'static str, Vec<(i64, i64)>, SpecPoint)> {
    let king = vec![(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
    let m18 = vec![(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)];
    vec![
        ("king", king, SpecPoint { alpha: 1, beta: 1 }),
        ("case18", m18.clone(), SpecPoint { alpha: 1, beta: 0 }),
        ("case18", m18, SpecPoint { alpha: 0, beta: 1 }),
    ]
}

fn check(name: &str, l: &DiffOp, f: &TSeries) -> Result<()> {
    let r = l.apply(f);
    if r.is_zero_on_window() {
        Ok(())
    } else {
        let k = (r.min_exp()..=r.order()).find(|&k| !r.coeff(k).is_zero()).unwrap_or(0);
        Err(Error::ValidationFailed(format!("operator {} leaves t^{} nonzero", name, k)))
    }
}

/// Each transcribed operator annihilates its target series mod t^(n+1),
/// the king factors multiply back to the king operator and the model-18
/// basis is annihilated.
pub fn validate_builtin_operators(n: usize) -> Result<()> {
    let ops = builtin_operators();
    for (name, steps, sp) in builtin_targets() {
        let s = StepSet::new(&steps)?;
        let f = dp_series(&s, &[sp.rats()], n + 4).remove(0);
        check(name, &ops[name], &f)?;
    }
    let prod = king_left_factor().to_rat().mul(&king_right_factor()).clear_denominators();
    if prod != king_operator().primitive() {
        return Err(Error::ValidationFailed(format!("king factorization")));
    }
    for (i, s) in case18_basis(n as i64)?.iter().enumerate() {
        check(&format!("case18 on s{}", i + 1), &ops["case18"], s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_validation() {
        validate_builtin_operators(30).unwrap();
    }

    #[test]
    fn right_factor_divides() {
        let (_, r) = king_operator().to_rat().right_divide(&king_right_factor());
        assert!(r.is_zero());
        let (_, r) = case18_operator().to_rat().right_divide(&case18_right_factor());
        assert!(r.is_zero());
    }
}
