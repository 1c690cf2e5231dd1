use alloc::vec;

use super::expr::{cf_eval_series, CFExpr};
use super::hyper::HGParams;
use crate::arith::{Poly, Rat, RatFn};
use crate::error::{Error, Result};

/// The three ₂F₁ transformations relating the bundled hypergeometric series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    Duplication,
    GoursatQuarter,
    GoursatThird,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::Duplication, Identity::GoursatQuarter, Identity::GoursatThird];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::Duplication => "duplication",
            Identity::GoursatQuarter => "goursat_quarter",
            Identity::GoursatThird => "goursat_third",
        }
    }

    pub fn from_name(s: &str) -> Option<Identity> {
        Identity::ALL.iter().copied().find(|i| i.name() == s)
    }

    /// (left, right) as expression trees in the variable t.
    pub fn sides(&self) -> (CFExpr, CFExpr) {
        let p = |c: &[i64]| Poly::from_ints(c);
        let rf = |n: Poly, d: Poly| RatFn::new(n, d);
        match self {
            Identity::Duplication => {
                // (1−u/2)^{1/2} ₂F₁(1/2,1/2;1;u) = ₂F₁(1/4,3/4;1;(u/(2−u))²)
                let lhs = CFExpr::Prod(vec![
                    CFExpr::Rational(rf(p(&[2, -1]), p(&[2]))).pow(Rat::frac(1, 2)),
                    CFExpr::HG(HGParams::frac((1, 2), (1, 2), (1, 1)), RatFn::var()),
                ]);
                let w = rf(p(&[0, 0, 1]), p(&[2, -1]).pow(2));
                (lhs, CFExpr::HG(HGParams::frac((1, 4), (3, 4), (1, 1)), w))
            }
            Identity::GoursatQuarter => {
                // (1+3u)^{1/4} ₂F₁(1/4,3/4;1;u) = ₂F₁(1/12,5/12;1;27u(1−u)²/(1+3u)³)
                let lhs = CFExpr::Prod(vec![
                    CFExpr::poly(&[1, 3]).pow(Rat::frac(1, 4)),
                    CFExpr::HG(HGParams::frac((1, 4), (3, 4), (1, 1)), RatFn::var()),
                ]);
                let w = rf(&p(&[0, 27]) * &p(&[1, -1]).pow(2), p(&[1, 3]).pow(3));
                (lhs, CFExpr::HG(HGParams::frac((1, 12), (5, 12), (1, 1)), w))
            }
            Identity::GoursatThird => {
                // (1−8v/9)^{1/4} ₂F₁(1/3,2/3;1;v) = ₂F₁(1/12,5/12;1;64v³(1−v)/(9−8v)³)
                let lhs = CFExpr::Prod(vec![
                    CFExpr::Rational(rf(p(&[9, -8]), p(&[9]))).pow(Rat::frac(1, 4)),
                    CFExpr::HG(HGParams::frac((1, 3), (2, 3), (1, 1)), RatFn::var()),
                ]);
                let w = rf(&p(&[0, 0, 0, 64]) * &p(&[1, -1]), p(&[9, -8]).pow(3));
                (lhs, CFExpr::HG(HGParams::frac((1, 12), (5, 12), (1, 1)), w))
            }
        }
    }
}

/// Both sides agree through t^n; otherwise IdentityFailed at the first
/// differing order.
pub fn verify_identity(id: Identity, n: i64) -> Result<()> {
    let (l, r) = id.sides();
    let a = cf_eval_series(&l, n)?;
    let b = cf_eval_series(&r, n)?;
    match a.first_mismatch(&b) {
        None => Ok(()),
        Some(k) => Err(Error::IdentityFailed(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero() {
        for id in Identity::ALL {
            assert_eq!(verify_identity(id, 0), Ok(()));
        }
    }

    #[test]
    fn duplication_short() {
        assert_eq!(verify_identity(Identity::Duplication, 20), Ok(()));
    }
}
