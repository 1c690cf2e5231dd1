use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use super::hyper::{hg_numeric, hg_series, HGParams};
use super::quad::{integrate_adaptive, GlCache};
use crate::arith::{BigF, Poly, Rat, RatFn};
use crate::error::{Error, Result};
use crate::series::{ratfn_expand_at_zero, TSeries};

/// Closed-form expression in t.
#[derive(Clone, Debug, PartialEq)]
pub enum CFExpr {
    Rational(RatFn),
    Pow(Box<CFExpr>, Rat),
    HG(HGParams, RatFn),
    /// ∫_0^t, formal primitive without constant term.
    Int0t(Box<CFExpr>),
    Sum(Vec<CFExpr>),
    Prod(Vec<CFExpr>),
    Scale(Rat, Box<CFExpr>),
    /// 1/t times the child.
    InvT(Box<CFExpr>),
}

impl CFExpr {
    pub fn rational(f: RatFn) -> CFExpr {
        CFExpr::Rational(f)
    }

    pub fn poly(c: &[i64]) -> CFExpr {
        CFExpr::Rational(RatFn::from_poly(Poly::from_ints(c)))
    }

    pub fn pow(self, e: Rat) -> CFExpr {
        CFExpr::Pow(Box::new(self), e)
    }

    pub fn int0t(self) -> CFExpr {
        CFExpr::Int0t(Box::new(self))
    }

    pub fn scale(self, a: Rat) -> CFExpr {
        CFExpr::Scale(a, Box::new(self))
    }

    pub fn inv_t(self) -> CFExpr {
        CFExpr::InvT(Box::new(self))
    }

    /// Nesting depth of Int0t nodes.
    pub fn int_depth(&self) -> usize {
        match self {
            CFExpr::Rational(_) | CFExpr::HG(..) => 0,
            CFExpr::Pow(c, _) | CFExpr::Scale(_, c) | CFExpr::InvT(c) => c.int_depth(),
            CFExpr::Int0t(c) => 1 + c.int_depth(),
            CFExpr::Sum(v) | CFExpr::Prod(v) => v.iter().map(|c| c.int_depth()).max().unwrap_or(0),
        }
    }

    /// Check the structural invariants: HG arguments vanish at 0, valid
    /// parameters.
    pub fn check(&self) -> Result<()> {
        match self {
            CFExpr::Rational(_) => Ok(()),
            CFExpr::HG(p, w) => {
                p.check()?;
                if !w.is_zero() && w.valuation() <= 0 {
                    return Err(Error::SubstitutionNotVanishing);
                }
                Ok(())
            }
            CFExpr::Pow(c, _) | CFExpr::Scale(_, c) | CFExpr::InvT(c) | CFExpr::Int0t(c) => c.check(),
            CFExpr::Sum(v) | CFExpr::Prod(v) => v.iter().try_for_each(|c| c.check()),
        }
    }
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.is_negative() {
        if q % 2 == 0 {
            return None;
        }
        return exact_root(&-n, q).map(|r| -r);
    }
    let r = n.nth_root(q);
    if r.pow(q) == *n {
        Some(r)
    } else {
        None
    }
}

/// c^(p/q) when it is rational.
fn rat_pow(c: &Rat, e: &Rat) -> Option<Rat> {
    let q: u32 = e.denom().try_into().ok()?;
    let p: i32 = e.numer().try_into().ok()?;
    let rn = exact_root(c.numer(), q)?;
    let rd = exact_root(c.denom(), q)?;
    Some(Rat::new(rn, rd).pow(p))
}

/// s^e for s = c·t^v·(1 + O(t)) with v·e integral and c^e rational.
fn series_pow(s: &TSeries, e: &Rat) -> Result<TSeries> {
    let v = s.valuation().ok_or(Error::NonUnitBase)?;
    let c = s.coeff(v);
    let ve = &Rat::from(v) * e;
    if !ve.is_integer() {
        return Err(Error::NonUnitBase);
    }
    let ce = rat_pow(&c, e).ok_or(Error::NonUnitBase)?;
    let unit = s.shift(-v).scale(&c.recip());
    let r = unit.pow_rational(e)?;
    Ok(r.scale(&ce).shift(ve.to_i64().expect("small exponent")))
}

fn eval_series(e: &CFExpr, m: i64) -> Result<TSeries> {
    Ok(match e {
        CFExpr::Rational(f) => ratfn_expand_at_zero(f, m)?,
        CFExpr::Pow(c, p) => series_pow(&eval_series(c, m)?, p)?,
        CFExpr::HG(p, w) => {
            if w.is_zero() {
                TSeries::constant(Rat::one(), m)
            } else {
                hg_series(p, m)?.compose_rational_to(w, m)?
            }
        }
        CFExpr::Int0t(c) => eval_series(c, m)?.integrate()?,
        CFExpr::Sum(v) => {
            let mut it = v.iter();
            let mut acc = match it.next() {
                Some(c) => eval_series(c, m)?,
                None => TSeries::zero(m),
            };
            for c in it {
                acc = acc.add(&eval_series(c, m)?);
            }
            acc
        }
        CFExpr::Prod(v) => {
            let mut it = v.iter();
            let mut acc = match it.next() {
                Some(c) => eval_series(c, m)?,
                None => TSeries::constant(Rat::one(), m),
            };
            for c in it {
                acc = acc.mul(&eval_series(c, m)?);
            }
            acc
        }
        CFExpr::Scale(a, c) => eval_series(c, m)?.scale(a),
        CFExpr::InvT(c) => eval_series(c, m)?.shift(-1),
    })
}

/// Formal expansion through t^n.
pub fn cf_eval_series(e: &CFExpr, n: i64) -> Result<TSeries> {
    e.check()?;
    let mut margin = 8;
    loop {
        let s = eval_series(e, n + margin)?;
        if s.order() >= n {
            return Ok(s.truncate(n));
        }
        if margin > 4 * n + 64 {
            return Err(Error::InsufficientTerms { need: n as usize + 1, have: (s.order() + 1).max(0) as usize });
        }
        margin *= 2;
    }
}

fn poly_at(p: &Poly, t: &BigF) -> BigF {
    let prec = t.prec();
    let mut acc = BigF::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * t) + &BigF::from_rat(c, prec);
    }
    acc
}

pub fn ratfn_at(f: &RatFn, t: &BigF) -> Result<BigF> {
    let d = poly_at(f.den(), t);
    if d.is_zero() {
        return Err(Error::ArgumentOutOfRange);
    }
    Ok(&poly_at(f.num(), t) / &d)
}

struct NumCtx<'a> {
    prec: u32,
    cache: &'a GlCache,
}

fn eval_numeric(e: &CFExpr, t: &BigF, ctx: &NumCtx) -> Result<BigF> {
    let p = ctx.prec;
    Ok(match e {
        CFExpr::Rational(f) => ratfn_at(f, t)?,
        CFExpr::Pow(c, r) => {
            let v = eval_numeric(c, t, ctx)?;
            if v.is_zero() {
                if r > &Rat::zero() {
                    return Ok(BigF::zero(p));
                }
                return Err(Error::ArgumentOutOfRange);
            }
            if v.signum() < 0 {
                return Err(Error::ArgumentOutOfRange);
            }
            v.pow_rat(r)
        }
        CFExpr::HG(hp, w) => hg_numeric(hp, &ratfn_at(w, t)?, p)?,
        CFExpr::Int0t(c) => {
            // the polar part is integrated formally, the regular
            // remainder numerically on [0, t]
            let ser = cf_eval_series(c, 0)?;
            let pp = ser.polar_part();
            if !ser.coeff(-1).is_zero() {
                return Err(Error::ResidueObstruction);
            }
            let has_pp = pp.valuation().is_some_and(|v| v < 0);
            let guard = if has_pp { 96 } else { 16 };
            let inner = NumCtx { prec: p + guard, cache: ctx.cache };
            let pp_at = |u: &BigF| -> BigF {
                let mut acc = BigF::zero(p + guard);
                for k in pp.min_exp()..0 {
                    let a = pp.coeff(k);
                    if !a.is_zero() {
                        acc = &acc + &u.powi(k).mul_rat(&a);
                    }
                }
                acc
            };
            let mut f = |u: &BigF| -> Result<BigF> {
                let v = eval_numeric(c, u, &inner)?;
                Ok(if has_pp { &v - &pp_at(u) } else { v })
            };
            let zero = BigF::zero(p + guard);
            let tt = t.with_prec(p + guard);
            let reg = integrate_adaptive(&mut f, &zero, &tt, p + 8, 16, ctx.cache)?;
            let mut formal = BigF::zero(p + guard);
            for k in pp.min_exp()..-1 {
                let a = pp.coeff(k);
                if !a.is_zero() {
                    formal = &formal + &tt.powi(k + 1).mul_rat(&(&a / &Rat::from(k + 1)));
                }
            }
            (&reg + &formal).with_prec(p)
        }
        CFExpr::Sum(v) => {
            let mut acc = BigF::zero(p);
            for c in v {
                acc = &acc + &eval_numeric(c, t, ctx)?;
            }
            acc
        }
        CFExpr::Prod(v) => {
            let mut acc = BigF::one(p);
            for c in v {
                acc = &acc * &eval_numeric(c, t, ctx)?;
            }
            acc
        }
        CFExpr::Scale(a, c) => eval_numeric(c, t, ctx)?.mul_rat(a),
        CFExpr::InvT(c) => &eval_numeric(c, t, ctx)? / t,
    })
}

/// Numeric value at t, with Gauss–Legendre quadrature for each Int0t.
pub fn cf_eval_numeric(e: &CFExpr, t: &BigF, prec: u32) -> Result<BigF> {
    e.check()?;
    if e.int_depth() > 2 {
        return Err(Error::BadParameters);
    }
    let cache = GlCache::new();
    let ctx = NumCtx { prec: prec + 16, cache: &cache };
    Ok(eval_numeric(e, &t.with_prec(prec + 16), &ctx)?.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int0t_of_one() {
        let e = CFExpr::poly(&[1]).int0t();
        let s = cf_eval_series(&e, 5).unwrap();
        assert_eq!(s, TSeries::monomial(Rat::one(), 1, 5));
        let z = CFExpr::poly(&[]).int0t();
        let v = cf_eval_numeric(&z, &BigF::from_rat(&Rat::frac(1, 10), 64), 64).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn motzkin_surd() {
        // (1 − t − ((1+t)(1−3t))^{1/2}) / (2t²)
        let sq = CFExpr::Rational(RatFn::from_poly(Poly::from_ints(&[1, -2, -3]))).pow(Rat::frac(1, 2));
        let e = CFExpr::Sum(alloc::vec![CFExpr::poly(&[1, -1]), sq.scale(Rat::from(-1))])
            .inv_t()
            .inv_t()
            .scale(Rat::frac(1, 2));
        let s = cf_eval_series(&e, 5).unwrap();
        let want: Vec<Rat> = [1, 1, 2, 4, 9, 21].iter().map(|&v| Rat::from(v)).collect();
        assert_eq!(s.power_coeffs(), want);
    }

    #[test]
    fn pow_with_valuation() {
        // (4t²)^{1/2} = 2t
        let e = CFExpr::poly(&[0, 0, 4]).pow(Rat::frac(1, 2));
        let s = cf_eval_series(&e, 3).unwrap();
        assert_eq!(s.coeff(1), Rat::from(2));
        let bad = CFExpr::poly(&[2]).pow(Rat::frac(1, 2));
        assert_eq!(cf_eval_series(&bad, 3), Err(Error::NonUnitBase));
    }

    #[test]
    fn residue_obstruction() {
        let e = CFExpr::Rational(RatFn::var_pow(-1)).int0t();
        assert_eq!(cf_eval_series(&e, 3), Err(Error::ResidueObstruction));
    }
}
