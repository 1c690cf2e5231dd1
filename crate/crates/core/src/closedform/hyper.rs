use alloc::vec::Vec;

use crate::arith::{BigF, Rat};
use crate::error::{Error, Result};
use crate::series::TSeries;

/// Parameters of ₂F₁(a, b; c; w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGParams {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HGParams {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Result<HGParams> {
        let p = HGParams { a, b, c };
        p.check()?;
        Ok(p)
    }

    pub fn frac(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> HGParams {
        HGParams::new(Rat::frac(a.0, a.1), Rat::frac(b.0, b.1), Rat::frac(c.0, c.1)).expect("valid parameters")
    }

    pub fn check(&self) -> Result<()> {
        if self.c.is_integer() && self.c <= Rat::zero() {
            Err(Error::BadParameters)
        } else {
            Ok(())
        }
    }

    /// Parameters of d/dw ₂F₁: (a+1, b+1; c+1), up to the factor ab/c.
    pub fn shifted(&self) -> HGParams {
        let one = Rat::one();
        HGParams { a: &self.a + &one, b: &self.b + &one, c: &self.c + &one }
    }
}

/// (x)_n = x(x+1)⋯(x+n−1).
pub fn pochhammer(x: &Rat, n: u64) -> Rat {
    let mut r = Rat::one();
    for k in 0..n {
        r = &r * &(x + &Rat::from(k as i64));
    }
    r
}

/// Σ_{n ≤ N} (a)_n (b)_n / ((c)_n n!) tⁿ.
pub fn hg_series(p: &HGParams, n: i64) -> Result<TSeries> {
    p.check()?;
    let mut c = Vec::with_capacity(n.max(0) as usize + 1);
    let mut term = Rat::one();
    for k in 0..=n {
        c.push(term.clone());
        let kk = Rat::from(k);
        let num = &(&p.a + &kk) * &(&p.b + &kk);
        let den = &(&p.c + &kk) * &(&kk + &Rat::one());
        term = &(&term * &num) / &den;
    }
    Ok(TSeries::new(0, c, n))
}

/// Numeric ₂F₁(a, b; c; w) by direct summation, for |w| ≤ 0.85.
pub fn hg_numeric(p: &HGParams, w: &BigF, prec: u32) -> Result<BigF> {
    p.check()?;
    if w.abs() > BigF::from_rat(&Rat::frac(17, 20), 64) {
        return Err(Error::ArgumentOutOfRange);
    }
    let wp = prec + 32;
    let w = w.with_prec(wp);
    let mut sum = BigF::one(wp);
    let mut term = BigF::one(wp);
    let mut k: i64 = 0;
    loop {
        let kk = Rat::from(k);
        let ratio = &(&(&p.a + &kk) * &(&p.b + &kk)) / &(&(&p.c + &kk) * &(&kk + &Rat::one()));
        term = &term.mul_rat(&ratio) * &w;
        sum = &sum + &term;
        k += 1;
        if term.is_zero() {
            break;
        }
        // once the term ratio has settled below 1 the tail is a geometric
        // multiple of the current term
        let settled = ratio.abs() <= Rat::one() || k > 4 * (&p.a.abs() + &p.b.abs()).to_f64() as i64 + 8;
        if settled && term.top() < sum.top() - prec as i64 - 16 {
            break;
        }
        if k > 1_000_000 {
            return Err(Error::QuadratureNoConvergence);
        }
    }
    Ok(sum.with_prec(prec))
}

/// K(k) = (π/2)·₂F₁(1/2, 1/2; 1; k²).
pub fn elliptic_k(k: &BigF, prec: u32) -> Result<BigF> {
    let f = hg_numeric(&HGParams::frac((1, 2), (1, 2), (1, 1)), &(k * k), prec + 8)?;
    Ok((&f * &BigF::pi(prec + 8)).ldexp(-1).with_prec(prec))
}

/// E(k) = (π/2)·₂F₁(−1/2, 1/2; 1; k²).
pub fn elliptic_e(k: &BigF, prec: u32) -> Result<BigF> {
    let f = hg_numeric(&HGParams::frac((-1, 2), (1, 2), (1, 1)), &(k * k), prec + 8)?;
    Ok((&f * &BigF::pi(prec + 8)).ldexp(-1).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(&Rat::frac(3, 2), 0), Rat::one());
        for n in 0..8u64 {
            assert_eq!(pochhammer(&Rat::one(), n), Rat::from(crate::arith::factorial(n)));
        }
    }

    #[test]
    fn half_half_coefficients() {
        let s = hg_series(&HGParams::frac((1, 2), (1, 2), (1, 1)), 4).unwrap();
        assert_eq!(s.coeff(0), Rat::one());
        assert_eq!(s.coeff(1), Rat::frac(1, 4));
        assert_eq!(s.coeff(2), Rat::frac(9, 64));
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(HGParams::new(Rat::one(), Rat::one(), Rat::from(-2)), Err(Error::BadParameters));
        assert_eq!(HGParams::new(Rat::one(), Rat::one(), Rat::zero()), Err(Error::BadParameters));
        assert!(HGParams::new(Rat::one(), Rat::one(), Rat::frac(-1, 2)).is_ok());
    }

    #[test]
    fn numeric_basics() {
        let p = HGParams::frac((1, 2), (1, 2), (1, 1));
        assert_eq!(hg_numeric(&p, &BigF::zero(64), 128).unwrap(), BigF::one(128));
        let k0 = elliptic_k(&BigF::zero(64), 128).unwrap();
        let half_pi = BigF::pi(128).ldexp(-1);
        assert!((&k0 - &half_pi).abs().top() < -120);
        assert_eq!(hg_numeric(&p, &BigF::from_rat(&Rat::frac(9, 10), 64), 64), Err(Error::ArgumentOutOfRange));
    }

    #[test]
    fn numeric_matches_series_sum() {
        let p = HGParams::frac((1, 2), (1, 2), (1, 1));
        let w = BigF::from_rat(&Rat::frac(1, 2), 64);
        let a = hg_numeric(&p, &w, 128).unwrap();
        let b = hg_series(&p, 200).unwrap().sum_at(&w.with_prec(160));
        assert!((&a - &b).abs().top() < -126);
    }
}
