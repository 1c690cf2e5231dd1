//! Bivariate Laurent polynomials and rational functions in (x, y).
//!
//! `RatFn2` is stored as a fraction of polynomials in y with coefficients in
//! Q(x): gcd-reduced and monic in y, which makes structural equality
//! coincide with equality of rational functions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use super::rat::Rat;
use super::ratfn::{LPoly1, RatFn};
use super::upoly::{Field, UPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly2 {
    terms: BTreeMap<(i64, i64), Rat>,
}

impl LPoly2 {
    pub fn zero() -> LPoly2 {
        LPoly2::default()
    }

    pub fn one() -> LPoly2 {
        LPoly2::monomial(Rat::one(), 0, 0)
    }

    pub fn monomial(a: Rat, i: i64, j: i64) -> LPoly2 {
        let mut p = LPoly2::zero();
        p.add_term(i, j, a);
        p
    }

    /// Step polynomial Σ x^i y^j over the given steps.
    pub fn from_steps(steps: &[(i64, i64)]) -> LPoly2 {
        let mut p = LPoly2::zero();
        for &(i, j) in steps {
            p.add_term(i, j, Rat::one());
        }
        p
    }

    pub fn add_term(&mut self, i: i64, j: i64, a: Rat) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *e += &a;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Rat> {
        &self.terms
    }

    pub fn coeff(&self, i: i64, j: i64) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, a: &Rat) -> LPoly2 {
        if a.is_zero() {
            return LPoly2::zero();
        }
        LPoly2 { terms: self.terms.iter().map(|(k, c)| (*k, c * a)).collect() }
    }

    pub fn mul(&self, o: &LPoly2) -> LPoly2 {
        let mut r = LPoly2::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                r.add_term(i + k, j + l, a * b);
            }
        }
        r
    }

    pub fn add(&self, o: &LPoly2) -> LPoly2 {
        let mut r = self.clone();
        for ((i, j), a) in &o.terms {
            r.add_term(*i, *j, a.clone());
        }
        r
    }

    pub fn sub(&self, o: &LPoly2) -> LPoly2 {
        self.add(&o.scale(&Rat::from(-1)))
    }

    pub fn pow(&self, e: u32) -> LPoly2 {
        let mut r = LPoly2::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Exchange the roles of x and y.
    pub fn swap_xy(&self) -> LPoly2 {
        LPoly2 { terms: self.terms.iter().map(|((i, j), a)| ((*j, *i), a.clone())).collect() }
    }

    /// Coefficient of y^j as a Laurent polynomial in x.
    pub fn y_coeff(&self, j: i64) -> LPoly1 {
        let mut p = LPoly1::zero();
        for ((a, b), c) in &self.terms {
            if *b == j {
                p.add_term(*a, c.clone());
            }
        }
        p
    }

    /// Coefficient of x^i as a Laurent polynomial in y.
    pub fn x_coeff(&self, i: i64) -> LPoly1 {
        self.swap_xy().y_coeff(i)
    }

    /// Terms with both exponents strictly positive.
    pub fn positive_part(&self) -> LPoly2 {
        LPoly2 { terms: self.terms.iter().filter(|((i, j), _)| *i > 0 && *j > 0).map(|(k, a)| (*k, a.clone())).collect() }
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms.iter().map(|((i, j), a)| a * &x.pow(*i as i32) * y.pow(*j as i32)).sum()
    }

    pub fn to_ratfn2(&self) -> RatFn2 {
        let jmin = self.terms.keys().map(|k| k.1).min().unwrap_or(0).min(0);
        let jmax = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let mut c = Vec::new();
        for j in jmin..=jmax {
            c.push(self.y_coeff(j).to_ratfn());
        }
        let num = UPoly::new(c);
        let den = UPoly::monomial(RatFn::one(), (-jmin) as usize);
        RatFn2::from_parts(num, den)
    }

    /// Substitute x ↦ xs, y ↦ ys.
    pub fn substitute(&self, xs: &RatFn2, ys: &RatFn2) -> Result<RatFn2> {
        if xs.is_zero() || ys.is_zero() {
            return Err(Error::ZeroSubstitutionImage);
        }
        let mut acc = RatFn2::zero();
        for ((i, j), a) in &self.terms {
            let m = &xs.pow(*i as i32) * &ys.pow(*j as i32);
            acc = &acc + &m.scale(a);
        }
        Ok(acc)
    }
}

impl fmt::Debug for LPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})x^{}y^{}", a, i, j)?;
        }
        Ok(())
    }
}

/// Rational function in (x, y) as a fraction over Q(x)[y].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn2 {
    num: UPoly<RatFn>,
    den: UPoly<RatFn>,
}

impl RatFn2 {
    pub fn from_parts(num: UPoly<RatFn>, den: UPoly<RatFn>) -> RatFn2 {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn2::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.divrem(&g).0, den.divrem(&g).0)
            }
        };
        let l = den.lead();
        if l == RatFn::one() {
            RatFn2 { num, den }
        } else {
            let li = l.recip();
            RatFn2 { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn zero() -> RatFn2 {
        RatFn2 { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> RatFn2 {
        RatFn2::from_x(RatFn::one())
    }

    /// Element of Q(x) viewed in Q(x, y).
    pub fn from_x(f: RatFn) -> RatFn2 {
        RatFn2 { num: UPoly::constant(f), den: UPoly::one() }
    }

    /// Element of Q(y) viewed in Q(x, y).
    pub fn from_y(f: &RatFn) -> RatFn2 {
        let lift = |p: &super::upoly::Poly| UPoly::new(p.coeffs().iter().map(|a| RatFn::constant(a.clone())).collect());
        RatFn2::from_parts(lift(f.num()), lift(f.den()))
    }

    pub fn x() -> RatFn2 {
        RatFn2::from_x(RatFn::var())
    }

    pub fn y() -> RatFn2 {
        RatFn2 { num: UPoly::x(), den: UPoly::one() }
    }

    pub fn num(&self) -> &UPoly<RatFn> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<RatFn> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, a: &Rat) -> RatFn2 {
        if a.is_zero() {
            return RatFn2::zero();
        }
        RatFn2 { num: self.num.scale(&RatFn::constant(a.clone())), den: self.den.clone() }
    }

    pub fn recip(&self) -> RatFn2 {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFn2::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> RatFn2 {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut r = RatFn2::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Option<Rat> {
        let ev = |p: &UPoly<RatFn>| -> Option<Rat> {
            let mut acc = Rat::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc * y + c.eval(x)?;
            }
            Some(acc)
        };
        let d = ev(&self.den)?;
        if d.is_zero() {
            return None;
        }
        Some(ev(&self.num)? / d)
    }

    /// Substitute x ↦ xs, y ↦ ys.
    pub fn substitute(&self, xs: &RatFn2, ys: &RatFn2) -> RatFn2 {
        let lift_x = |p: &super::upoly::Poly| {
            let mut acc = RatFn2::zero();
            for a in p.coeffs().iter().rev() {
                acc = &(&acc * xs) + &RatFn2::from_x(RatFn::constant(a.clone()));
            }
            acc
        };
        let horner = |p: &UPoly<RatFn>| {
            let mut acc = RatFn2::zero();
            for c in p.coeffs().iter().rev() {
                let cv = &lift_x(c.num()) / &lift_x(c.den());
                acc = &(&acc * ys) + &cv;
            }
            acc
        };
        &horner(&self.num) / &horner(&self.den)
    }

    /// Laurent-polynomial form, if the denominator is a monomial.
    pub fn to_lpoly2(&self) -> Option<LPoly2> {
        let dk = self.den.deg();
        if self.den.coeffs()[..dk as usize].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let dl = self.den.lead();
        if !dl.is_constant() {
            return None;
        }
        let mut out = LPoly2::zero();
        for (j, c) in self.num.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.den();
            let xk = d.low_degree();
            if d.deg() as usize != xk {
                return None;
            }
            let dc = d.lead();
            for (i, a) in c.num().coeffs().iter().enumerate() {
                if !a.is_zero() {
                    out.add_term(i as i64 - xk as i64, j as i64 - dk, a / &dc);
                }
            }
        }
        Some(out)
    }
}

impl Add for &RatFn2 {
    type Output = RatFn2;
    fn add(self, o: &RatFn2) -> RatFn2 {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn2::from_parts(&self.num + &o.num, self.den.clone());
        }
        RatFn2::from_parts(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFn2 {
    type Output = RatFn2;
    fn sub(self, o: &RatFn2) -> RatFn2 {
        self + &(-o)
    }
}

impl Neg for &RatFn2 {
    type Output = RatFn2;
    fn neg(self) -> RatFn2 {
        RatFn2 { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFn2 {
    type Output = RatFn2;
    fn mul(self, o: &RatFn2) -> RatFn2 {
        if self.is_zero() || o.is_zero() {
            return RatFn2::zero();
        }
        RatFn2::from_parts(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFn2 {
    type Output = RatFn2;
    fn div(self, o: &RatFn2) -> RatFn2 {
        self * &o.recip()
    }
}

impl Field for RatFn2 {
    fn f_zero() -> RatFn2 {
        RatFn2::zero()
    }
    fn f_one() -> RatFn2 {
        RatFn2::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &RatFn2) -> RatFn2 {
        self + o
    }
    fn f_sub(&self, o: &RatFn2) -> RatFn2 {
        self - o
    }
    fn f_mul(&self, o: &RatFn2) -> RatFn2 {
        self * o
    }
    fn f_neg(&self) -> RatFn2 {
        -self
    }
    fn f_inv(&self) -> RatFn2 {
        self.recip()
    }
    fn f_from_i64(n: i64) -> RatFn2 {
        RatFn2::from_x(RatFn::from_i64(n))
    }
}

impl fmt::Debug for RatFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_lpoly2() {
            Some(p) => write!(f, "{:?}", p),
            None => write!(f, "({:?}) / ({:?})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xb() -> RatFn2 {
        RatFn2::x().recip()
    }

    #[test]
    fn monomial_products() {
        let a = LPoly2::monomial(Rat::one(), 1, 1);
        let b = LPoly2::monomial(Rat::one(), -1, -1);
        assert_eq!(a.mul(&b), LPoly2::one());
    }

    #[test]
    fn king_invariance() {
        let mut steps = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if (i, j) != (0, 0) {
                    steps.push((i, j));
                }
            }
        }
        let s = LPoly2::from_steps(&steps);
        let yb = RatFn2::y().recip();
        let img = s.substitute(&xb(), &yb).unwrap();
        assert_eq!(img, s.to_ratfn2());
        assert_eq!(img.to_lpoly2().unwrap(), s);
    }

    #[test]
    fn symmetric_under_inversion() {
        let p = LPoly2::from_steps(&[(1, 0), (-1, 0)]);
        let img = p.substitute(&xb(), &RatFn2::y()).unwrap();
        assert_eq!(img.to_lpoly2().unwrap(), p);
        assert_eq!(p.substitute(&RatFn2::zero(), &RatFn2::y()), Err(Error::ZeroSubstitutionImage));
    }

    #[test]
    fn canonical_equality() {
        // (x + y)/(x·y) == 1/y + 1/x
        let x = RatFn2::x();
        let y = RatFn2::y();
        let a = &(&x + &y) / &(&x * &y);
        let b = &x.recip() + &y.recip();
        assert_eq!(a, b);
        assert!(a.to_lpoly2().is_some());
        let c = (&x + &y).recip();
        assert!(c.to_lpoly2().is_none());
        assert_eq!(c.eval(&Rat::from(1), &Rat::from(2)), Some(Rat::frac(1, 3)));
    }

    #[test]
    fn substitution_composes() {
        let x = RatFn2::x();
        let y = RatFn2::y();
        let f = &(&x + &y) / &(&x - &y.pow(2));
        let g = f.substitute(&y, &x);
        assert_eq!(g.substitute(&y, &x), f);
    }
}
