use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use super::rat::Rat;
use super::upoly::{Field, Poly};

/// Univariate rational function num/den, gcd-reduced with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn::zero();
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
        if l.is_one() {
            RatFn { num, den }
        } else {
            let li = l.recip();
            RatFn { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(a: Rat) -> RatFn {
        RatFn::from_poly(Poly::constant(a))
    }

    pub fn from_i64(a: i64) -> RatFn {
        RatFn::constant(Rat::from(a))
    }

    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFn {
        RatFn::from_poly(Poly::one())
    }

    /// The variable itself.
    pub fn var() -> RatFn {
        RatFn::from_poly(Poly::x())
    }

    /// X^k for any integer k.
    pub fn var_pow(k: i64) -> RatFn {
        if k >= 0 {
            RatFn::from_poly(Poly::monomial(Rat::one(), k as usize))
        } else {
            RatFn { num: Poly::one(), den: Poly::monomial(Rat::one(), (-k) as usize) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// Valuation at 0: ord(num) − ord(den).
    pub fn valuation(&self) -> i64 {
        assert!(!self.is_zero());
        self.num.low_degree() as i64 - self.den.low_degree() as i64
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn derivative(&self) -> RatFn {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFn::new(n, &self.den * &self.den)
    }

    pub fn recip(&self) -> RatFn {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> RatFn {
        if e < 0 {
            return self.recip().pow(-e);
        }
        RatFn::new(self.num.pow(e as u32), self.den.pow(e as u32))
    }

    pub fn scale(&self, a: &Rat) -> RatFn {
        if a.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(a), den: self.den.clone() }
    }

    /// Composition self(g).
    pub fn compose(&self, g: &RatFn) -> RatFn {
        let horner = |p: &Poly| {
            let mut acc = RatFn::zero();
            for a in p.coeffs().iter().rev() {
                acc = &(&acc * g) + &RatFn::constant(a.clone());
            }
            acc
        };
        &horner(&self.num) / &horner(&self.den)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone());
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &(-o)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFn::from_poly(&self.num * &o.num);
        }
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, o: &RatFn) -> RatFn {
        self * &o.recip()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, o: RatFn) -> RatFn {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl Field for RatFn {
    fn f_zero() -> RatFn {
        RatFn::zero()
    }
    fn f_one() -> RatFn {
        RatFn::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &RatFn) -> RatFn {
        self + o
    }
    fn f_sub(&self, o: &RatFn) -> RatFn {
        self - o
    }
    fn f_mul(&self, o: &RatFn) -> RatFn {
        self * o
    }
    fn f_neg(&self) -> RatFn {
        -self
    }
    fn f_inv(&self) -> RatFn {
        self.recip()
    }
    fn f_from_i64(n: i64) -> RatFn {
        RatFn::from_i64(n)
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> RatFn {
        RatFn::from_poly(p)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({:?} / {:?})", self.num, self.den)
    }
}

/// Univariate Laurent polynomial, sparse, no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly1 {
    terms: BTreeMap<i64, Rat>,
}

impl LPoly1 {
    pub fn zero() -> LPoly1 {
        LPoly1::default()
    }

    pub fn monomial(a: Rat, k: i64) -> LPoly1 {
        let mut p = LPoly1::zero();
        p.add_term(k, a);
        p
    }

    pub fn add_term(&mut self, k: i64, a: Rat) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += &a;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rat> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn to_ratfn(&self) -> RatFn {
        let lo = match self.min_exp() {
            Some(lo) => lo.min(0),
            None => return RatFn::zero(),
        };
        let hi = self.max_exp().unwrap();
        let mut c = alloc::vec![Rat::zero(); (hi - lo + 1) as usize];
        for (k, a) in &self.terms {
            c[(k - lo) as usize] = a.clone();
        }
        &RatFn::from_poly(Poly::new(c)) * &RatFn::var_pow(lo)
    }

    pub fn mul(&self, o: &LPoly1) -> LPoly1 {
        let mut r = LPoly1::zero();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                r.add_term(i + j, a * b);
            }
        }
        r
    }

    pub fn add(&self, o: &LPoly1) -> LPoly1 {
        let mut r = self.clone();
        for (k, a) in &o.terms {
            r.add_term(*k, a.clone());
        }
        r
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.terms.iter().map(|(k, a)| a * &x.pow(*k as i32)).sum()
    }
}

impl fmt::Debug for LPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_canonical() {
        let a = RatFn::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[2, 2]));
        assert_eq!(a, RatFn::from_poly(Poly::from_ints(&[-1, 1])));
        let b = RatFn::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 3]));
        assert_eq!(b.den(), &Poly::from_ints(&[0, 1]));
        assert_eq!(b.num(), &Poly::new(alloc::vec![Rat::frac(1, 3)]));
    }

    #[test]
    fn arithmetic_and_compose() {
        let x = RatFn::var();
        let xb = RatFn::var_pow(-1);
        let s = &x + &xb;
        assert_eq!(s.compose(&xb), s);
        assert_eq!((&x * &xb), RatFn::one());
        assert_eq!(s.derivative(), &RatFn::one() - &RatFn::var_pow(-2));
        assert_eq!(RatFn::var_pow(-3).valuation(), -3);
    }

    #[test]
    fn laurent_to_ratfn() {
        let mut p = LPoly1::zero();
        p.add_term(-1, Rat::one());
        p.add_term(1, Rat::one());
        assert_eq!(p.to_ratfn(), &RatFn::var() + &RatFn::var_pow(-1));
    }
}
