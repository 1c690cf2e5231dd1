//! Truncated Laurent series in t over Q.
//!
//! A `TSeries` stores the coefficients of exponents `min_exp..=order`; every
//! coefficient above `order` is unknown. Operations compute the largest order
//! that is still provably exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arith::{BigF, Poly, Rat, RatFn};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TSeries {
    min_exp: i64,
    order: i64,
    c: Vec<Rat>,
}

impl TSeries {
    /// Coefficients for exponents `min_exp..=order`.
    pub fn new(min_exp: i64, c: Vec<Rat>, order: i64) -> TSeries {
        assert_eq!(c.len() as i64, (order - min_exp + 1).max(0), "coefficient count does not match window");
        assert!(order >= min_exp - 1);
        TSeries { min_exp, order, c }
    }

    /// Power series from its first coefficients; order = len − 1.
    pub fn from_coeffs(c: Vec<Rat>) -> TSeries {
        let order = c.len() as i64 - 1;
        TSeries { min_exp: 0, order, c }
    }

    pub fn from_ints(c: &[i64]) -> TSeries {
        TSeries::from_coeffs(c.iter().map(|&a| Rat::from(a)).collect())
    }

    /// The zero series known through `order`.
    pub fn zero(order: i64) -> TSeries {
        let order = order.max(-1);
        TSeries { min_exp: 0, order, c: vec![Rat::zero(); (order + 1) as usize] }
    }

    pub fn constant(a: Rat, order: i64) -> TSeries {
        let mut s = TSeries::zero(order.max(0));
        s.c[0] = a;
        s.truncate(order)
    }

    /// a·t^k known through `order`.
    pub fn monomial(a: Rat, k: i64, order: i64) -> TSeries {
        let lo = k.min(0);
        let mut c = vec![Rat::zero(); (order - lo + 1).max(0) as usize];
        if k <= order {
            c[(k - lo) as usize] = a;
        }
        TSeries::new(lo, c, order.max(lo - 1))
    }

    pub fn from_poly(p: &Poly, order: i64) -> TSeries {
        let c = (0..=order).map(|i| p.coeff(i as usize)).collect();
        TSeries { min_exp: 0, order, c }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    /// Coefficient of t^n; zero below the window, `None` above the order.
    pub fn get(&self, n: i64) -> Option<Rat> {
        if n > self.order {
            None
        } else if n < self.min_exp {
            Some(Rat::zero())
        } else {
            Some(self.c[(n - self.min_exp) as usize].clone())
        }
    }

    /// Coefficient of t^n; panics above the valid order.
    pub fn coeff(&self, n: i64) -> Rat {
        self.get(n).unwrap_or_else(|| panic!("coefficient t^{} beyond order {}", n, self.order))
    }

    fn cref(&self, n: i64) -> Option<&Rat> {
        if n < self.min_exp || n > self.order {
            None
        } else {
            Some(&self.c[(n - self.min_exp) as usize])
        }
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.c.iter().position(|a| !a.is_zero()).map(|i| i as i64 + self.min_exp)
    }

    /// Lower bound for the true valuation.
    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.order + 1)
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.valuation().is_none()
    }

    /// Lower the valid order.
    pub fn truncate(&self, order: i64) -> TSeries {
        if order >= self.order {
            return self.clone();
        }
        let order = order.max(self.min_exp - 1);
        TSeries { min_exp: self.min_exp, order, c: self.c[..(order - self.min_exp + 1) as usize].to_vec() }
    }

    /// Same series stored from `lo` (≤ current min_exp).
    fn widened(&self, lo: i64) -> TSeries {
        if lo >= self.min_exp {
            return self.clone();
        }
        let mut c = vec![Rat::zero(); (self.min_exp - lo) as usize];
        c.extend(self.c.iter().cloned());
        TSeries { min_exp: lo, order: self.order, c }
    }

    pub fn scale(&self, a: &Rat) -> TSeries {
        TSeries { min_exp: self.min_exp, order: self.order, c: self.c.iter().map(|x| x * a).collect() }
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> TSeries {
        TSeries { min_exp: self.min_exp + k, order: self.order + k, c: self.c.clone() }
    }

    pub fn add(&self, o: &TSeries) -> TSeries {
        let lo = self.min_exp.min(o.min_exp);
        let order = self.order.min(o.order);
        let c = (lo..=order)
            .map(|n| match (self.cref(n), o.cref(n)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Rat::zero(),
            })
            .collect();
        TSeries { min_exp: lo, order, c }
    }

    pub fn sub(&self, o: &TSeries) -> TSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TSeries {
        self.scale(&Rat::from(-1))
    }

    pub fn mul(&self, o: &TSeries) -> TSeries {
        let order = (self.order + o.val_bound()).min(o.order + self.val_bound());
        let lo = self.min_exp + o.min_exp;
        let order = order.max(lo - 1);
        let mut c = vec![Rat::zero(); (order - lo + 1) as usize];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ei = self.min_exp + i as i64;
            for (j, b) in o.c.iter().enumerate() {
                let e = ei + o.min_exp + j as i64;
                if e > order {
                    break;
                }
                if !b.is_zero() {
                    c[(e - lo) as usize] += &(a * b);
                }
            }
        }
        TSeries { min_exp: lo, order, c }
    }

    /// Multiply by an exact polynomial (no order loss beyond the shift).
    pub fn mul_poly(&self, p: &Poly) -> TSeries {
        if p.is_zero() {
            return TSeries::zero(self.order);
        }
        let k = p.low_degree() as i64;
        let order = self.order + k;
        let lo = self.min_exp;
        let mut c = vec![Rat::zero(); (order - lo + 1).max(0) as usize];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in p.coeffs().iter().enumerate() {
                let e = lo + i as i64 + j as i64;
                if e > order {
                    break;
                }
                if !b.is_zero() {
                    c[(e - lo) as usize] += &(a * b);
                }
            }
        }
        TSeries { min_exp: lo, order, c }
    }

    pub fn recip(&self) -> Result<TSeries> {
        let v = self.valuation().ok_or(Error::NotInvertible)?;
        let u: Vec<&Rat> = self.c[(v - self.min_exp) as usize..].iter().collect();
        let n = u.len();
        let u0i = u[0].recip();
        let mut b: Vec<Rat> = Vec::with_capacity(n);
        b.push(u0i.clone());
        for k in 1..n {
            let mut s = Rat::zero();
            for j in 1..=k {
                if !u[j].is_zero() {
                    s += &(u[j] * &b[k - j]);
                }
            }
            b.push(-(s * &u0i));
        }
        // 1/s = t^-v / u, u known to order N - v
        Ok(TSeries { min_exp: -v, order: self.order - 2 * v, c: b })
    }

    pub fn div(&self, o: &TSeries) -> Result<TSeries> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn derive(&self) -> TSeries {
        let c = self.c.iter().enumerate().map(|(i, a)| a * &Rat::from(self.min_exp + i as i64)).collect();
        TSeries { min_exp: self.min_exp - 1, order: self.order - 1, c }
    }

    /// Termwise antiderivative with zero constant term.
    pub fn integrate(&self) -> Result<TSeries> {
        match self.get(-1) {
            Some(a) if a.is_zero() => {}
            _ => return Err(Error::ResidueObstruction),
        }
        let lo = (self.min_exp + 1).min(0);
        let order = self.order + 1;
        let mut c = vec![Rat::zero(); (order - lo + 1) as usize];
        for (i, a) in self.c.iter().enumerate() {
            let n = self.min_exp + i as i64;
            if n != -1 && !a.is_zero() {
                c[(n + 1 - lo) as usize] = a / &Rat::from(n + 1);
            }
        }
        Ok(TSeries { min_exp: lo, order, c })
    }

    /// The terms of negative exponent.
    pub fn polar_part(&self) -> TSeries {
        let c = (self.min_exp..=self.order).map(|n| if n < 0 { self.coeff(n) } else { Rat::zero() }).collect();
        TSeries { min_exp: self.min_exp, order: self.order, c }
    }

    /// s(w(t)) for a power series s and w(0) = 0.
    pub fn compose_rational(&self, w: &RatFn) -> Result<TSeries> {
        self.compose_rational_to(w, self.order)
    }

    /// s(w(t)) through t^n where the truncation of s allows.
    pub fn compose_rational_to(&self, w: &RatFn, n: i64) -> Result<TSeries> {
        if self.min_exp < 0 && self.c[..(-self.min_exp) as usize].iter().any(|a| !a.is_zero()) {
            return Err(Error::NonUnitBase);
        }
        if w.is_zero() {
            return Ok(TSeries::constant(self.coeff(0), n));
        }
        let vw = w.valuation();
        if vw <= 0 {
            return Err(Error::SubstitutionNotVanishing);
        }
        let n = n.min((self.order + 1) * vw - 1);
        let ws = ratfn_expand_at_zero(w, n)?;
        let kmax = n / vw;
        let mut acc = TSeries::constant(self.coeff(kmax), n);
        for k in (0..kmax).rev() {
            acc = acc.mul(&ws).truncate(n);
            acc.c[(-acc.min_exp) as usize] += &self.coeff(k);
            acc = acc.trimmed_to_power_series();
        }
        Ok(acc.truncate(n).trimmed_to_power_series())
    }

    fn trimmed_to_power_series(self) -> TSeries {
        if self.min_exp >= 0 {
            return self.widened(0);
        }
        let skip = (-self.min_exp) as usize;
        debug_assert!(self.c[..skip.min(self.c.len())].iter().all(|a| a.is_zero()));
        TSeries { min_exp: 0, order: self.order, c: self.c[skip.min(self.c.len())..].to_vec() }
    }

    /// s^(p/q) for s = 1 + O(t).
    pub fn pow_rational(&self, alpha: &Rat) -> Result<TSeries> {
        let s = if self.min_exp < 0 {
            if self.c[..(-self.min_exp) as usize].iter().any(|a| !a.is_zero()) {
                return Err(Error::NonUnitBase);
            }
            self.clone().trimmed_to_power_series()
        } else {
            self.widened(0)
        };
        if s.order < 0 || !s.c[0].is_one() {
            return Err(Error::NonUnitBase);
        }
        let n = s.order as usize;
        let a1 = alpha + &Rat::one();
        let mut f: Vec<Rat> = Vec::with_capacity(n + 1);
        f.push(Rat::one());
        for m in 1..=n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                if s.c[k].is_zero() {
                    continue;
                }
                let w = &(&a1 * &Rat::from(k as i64)) - &Rat::from(m as i64);
                if w.is_zero() {
                    continue;
                }
                acc += &(&(&w * &s.c[k]) * &f[m - k]);
            }
            f.push(acc / Rat::from(m as i64));
        }
        Ok(TSeries { min_exp: 0, order: s.order, c: f })
    }

    pub fn pow_int(&self, e: i64) -> Result<TSeries> {
        if e < 0 {
            return self.recip()?.pow_int(-e);
        }
        if e == 0 {
            return Ok(TSeries::constant(Rat::one(), self.order.max(0)));
        }
        let mut r = self.clone();
        for _ in 1..e {
            r = r.mul(self);
        }
        Ok(r)
    }

    /// First exponent on the common window where the two differ.
    pub fn first_mismatch(&self, o: &TSeries) -> Option<i64> {
        let lo = self.min_exp.min(o.min_exp);
        let hi = self.order.min(o.order);
        (lo..=hi).find(|&n| self.coeff(n) != o.coeff(n))
    }

    pub fn agrees_with(&self, o: &TSeries) -> bool {
        self.first_mismatch(o).is_none()
    }

    /// Σ a_n t^n over the stored window.
    pub fn sum_at(&self, t: &BigF) -> BigF {
        let p = t.prec();
        let mut acc = BigF::zero(p);
        for a in self.c.iter().rev() {
            acc = &(&acc * t) + &BigF::from_rat(a, p);
        }
        if self.min_exp >= 0 {
            &acc * &t.powi(self.min_exp)
        } else {
            &acc / &t.powi(-self.min_exp)
        }
    }

    /// Power-series coefficients a_0..a_order (requires no polar part).
    pub fn power_coeffs(&self) -> Vec<Rat> {
        (0..=self.order).map(|n| self.coeff(n)).collect()
    }
}

/// Laurent expansion at 0 of f = num/(t^k·D), D(0) ≠ 0, exact through t^n.
pub fn ratfn_expand_at_zero(f: &RatFn, n: i64) -> Result<TSeries> {
    let k = f.den().low_degree() as i64;
    let d = f.den().unshift(k as usize);
    if d.coeff(0).is_zero() {
        return Err(Error::NonUnitDenominator);
    }
    let m = n + k;
    if m < 0 {
        return Ok(TSeries { min_exp: -k, order: n.max(-k - 1), c: vec![Rat::zero(); (n + k + 1).max(0) as usize] });
    }
    // power series division num / D through t^m
    let d0i = d.coeff(0).recip();
    let dc = d.coeffs();
    let mut q: Vec<Rat> = Vec::with_capacity(m as usize + 1);
    for i in 0..=m as usize {
        let mut s = f.num().coeff(i);
        for j in 1..dc.len().min(i + 1) {
            if !dc[j].is_zero() {
                s -= &(&dc[j] * &q[i - j]);
            }
        }
        q.push(s * &d0i);
    }
    Ok(TSeries { min_exp: -k, order: n, c: q })
}

/// Expansion of f(x) in powers of x̄ = 1/x, exact to depth K below the top
/// exponent. Exponent e of the returned series stands for x^(−e).
pub fn ratfn_expand_at_infinity(f: &RatFn, depth: i64) -> TSeries {
    let dn = f.num().deg();
    let dd = f.den().deg();
    if f.is_zero() {
        return TSeries::zero(depth);
    }
    // f(1/u) = u^(dd−dn) · rev(num)(u) / rev(den)(u)
    let rev = |p: &Poly| Poly::new(p.coeffs().iter().rev().cloned().collect());
    let g = RatFn::new(rev(f.num()), rev(f.den()));
    let s = ratfn_expand_at_zero(&g, depth).expect("reversed denominator has nonzero constant term");
    s.shift(dd - dn)
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, o: &TSeries) -> TSeries {
        TSeries::add(self, o)
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, o: &TSeries) -> TSeries {
        TSeries::sub(self, o)
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, o: &TSeries) -> TSeries {
        TSeries::mul(self, o)
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries::neg(self)
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})t^{}", a, self.min_exp + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::frac(n, d)
    }

    #[test]
    fn expand_at_zero_examples() {
        let f = RatFn::new(Poly::from_ints(&[1]), Poly::from_ints(&[1, -1]));
        assert_eq!(ratfn_expand_at_zero(&f, 3).unwrap(), TSeries::from_ints(&[1, 1, 1, 1]));
        let den = &Poly::from_ints(&[0, 0, 1]) * &Poly::from_ints(&[1, -1]).pow(2);
        let g = RatFn::new(Poly::one(), den);
        let s = ratfn_expand_at_zero(&g, 1).unwrap();
        assert_eq!(s.min_exp(), -2);
        assert_eq!(s.coeffs(), &[q(1, 1), q(2, 1), q(3, 1), q(4, 1)]);
        let p = RatFn::from_poly(Poly::from_ints(&[1, -2]));
        assert_eq!(ratfn_expand_at_zero(&p, 5).unwrap(), TSeries::from_ints(&[1, -2, 0, 0, 0, 0]));
        let bad = RatFn::new(Poly::one(), Poly::from_ints(&[0, 1, 1]).shift(0));
        assert!(ratfn_expand_at_zero(&bad, 3).is_ok());
    }

    #[test]
    fn expand_at_infinity_examples() {
        // 1/(x + 1/x) = x/(x^2+1) = xb - xb^3 + xb^5 ...
        let f = RatFn::new(Poly::from_ints(&[0, 1]), Poly::from_ints(&[1, 0, 1]));
        let s = ratfn_expand_at_infinity(&f, 6);
        for (e, v) in [(1, 1), (2, 0), (3, -1), (5, 1), (7, -1)] {
            assert_eq!(s.coeff(e), Rat::from(v));
        }
        let g = RatFn::var_pow(-1);
        let s = ratfn_expand_at_infinity(&g, 4);
        assert_eq!(s.valuation(), Some(1));
        let h = RatFn::new(Poly::one(), &Poly::from_ints(&[0, 0, 1]) * &Poly::from_ints(&[1, -1]).pow(2));
        let s = ratfn_expand_at_infinity(&h, 5);
        assert!(s.valuation().unwrap() >= 4);
    }

    #[test]
    fn ring_examples() {
        let a = TSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(a.recip().unwrap(), TSeries::from_ints(&[1, 1, 1, 1]));
        let tinv = TSeries::monomial(Rat::one(), -1, 3);
        let d = tinv.derive();
        assert_eq!(d.coeff(-2), Rat::from(-1));
        let p = TSeries::from_ints(&[1, 1, 0]).mul(&TSeries::from_ints(&[1, -1, 0]));
        assert_eq!(p, TSeries::from_ints(&[1, 0, -1]));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(TSeries::from_ints(&[1]).integrate().unwrap().coeff(1), Rat::one());
        let s = TSeries::monomial(Rat::one(), -2, 2).integrate().unwrap();
        assert_eq!(s.coeff(-1), Rat::from(-1));
        let f = TSeries::new(-1, vec![q(1, 1), q(6, 1), q(54, 1)], 1);
        assert_eq!(f.integrate(), Err(Error::ResidueObstruction));
        let g = f.sub(&f.polar_part()).integrate().unwrap();
        assert_eq!(g.power_coeffs(), vec![q(0, 1), q(6, 1), q(27, 1)]);
        let pp = TSeries::new(-3, vec![q(1, 1), q(0, 1), q(1, 1), q(1, 1)], 0).polar_part();
        assert_eq!(pp.coeff(0), Rat::zero());
        assert_eq!(pp.coeff(-3), Rat::one());
    }

    #[test]
    fn compose_examples() {
        let geo = TSeries::from_ints(&[1; 8]);
        let w = RatFn::from_poly(Poly::from_ints(&[0, 2]));
        let s = geo.compose_rational(&w).unwrap();
        assert_eq!(s, TSeries::from_ints(&[1, 2, 4, 8, 16, 32, 64, 128]));
        let s0 = geo.compose_rational(&RatFn::zero()).unwrap();
        assert_eq!(s0.coeff(0), Rat::one());
        assert_eq!(s0.coeff(3), Rat::zero());
        assert_eq!(geo.compose_rational(&RatFn::one()), Err(Error::SubstitutionNotVanishing));
    }

    #[test]
    fn pow_examples() {
        let a = TSeries::from_poly(&(&Poly::from_ints(&[1, 1]) * &Poly::from_ints(&[1, -3])), 2);
        assert_eq!(a.pow_rational(&q(1, 2)).unwrap(), TSeries::from_ints(&[1, -1, -2]));
        let b = &Poly::from_ints(&[1, 2]) * &Poly::from_ints(&[1, -6]).pow(3);
        let r = TSeries::from_poly(&b, 3).pow_rational(&q(1, 2)).unwrap();
        assert_eq!(r, TSeries::from_ints(&[1, -8, 4, 32]));
        assert_eq!(TSeries::from_ints(&[1, 5, 7]).pow_rational(&Rat::zero()).unwrap(), TSeries::from_ints(&[1, 0, 0]));
        assert_eq!(TSeries::from_ints(&[2, 1]).pow_rational(&q(1, 2)), Err(Error::NonUnitBase));
    }

    #[test]
    fn sum_at_matches_rational() {
        let s = TSeries::new(-1, vec![q(1, 1), q(2, 1), q(3, 1)], 1);
        let v = s.sum_at(&BigF::from_rat(&q(1, 2), 64));
        assert_eq!(v.to_f64(), 2.0 + 2.0 + 1.5);
    }
}
