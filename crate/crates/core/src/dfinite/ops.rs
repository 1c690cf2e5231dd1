use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{binomial, integer_content, Poly, Rat, RatFn};
use crate::series::TSeries;

/// L = Σ p_i(t) ∂^i with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<Poly>,
}

impl DiffOp {
    pub fn new(mut coeffs: Vec<Poly>) -> DiffOp {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> DiffOp {
        DiffOp::new(rows.iter().map(|r| Poly::from_ints(r)).collect())
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order r; −1 for the zero operator.
    pub fn order(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|p| p.deg()).max().unwrap_or(-1)
    }

    /// Content 1, integer coefficients, leading coefficient of p_r positive.
    pub fn primitive(&self) -> DiffOp {
        if self.is_zero() {
            return self.clone();
        }
        let all: Vec<Rat> = self.coeffs.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        let (c, _) = integer_content(&all);
        let mut c = c;
        if self.coeffs.last().unwrap().lead().is_negative() != c.is_negative() {
            c = -c;
        }
        let inv = c.recip();
        DiffOp::new(self.coeffs.iter().map(|p| p.scale(&inv)).collect())
    }

    /// Σ p_i f^(i); valid through order(f) − r.
    pub fn apply(&self, f: &TSeries) -> TSeries {
        let mut d = f.clone();
        let mut acc: Option<TSeries> = None;
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive();
            }
            if p.is_zero() {
                continue;
            }
            let term = d.mul_poly(p);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        let n = f.order() - self.order().max(0);
        match acc {
            None => TSeries::zero(n),
            Some(a) => a.truncate(n),
        }
    }

    pub fn to_rat(&self) -> RatDiffOp {
        RatDiffOp::new(self.coeffs.iter().map(|p| RatFn::from_poly(p.clone())).collect())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp[")?;
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({})∂^{}", p, i)?;
        }
        write!(f, "]")
    }
}

/// L = Σ r_i(t) ∂^i over Q(t).
#[derive(Clone, PartialEq, Eq)]
pub struct RatDiffOp {
    coeffs: Vec<RatFn>,
}

impl RatDiffOp {
    pub fn new(mut coeffs: Vec<RatFn>) -> RatDiffOp {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        RatDiffOp { coeffs }
    }

    pub fn identity() -> RatDiffOp {
        RatDiffOp::new(vec![RatFn::one()])
    }

    /// ∂^k.
    pub fn d_pow(k: usize) -> RatDiffOp {
        let mut c = vec![RatFn::zero(); k + 1];
        c[k] = RatFn::one();
        RatDiffOp::new(c)
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn order(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &RatDiffOp) -> RatDiffOp {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = RatFn::zero();
        RatDiffOp::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }

    pub fn sub(&self, o: &RatDiffOp) -> RatDiffOp {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = RatFn::zero();
        RatDiffOp::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }

    /// Left multiplication by a rational function.
    pub fn lmul(&self, r: &RatFn) -> RatDiffOp {
        RatDiffOp::new(self.coeffs.iter().map(|c| r * c).collect())
    }

    /// Non-commutative product, ∂·r = r·∂ + r'.
    pub fn mul(&self, o: &RatDiffOp) -> RatDiffOp {
        if self.is_zero() || o.is_zero() {
            return RatDiffOp::new(Vec::new());
        }
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let mut out = vec![RatFn::zero(); n];
        // derivatives of o's coefficients, up to order(self)
        let mut ders: Vec<Vec<RatFn>> = Vec::with_capacity(self.coeffs.len());
        ders.push(o.coeffs.clone());
        for k in 1..self.coeffs.len() {
            let prev = &ders[k - 1];
            ders.push(prev.iter().map(|b| b.derivative()).collect());
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..=i {
                let bin = RatFn::constant(Rat::from(binomial(i as u64, k as u64)));
                let ab = a * &bin;
                for (j, bd) in ders[k].iter().enumerate() {
                    if bd.is_zero() {
                        continue;
                    }
                    let idx = i - k + j;
                    out[idx] = &out[idx] + &(&ab * bd);
                }
            }
        }
        RatDiffOp::new(out)
    }

    /// Multiply through by the lcm of the denominators, then normalize.
    pub fn clear_denominators(&self) -> DiffOp {
        let mut l = Poly::one();
        for c in &self.coeffs {
            let d = c.den();
            let g = l.gcd(d);
            l = &l * &d.divrem(&g).0;
        }
        let polys = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = (&l * c.num()).divrem(c.den());
                debug_assert!(r.is_zero());
                q
            })
            .collect();
        DiffOp::new(polys).primitive()
    }

    /// L = Q·D + R with order(R) < order(D).
    pub fn right_divide(&self, d: &RatDiffOp) -> (RatDiffOp, RatDiffOp) {
        assert!(!d.is_zero(), "division by the zero operator");
        let od = d.order();
        let lead_inv = d.coeffs.last().unwrap().recip();
        let mut q = RatDiffOp::new(Vec::new());
        let mut r = self.clone();
        while r.order() >= od {
            let s = (r.order() - od) as usize;
            let c = r.coeffs.last().unwrap() * &lead_inv;
            let term = RatDiffOp::d_pow(s).lmul(&c);
            q = q.add(&term);
            r = r.sub(&term.mul(d));
        }
        (q, r)
    }
}

impl fmt::Debug for RatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatDiffOp{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz() {
        let d = RatDiffOp::d_pow(1);
        let t = RatDiffOp::new(vec![RatFn::var()]);
        let p = d.mul(&t);
        assert_eq!(p, RatDiffOp::new(vec![RatFn::one(), RatFn::var()]));
        assert_eq!(p.mul(&RatDiffOp::identity()), p);
    }

    #[test]
    fn divide_by_self() {
        let l = DiffOp::from_int_rows(&[&[1, 2], &[0, 1, 1], &[3]]).to_rat();
        let (q, r) = l.right_divide(&l);
        assert_eq!(q, RatDiffOp::identity());
        assert!(r.is_zero());
    }

    #[test]
    fn apply_constant() {
        let d = DiffOp::from_int_rows(&[&[], &[1]]);
        let f = TSeries::constant(Rat::from(7), 10);
        assert!(d.apply(&f).is_zero_on_window());
    }
}
