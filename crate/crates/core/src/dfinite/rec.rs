use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive};

use super::ops::DiffOp;
use crate::arith::{Poly, Rat};
use crate::error::{Error, Result};

/// Σ c_i(n) a_{n+i} = 0 for every integer n, with a_k = 0 for k < 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRec {
    coeffs: Vec<Poly>,
    lead_roots: Vec<i64>,
}

/// Integer roots of p, by the Cauchy bound when it is small and by the
/// divisors of the lowest nonzero coefficient otherwise.
fn integer_roots(p: &Poly) -> Vec<i64> {
    if p.is_zero() {
        return Vec::new();
    }
    let (_, q) = p.primitive_part();
    let low = q.low_degree();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(0);
    }
    let q = q.unshift(low);
    if q.deg() <= 0 {
        return roots;
    }
    let lead = q.lead().abs().to_f64();
    let bound = q.coeffs().iter().map(|c| c.abs().to_f64() / lead).fold(0.0, f64::max) + 1.0;
    let candidates: Vec<i64> = if bound < 2.0e5 {
        let b = bound as i64 + 1;
        (-b..=b).filter(|&n| n != 0).collect()
    } else {
        let Some(c0) = q.coeff(0).numer().abs().to_i64() else { return roots };
        let mut ds = Vec::new();
        let mut d = 1i64;
        while d * d <= c0 {
            if c0 % d == 0 {
                ds.extend([d, -d, c0 / d, -(c0 / d)]);
            }
            d += 1;
        }
        ds
    };
    for n in candidates {
        if q.eval_i64(n).is_zero() && !roots.contains(&n) {
            roots.push(n);
        }
    }
    roots.sort_unstable();
    roots
}

/// (n + j)(n + j − 1)…(n + j − i + 1) as a polynomial in n.
fn falling(j: i64, i: usize) -> Poly {
    let mut p = Poly::one();
    for s in 0..i as i64 {
        p = &p * &Poly::from_ints(&[j - s, 1]);
    }
    p
}

impl PRec {
    pub fn new(mut coeffs: Vec<Poly>) -> Result<PRec> {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.last().ok_or(Error::BadParameters)?;
        let lead_roots = integer_roots(lead);
        Ok(PRec { coeffs, lead_roots })
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Integer roots of the leading coefficient.
    pub fn lead_roots(&self) -> &[i64] {
        &self.lead_roots
    }

    /// Number of initial terms unroll needs.
    pub fn init_needed(&self) -> usize {
        let s = self.order() as i64;
        let r = self.lead_roots.iter().copied().filter(|&n| n >= 0).max().map_or(0, |n| n + 1 + s);
        s.max(r) as usize
    }
}

/// Coefficient recurrence of L acting on power series.
pub fn to_recurrence(l: &DiffOp) -> Result<PRec> {
    if l.is_zero() {
        return Err(Error::BadParameters);
    }
    // t^k ∂^i shifts exponents by k − i; index terms by j = i − k − s_min
    let mut smin = i64::MAX;
    let mut smax = i64::MIN;
    for (i, p) in l.coeffs().iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let s = i as i64 - k as i64;
                smin = smin.min(s);
                smax = smax.max(s);
            }
        }
    }
    let mut out = vec![Poly::zero(); (smax - smin + 1) as usize];
    for (i, p) in l.coeffs().iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = i as i64 - k as i64 - smin;
            let term = falling(j, i).scale(c);
            out[j as usize] = &out[j as usize] + &term;
        }
    }
    PRec::new(out)
}

/// Terms a_0..a_N extending `init`.
pub fn unroll(rec: &PRec, init: &[Rat], n_max: usize) -> Result<Vec<Rat>> {
    let s = rec.order();
    let mut a: Vec<Rat> = init.iter().take(n_max + 1).cloned().collect();
    let lead = &rec.coeffs[s];
    for m in a.len()..=n_max {
        let n = m as i64 - s as i64;
        let c = lead.eval_i64(n);
        if c.is_zero() {
            return Err(Error::SingularIndex(n));
        }
        let mut acc = Rat::zero();
        for (j, cj) in rec.coeffs[..s].iter().enumerate() {
            let idx = n + j as i64;
            if idx < 0 || a[idx as usize].is_zero() {
                continue;
            }
            let v = cj.eval_i64(n);
            if !v.is_zero() {
                acc += &(&v * &a[idx as usize]);
            }
        }
        a.push(-(acc / c));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric() {
        let l = DiffOp::from_int_rows(&[&[-1], &[1, -1]]);
        let r = to_recurrence(&l).unwrap();
        // −(n+1) a_n + (n+1) a_{n+1}
        assert_eq!(r.coeffs(), &[Poly::from_ints(&[-1, -1]), Poly::from_ints(&[1, 1])]);
        assert_eq!(r.lead_roots(), &[-1]);
        let a = unroll(&r, &[Rat::one()], 20).unwrap();
        assert!(a.iter().all(|v| v.is_one()));
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(to_recurrence(&DiffOp::new(Vec::new())), Err(Error::BadParameters));
    }

    #[test]
    fn singular() {
        // t∂ − 3: a_n (n − 3) = 0, leading coefficient vanishes at n = 3
        let l = DiffOp::from_int_rows(&[&[-3], &[0, 1]]);
        let r = to_recurrence(&l).unwrap();
        assert_eq!(r.lead_roots(), &[3]);
        assert_eq!(unroll(&r, &vec![Rat::zero(); 3], 5), Err(Error::SingularIndex(3)));
    }
}
