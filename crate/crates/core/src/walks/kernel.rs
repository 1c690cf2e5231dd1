use num_bigint::BigInt;
use num_traits::Zero;

use super::enumerate::WalkTable;
use super::steps::KernelData;
use crate::arith::{LPoly2, Rat};
use crate::error::{Error, Result};

fn layer_poly(tab: &WalkTable, n: usize) -> LPoly2 {
    let mut p = LPoly2::zero();
    let w = n + 1;
    for (idx, v) in tab.layer(n).iter().enumerate() {
        if !v.is_zero() {
            p.add_term((idx / w) as i64, (idx % w) as i64, Rat::from(v.clone()));
        }
    }
    p
}

/// Check, layer by layer in t, that
/// xy(1 − tS)Q = xy − t·x·Am1(x)·Q(x,0) − t·y·Bm1(y)·Q(0,y) + ε·t·Q(0,0).
pub fn kernel_check(k: &KernelData, tab: &WalkTable, n_max: usize) -> Result<()> {
    let n_max = n_max.min(tab.order());
    let mut am1 = LPoly2::zero();
    for (i, c) in k.am1.terms() {
        am1.add_term(i + 1, 0, c.clone());
    }
    let mut bm1 = LPoly2::zero();
    for (j, c) in k.bm1.terms() {
        bm1.add_term(0, j + 1, c.clone());
    }
    let xy = LPoly2::monomial(Rat::one(), 1, 1);
    let mut prev = LPoly2::zero();
    for n in 0..=n_max {
        let cur = layer_poly(tab, n);
        let lhs = xy.mul(&cur.sub(&k.s.mul(&prev)));
        let rhs = if n == 0 {
            xy.clone()
        } else {
            let m = n - 1;
            let mut qx0 = LPoly2::zero();
            let mut q0y = LPoly2::zero();
            for i in 0..=m {
                let v = tab.get(m, i, 0);
                if !v.is_zero() {
                    qx0.add_term(i as i64, 0, Rat::from(v.clone()));
                }
                let v = tab.get(m, 0, i);
                if !v.is_zero() {
                    q0y.add_term(0, i as i64, Rat::from(v.clone()));
                }
            }
            let q00: BigInt = tab.get(m, 0, 0).clone();
            let mut r = am1.mul(&qx0).add(&bm1.mul(&q0y)).scale(&Rat::from(-1));
            if k.eps == 1 {
                r.add_term(0, 0, Rat::from(q00));
            }
            r
        };
        let res = lhs.sub(&rhs);
        if let Some((&(x, y), _)) = res.terms().iter().next() {
            return Err(Error::ResidualNonzero { x, y, t: n as i64 });
        }
        prev = cur;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::enumerate::enumerate;
    use crate::walks::steps::{decompose_kernel, StepSet};

    #[test]
    fn king_residual_zero() {
        let mut v = alloc::vec::Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if (i, j) != (0, 0) {
                    v.push((i, j));
                }
            }
        }
        let s = StepSet::new(&v).unwrap();
        let tab = enumerate(&s, 20);
        assert_eq!(kernel_check(&decompose_kernel(&s), &tab, 20), Ok(()));
        assert_eq!(kernel_check(&decompose_kernel(&s), &tab, 0), Ok(()));
    }

    #[test]
    fn detects_wrong_kernel() {
        let s = StepSet::new(&[(1, 1), (-1, -1), (0, 1)]).unwrap();
        let tab = enumerate(&s, 6);
        let mut k = decompose_kernel(&s);
        k.eps = 0;
        assert!(matches!(kernel_check(&k, &tab, 6), Err(Error::ResidualNonzero { .. })));
    }
}
