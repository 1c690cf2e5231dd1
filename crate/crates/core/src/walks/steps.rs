use alloc::format;
use alloc::vec::Vec;

use crate::arith::{LPoly1, LPoly2};
use crate::error::{Error, Result};

/// A nonempty set of small steps, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepSet {
    steps: Vec<(i64, i64)>,
}

impl StepSet {
    pub fn new(steps: &[(i64, i64)]) -> Result<StepSet> {
        let mut v: Vec<(i64, i64)> = steps.to_vec();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::ValidationFailed(alloc::string::String::from("empty step set")));
        }
        for &(a, b) in &v {
            if !(-1..=1).contains(&a) || !(-1..=1).contains(&b) || (a, b) == (0, 0) {
                return Err(Error::ValidationFailed(format!("step ({},{}) is not a small step", a, b)));
            }
        }
        Ok(StepSet { steps: v })
    }

    pub fn steps(&self) -> &[(i64, i64)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: (i64, i64)) -> bool {
        self.steps.binary_search(&s).is_ok()
    }

    /// Invariant under (i, j) ↦ (j, i).
    pub fn is_diagonal_symmetric(&self) -> bool {
        self.steps.iter().all(|&(a, b)| self.contains((b, a)))
    }

    pub fn step_poly(&self) -> LPoly2 {
        LPoly2::from_steps(&self.steps)
    }

    /// 64-bit FNV-1a digest of the canonical step list, for cache keys.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for &(a, b) in &self.steps {
            for v in [a as u8, b as u8] {
                h ^= v as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }
}

/// Kernel data: S = A1·y + A0 + Am1·ȳ = B1·x + B0 + Bm1·x̄.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub s: LPoly2,
    pub a1: LPoly1,
    pub a0: LPoly1,
    pub am1: LPoly1,
    pub b1: LPoly1,
    pub b0: LPoly1,
    pub bm1: LPoly1,
    pub eps: u8,
}

pub fn decompose_kernel(st: &StepSet) -> KernelData {
    let s = st.step_poly();
    KernelData {
        a1: s.y_coeff(1),
        a0: s.y_coeff(0),
        am1: s.y_coeff(-1),
        b1: s.x_coeff(1),
        b0: s.x_coeff(0),
        bm1: s.x_coeff(-1),
        eps: st.contains((-1, -1)) as u8,
        s,
    }
}

impl KernelData {
    /// Re-assemble both groupings and compare with S.
    pub fn is_consistent(&self) -> bool {
        let mut by_y = LPoly2::zero();
        let mut by_x = LPoly2::zero();
        for (j, a) in [(1, &self.a1), (0, &self.a0), (-1, &self.am1)] {
            for (i, c) in a.terms() {
                by_y.add_term(*i, j, c.clone());
            }
        }
        for (i, b) in [(1, &self.b1), (0, &self.b0), (-1, &self.bm1)] {
            for (j, c) in b.terms() {
                by_x.add_term(i, *j, c.clone());
            }
        }
        by_y == self.s && by_x == self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;

    fn lp(terms: &[(i64, i64)]) -> LPoly1 {
        let mut p = LPoly1::zero();
        for &(k, c) in terms {
            p.add_term(k, Rat::from(c));
        }
        p
    }

    #[test]
    fn king_decomposition() {
        let mut v = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if (i, j) != (0, 0) {
                    v.push((i, j));
                }
            }
        }
        let k = decompose_kernel(&StepSet::new(&v).unwrap());
        assert_eq!(k.a1, lp(&[(-1, 1), (0, 1), (1, 1)]));
        assert_eq!(k.a0, lp(&[(-1, 1), (1, 1)]));
        assert_eq!(k.am1, k.a1);
        assert_eq!(k.eps, 1);
        assert!(k.is_consistent());
    }

    #[test]
    fn simple_and_single() {
        let k = decompose_kernel(&StepSet::new(&[(0, 1), (0, -1), (1, 0), (-1, 0)]).unwrap());
        assert_eq!(k.a1, lp(&[(0, 1)]));
        assert_eq!(k.a0, lp(&[(-1, 1), (1, 1)]));
        assert_eq!(k.eps, 0);
        let k = decompose_kernel(&StepSet::new(&[(1, 1)]).unwrap());
        assert_eq!(k.a1, lp(&[(1, 1)]));
        assert!(k.a0.is_zero() && k.am1.is_zero());
        assert_eq!(k.eps, 0);
    }

    #[test]
    fn rejects_bad_steps() {
        assert!(StepSet::new(&[]).is_err());
        assert!(StepSet::new(&[(0, 0)]).is_err());
        assert!(StepSet::new(&[(2, 0)]).is_err());
    }
}
