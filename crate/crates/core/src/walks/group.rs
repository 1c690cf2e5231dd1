use alloc::vec::Vec;

use super::steps::KernelData;
use crate::arith::{Rat, RatFn2};
use crate::error::{Error, Result};

/// A birational map (x, y) ↦ (X, Y) with its sign (−1)^(word length).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub x: RatFn2,
    pub y: RatFn2,
    pub sign: i8,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement { x: RatFn2::x(), y: RatFn2::y(), sign: 1 }
    }

    /// self ∘ other, i.e. apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            x: self.x.substitute(&other.x, &other.y),
            y: self.y.substitute(&other.x, &other.y),
            sign: self.sign * other.sign,
        }
    }

    pub fn apply(&self, f: &RatFn2) -> RatFn2 {
        f.substitute(&self.x, &self.y)
    }
}

/// The two generating involutions Φ and Ψ.
pub fn generators(k: &KernelData) -> (GroupElement, GroupElement) {
    let x = RatFn2::x();
    let y = RatFn2::y();
    let b = &RatFn2::from_y(&k.bm1.to_ratfn()) / &RatFn2::from_y(&k.b1.to_ratfn());
    let a = &RatFn2::from_x(k.am1.to_ratfn()) / &RatFn2::from_x(k.a1.to_ratfn());
    let phi = GroupElement { x: &x.recip() * &b, y: y.clone(), sign: -1 };
    let psi = GroupElement { x, y: &y.recip() * &a, sign: -1 };
    (phi, psi)
}

/// Length of the orbit of a rational point under ΨΦ, if it closes within
/// `max_steps`. None also when the point runs into a pole.
fn orbit_length(k: &KernelData, p: (Rat, Rat), max_steps: usize) -> Option<usize> {
    let (x0, y0) = p;
    let (mut x, mut y) = (x0.clone(), y0.clone());
    for step in 1..=max_steps {
        if x.is_zero() || y.is_zero() {
            return None;
        }
        let den = &k.b1.eval(&y) * &x;
        if den.is_zero() {
            return None;
        }
        x = &k.bm1.eval(&y) / &den;
        if x.is_zero() {
            return None;
        }
        let den = &k.a1.eval(&x) * &y;
        if den.is_zero() {
            return None;
        }
        y = &k.am1.eval(&x) / &den;
        if x == x0 && y == y0 {
            return Some(step);
        }
    }
    Some(usize::MAX)
}

/// Closure of ⟨Φ, Ψ⟩ by breadth-first search.
///
/// The orbit of a generic rational point is followed first: for a finite
/// group of order 2m it closes after at most m steps of ΨΦ, so an orbit
/// that stays open proves the order exceeds `max_order` without building
/// the large compositions an infinite group produces.
pub fn walk_group(k: &KernelData, max_order: usize) -> Result<Vec<GroupElement>> {
    assert!(!k.a1.is_zero() && !k.b1.is_zero(), "A1 and B1 must be nonzero");
    let probes = [(Rat::frac(3, 7), Rat::frac(5, 11)), (Rat::frac(-13, 17), Rat::frac(19, 23))];
    if let Some(len) = probes.iter().find_map(|p| orbit_length(k, p.clone(), max_order / 2 + 1)) {
        if len == usize::MAX {
            return Err(Error::GroupOrderExceeded(max_order));
        }
    }
    let (phi, psi) = generators(k);
    let mut elems = alloc::vec![GroupElement::identity()];
    let mut frontier = 0;
    while frontier < elems.len() {
        let g = elems[frontier].clone();
        frontier += 1;
        for gen in [&phi, &psi] {
            let h = gen.compose(&g);
            if elems.iter().any(|e| e.x == h.x && e.y == h.y) {
                continue;
            }
            if elems.len() >= max_order {
                return Err(Error::GroupOrderExceeded(max_order));
            }
            elems.push(h);
        }
    }
    Ok(elems)
}

/// Σ_g sign(g)·g(xy).
pub fn orbit_sum(group: &[GroupElement]) -> RatFn2 {
    let mut acc = RatFn2::zero();
    for g in group {
        let term = &g.x * &g.y;
        acc = if g.sign > 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Ratio c with orbit_sum = c·n_orbit, if the two are proportional.
pub fn orbit_normalization(orbit: &RatFn2, n_orbit: &RatFn2) -> Option<Rat> {
    if n_orbit.is_zero() {
        return None;
    }
    let q = orbit / n_orbit;
    let l = q.to_lpoly2()?;
    if l.len() == 1 {
        l.terms().get(&(0, 0)).cloned()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::LPoly2;
    use crate::walks::steps::{decompose_kernel, StepSet};

    fn eq6() -> LPoly2 {
        let mut p = LPoly2::zero();
        p.add_term(1, 1, Rat::one());
        p.add_term(-1, 1, Rat::from(-1));
        p.add_term(-1, -1, Rat::one());
        p.add_term(1, -1, Rat::from(-1));
        p
    }

    #[test]
    fn king_group() {
        let mut v = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if (i, j) != (0, 0) {
                    v.push((i, j));
                }
            }
        }
        let k = decompose_kernel(&StepSet::new(&v).unwrap());
        let g = walk_group(&k, 16).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(orbit_sum(&g).to_lpoly2().unwrap(), eq6());
        let (_, psi) = generators(&k);
        let id = psi.compose(&psi);
        assert_eq!((id.x, id.y), (RatFn2::x(), RatFn2::y()));
    }

    #[test]
    fn simple_walk_group() {
        let k = decompose_kernel(&StepSet::new(&[(0, 1), (0, -1), (1, 0), (-1, 0)]).unwrap());
        let g = walk_group(&k, 16).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(orbit_sum(&g).to_lpoly2().unwrap(), eq6());
    }

    #[test]
    fn kreweras_and_infinite() {
        let k = decompose_kernel(&StepSet::new(&[(1, 1), (-1, 0), (0, -1)]).unwrap());
        assert_eq!(walk_group(&k, 16).unwrap().len(), 6);
        // a model with infinite group
        let k = decompose_kernel(&StepSet::new(&[(1, 1), (-1, 1), (1, -1), (0, -1), (-1, 0)]).unwrap());
        assert_eq!(walk_group(&k, 16), Err(Error::GroupOrderExceeded(16)));
    }
}
