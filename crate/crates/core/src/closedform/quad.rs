//! Gauss–Legendre quadrature at arbitrary precision.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::arith::{BigF, Rat};
use crate::error::{Error, Result};

pub const MAX_NODES: usize = 2048;

/// Nodes and weights on [−1, 1], nonnegative half only (the rule is
/// symmetric). A node at 0, present for odd n, is stored once.
#[derive(Clone, Debug)]
pub struct GlRule {
    pub n: usize,
    pub nodes: Vec<BigF>,
    pub weights: Vec<BigF>,
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: &BigF) -> (BigF, BigF) {
    let p = x.prec();
    let mut p0 = BigF::one(p);
    let mut p1 = x.clone();
    for k in 1..n {
        let kk = k as i64;
        // (k+1) P_{k+1} = (2k+1) x P_k − k P_{k−1}
        let a = (&p1 * x).mul_rat(&Rat::from(2 * kk + 1));
        let b = p0.mul_rat(&Rat::from(kk));
        let p2 = (&a - &b).mul_rat(&Rat::frac(1, kk + 1));
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n − P_{n−1}) / (x² − 1)
    let one = BigF::one(p);
    let d = &(&(x * &p1) - &p0).mul_rat(&Rat::from(n as i64)) / &(&(x * x) - &one);
    (p1, d)
}

pub fn gauss_legendre(n: usize, prec: u32) -> GlRule {
    assert!(n >= 1);
    let wp = prec + 32;
    let half = n.div_ceil(2);
    let mut nodes = Vec::with_capacity(half);
    let mut weights = Vec::with_capacity(half);
    for i in 0..half {
        // i-th largest root
        let guess = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut x = BigF::from_f64(guess, wp);
        let mut d = BigF::one(wp);
        if n % 2 == 1 && i == half - 1 {
            x = BigF::zero(wp);
        } else {
            for _ in 0..64 {
                let (pn, dn) = legendre(n, &x);
                let dx = &pn / &dn;
                x = &x - &dx;
                d = dn;
                if dx.is_zero() || dx.top() < x.top().min(0) - wp as i64 + 4 {
                    break;
                }
            }
        }
        let (_, dn) = legendre(n, &x);
        if !dn.is_zero() {
            d = dn;
        }
        let one = BigF::one(wp);
        let w = &BigF::from_i64(2, wp) / &(&(&one - &(&x * &x)) * &(&d * &d));
        nodes.push(x.with_prec(prec + 16));
        weights.push(w.with_prec(prec + 16));
    }
    GlRule { n, nodes, weights }
}

/// Rules built on demand and shared between nested integrations.
#[derive(Debug, Default)]
pub struct GlCache {
    rules: RefCell<Vec<(usize, u32, Rc<GlRule>)>>,
}

impl GlCache {
    pub fn new() -> GlCache {
        GlCache::default()
    }

    pub fn rule(&self, n: usize, prec: u32) -> Rc<GlRule> {
        if let Some(r) = self.rules.borrow().iter().find(|r| r.0 == n && r.1 >= prec) {
            return r.2.clone();
        }
        let r = Rc::new(gauss_legendre(n, prec));
        self.rules.borrow_mut().push((n, prec, r.clone()));
        r
    }
}

/// ∫_a^b f with an n-point rule.
pub fn gl_integrate<F>(f: &mut F, a: &BigF, b: &BigF, rule: &GlRule) -> Result<BigF>
where
    F: FnMut(&BigF) -> Result<BigF>,
{
    let p = a.max_prec(b);
    let mid = (a + b).ldexp(-1);
    let rad = (b - a).ldexp(-1);
    let mut acc = BigF::zero(p);
    for (k, (x, w)) in rule.nodes.iter().zip(rule.weights.iter()).enumerate() {
        let dx = &rad * x;
        let at_zero = rule.n % 2 == 1 && k == rule.nodes.len() - 1;
        let mut s = f(&(&mid + &dx))?;
        if !at_zero {
            s = &s + &f(&(&mid - &dx))?;
        }
        acc = &acc + &(&s * w);
    }
    Ok(&acc * &rad)
}

/// ∫_a^b f, doubling the node count from `n0` until two successive
/// estimates agree to 2^(−prec) relative to max(1, |I|).
pub fn integrate_adaptive<F>(f: &mut F, a: &BigF, b: &BigF, prec: u32, n0: usize, cache: &GlCache) -> Result<BigF>
where
    F: FnMut(&BigF) -> Result<BigF>,
{
    let mut n = n0.max(2);
    let mut prev = gl_integrate(f, a, b, &cache.rule(n, prec))?;
    while n < MAX_NODES {
        n *= 2;
        let cur = gl_integrate(f, a, b, &cache.rule(n, prec))?;
        let scale = cur.top().max(1);
        let diff = &cur - &prev;
        if diff.is_zero() || diff.top() < scale - prec as i64 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let cache = GlCache::new();
        let r = cache.rule(5, 128);
        let a = BigF::zero(128);
        let b = BigF::one(128);
        // ∫_0^1 x^9 = 1/10, exact for 5 nodes
        let v = gl_integrate(&mut |x: &BigF| Ok(x.powi(9)), &a, &b, &r).unwrap();
        let e = BigF::from_rat(&Rat::frac(1, 10), 128);
        assert!((&v - &e).abs().top() < -120);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [4usize, 7, 16] {
            let r = gauss_legendre(n, 96);
            let mut s = BigF::zero(96);
            for (k, w) in r.weights.iter().enumerate() {
                let mult = if n % 2 == 1 && k == r.weights.len() - 1 { 1 } else { 2 };
                s = &s + &w.mul_rat(&Rat::from(mult));
            }
            assert!((&s - &BigF::from_i64(2, 96)).abs().top() < -90, "n = {}", n);
        }
    }

    #[test]
    fn adaptive_log() {
        // ∫_0^1 1/(1+x) = log 2
        let cache = GlCache::new();
        let v = integrate_adaptive(
            &mut |x: &BigF| Ok(&BigF::one(128) / &(x + &BigF::one(128))),
            &BigF::zero(128),
            &BigF::one(128),
            120,
            8,
            &cache,
        )
        .unwrap();
        let ln2 = 0.693_147_180_559_945_3_f64;
        assert!((v.to_f64() - ln2).abs() < 1e-15);
    }
}
