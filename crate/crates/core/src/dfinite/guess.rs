use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ops::DiffOp;
use crate::arith::{Poly, Rat};
use crate::error::{Error, Result};
use crate::series::TSeries;

/// Above this many unknowns the nullspace is found modularly and lifted by
/// CRT with rational reconstruction instead of fraction-free elimination.
pub const BAREISS_MAX_UNKNOWNS: usize = 48;

// --- word-size modular arithmetic -------------------------------------------

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, in decreasing order.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> PrimeStream {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        PrimeStream::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while !is_prime_u64(self.next) {
            self.next -= 2;
        }
        let p = self.next;
        self.next -= 2;
        Some(p)
    }
}

fn big_mod(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Image of a rational mod p, or None if p divides the denominator.
fn rat_mod(a: &Rat, p: u64) -> Option<u64> {
    let d = big_mod(a.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(big_mod(a.numer(), p), pow_mod(d, p - 2, p), p))
}

/// Reduced row echelon form mod p in place; returns the pivot columns.
fn rref_mod(m: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(sel) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, sel);
        let inv = pow_mod(m[row][col], p - 2, p);
        for c in col..ncols {
            m[row][c] = mul_mod(m[row][c], inv, p);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..ncols {
                    let sub = mul_mod(f, m[row][c], p);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// x ≡ n/d (mod m) with |n|, d ≤ sqrt(m/2).
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some(Rat::new(n, d))
}

// --- the guessing system -----------------------------------------------------

/// Row n: coefficient of t^n in Σ_{i≤r, k≤d} c_{ik} t^k f^(i), unknowns
/// indexed i·(d+1) + k.
fn system(f: &TSeries, r: usize, d: usize, rows: usize) -> Vec<Vec<Rat>> {
    let u = (r + 1) * (d + 1);
    let mut m = vec![vec![Rat::zero(); u]; rows];
    for (n, row) in m.iter_mut().enumerate() {
        for i in 0..=r {
            for k in 0..=d.min(n) {
                let j = n - k + i;
                let a = f.coeff(j as i64);
                if a.is_zero() {
                    continue;
                }
                // falling factorial j (j−1) … (j−i+1)
                let mut ff = BigInt::one();
                for s in 0..i {
                    ff *= BigInt::from(j - s);
                }
                row[i * (d + 1) + k] = &a * &Rat::from(ff);
            }
        }
    }
    m
}

fn op_from_vec(v: &[Rat], r: usize, d: usize) -> DiffOp {
    let polys = (0..=r).map(|i| Poly::from_rats(v[i * (d + 1)..(i + 1) * (d + 1)].to_vec())).collect();
    DiffOp::new(polys).primitive()
}

/// Modular nullity of the solver block.
fn nullity_mod(sys: &[Vec<Rat>], u: usize, p: u64) -> Option<usize> {
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(sys.len());
    for row in sys {
        let mut r = Vec::with_capacity(u);
        for a in row {
            r.push(rat_mod(a, p)?);
        }
        m.push(r);
    }
    let piv = rref_mod(&mut m, u, p);
    Some(u - piv.len())
}

/// Integer rows: each row scaled by the lcm of its denominators.
fn integer_rows(sys: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    sys.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
            row.iter().map(|a| a.numer() * &(&l / a.denom())).collect()
        })
        .collect()
}

/// One nullspace vector by fraction-free (Bareiss) elimination.
pub fn nullspace_bareiss(sys: &[Vec<Rat>], u: usize) -> Option<Vec<Rat>> {
    let mut m = integer_rows(sys);
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..u {
        if row == m.len() {
            break;
        }
        let Some(sel) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, sel);
        for r in row + 1..m.len() {
            for c in (col + 1)..u {
                let v = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    let free = (0..u).find(|c| !pivots.contains(c))?;
    // back substitution with the free unknown set to 1, others 0
    let mut x = vec![Rat::zero(); u];
    x[free] = Rat::one();
    for (ri, &pc) in pivots.iter().enumerate().rev() {
        let mut s = Rat::zero();
        for c in pc + 1..u {
            if !x[c].is_zero() && !m[ri][c].is_zero() {
                s += &(&Rat::from(m[ri][c].clone()) * &x[c]);
            }
        }
        x[pc] = -(s / Rat::from(m[ri][pc].clone()));
    }
    Some(x)
}

/// One nullspace vector by multimodular RREF, CRT and rational
/// reconstruction; `accept` must confirm the candidate exactly.
pub fn nullspace_crt(sys: &[Vec<Rat>], u: usize, accept: &dyn Fn(&[Rat]) -> bool) -> Option<Vec<Rat>> {
    let mut ref_pivots: Option<Vec<usize>> = None;
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); u];
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<Rat>> = None;
    for (count, p) in PrimeStream::new().enumerate() {
        if count > 4000 {
            return None;
        }
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(sys.len());
        let mut bad = false;
        for row in sys {
            let mut rr = Vec::with_capacity(u);
            for a in row {
                match rat_mod(a, p) {
                    Some(v) => rr.push(v),
                    None => {
                        bad = true;
                        break;
                    }
                }
            }
            if bad {
                break;
            }
            m.push(rr);
        }
        if bad {
            continue;
        }
        let piv = rref_mod(&mut m, u, p);
        match &ref_pivots {
            None => ref_pivots = Some(piv.clone()),
            Some(rp) if rp != &piv => {
                // rank drop mod p: unlucky prime
                if piv.len() < rp.len() || piv > *rp {
                    continue;
                }
                ref_pivots = Some(piv.clone());
                residues = vec![BigInt::zero(); u];
                modulus = BigInt::one();
                last = None;
            }
            _ => {}
        }
        let free = (0..u).find(|c| !piv.contains(c))?;
        let mut v = vec![0u64; u];
        v[free] = 1;
        for (ri, &pc) in piv.iter().enumerate() {
            v[pc] = (p - m[ri][free]) % p;
        }
        // CRT merge
        let pb = BigInt::from(p);
        let minv = BigInt::from(pow_mod(big_mod(&modulus, p), p - 2, p));
        for (res, &vi) in residues.iter_mut().zip(v.iter()) {
            let cur = big_mod(res, p);
            let delta = (BigInt::from(vi) - BigInt::from(cur)).mod_floor(&pb);
            let h = (delta * &minv).mod_floor(&pb);
            *res = &*res + &modulus * h;
        }
        modulus *= &pb;
        if count % 2 == 1 || count > 8 {
            let cand: Option<Vec<Rat>> = residues.iter().map(|a| rational_reconstruct(a, &modulus)).collect();
            if let Some(c) = cand {
                if last.as_ref() == Some(&c) && accept(&c) {
                    return Some(c);
                }
                last = Some(c);
            }
        }
    }
    None
}

/// Number of t-coefficient equations available from f for order r.
fn equations(f: &TSeries, r: usize) -> usize {
    (f.order() + 1 - r as i64).max(0) as usize
}

/// L annihilates f on every coefficient the truncation determines.
pub fn annihilates(l: &DiffOp, f: &TSeries) -> bool {
    l.apply(f).is_zero_on_window()
}

/// Operator of order ≤ r and degree ≤ d annihilating f, the smallest in
/// lexicographic (r, d) order, confirmed on `guard` coefficients the
/// solver never saw.
pub fn guess(f: &TSeries, r: usize, d: usize, guard: usize) -> Result<DiffOp> {
    if f.min_exp() < 0 && f.valuation().is_some_and(|v| v < 0) {
        return Err(Error::BadParameters);
    }
    let need = (r + 1) * (d + 1) + guard;
    let have = (f.order() + 1).max(0) as usize;
    if equations(f, r) < need {
        return Err(Error::InsufficientTerms { need: need + r, have });
    }
    let probe = (1u64 << 61) - 1;
    for rr in 0..=r {
        for dd in 0..=d {
            let u = (rr + 1) * (dd + 1);
            let neq = equations(f, rr);
            if neq < u + guard {
                continue;
            }
            let solver = neq - guard;
            let sys = system(f, rr, dd, solver);
            if nullity_mod(&sys, u, probe).unwrap_or(1) == 0 {
                continue;
            }
            let check = |v: &[Rat]| -> bool {
                let op = op_from_vec(v, rr, dd);
                !op.is_zero() && annihilates(&op, f)
            };
            let v = if u <= BAREISS_MAX_UNKNOWNS {
                nullspace_bareiss(&sys, u).filter(|v| check(v))
            } else {
                nullspace_crt(&sys, u, &check)
            };
            if let Some(v) = v {
                return Ok(op_from_vec(&v, rr, dd));
            }
        }
    }
    Err(Error::NoOperatorFound)
}

/// For each order r = 1..=r_max, try the largest degree the terms allow;
/// on the first success, shrink the degree. Returns (operator, r, d).
pub fn guess_auto(f: &TSeries, r_max: usize, guard: usize, slack: usize) -> Result<(DiffOp, usize, usize)> {
    let probe = (1u64 << 61) - 1;
    for r in 1..=r_max {
        let neq = equations(f, r);
        if neq < guard + slack + r + 1 {
            break;
        }
        let dmax = (neq - guard - slack) / (r + 1);
        if dmax == 0 {
            continue;
        }
        let dmax = dmax - 1;
        let sys = system(f, r, dmax, neq - guard);
        if nullity_mod(&sys, (r + 1) * (dmax + 1), probe).unwrap_or(1) == 0 {
            continue;
        }
        // smallest degree at this order with a modular solution
        let mut lo = 0;
        for dd in 0..=dmax {
            let u = (r + 1) * (dd + 1);
            let s = system(f, r, dd, neq - guard);
            if nullity_mod(&s, u, probe).unwrap_or(1) > 0 {
                lo = dd;
                break;
            }
        }
        for dd in lo..=dmax {
            if let Ok(op) = guess(f, r, dd, guard) {
                let (ro, dg) = (op.order() as usize, op.degree() as usize);
                return Ok((op, ro, dg));
            }
        }
    }
    Err(Error::NoOperatorFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p < (1 << 62)));
        assert!(!is_prime_u64(1 << 61));
    }

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let x = Rat::frac(-355, 113);
        let inv = x.denom().extended_gcd(&m).x.mod_floor(&m);
        let a = (x.numer() * inv).mod_floor(&m);
        assert_eq!(rational_reconstruct(&a, &m), Some(x));
    }

    #[test]
    fn geometric() {
        let f = TSeries::from_ints(&[1; 30]);
        let op = guess(&f, 1, 1, 10).unwrap();
        // (1 − t)∂ − 1, normalized to a positive leading coefficient
        assert_eq!(op, DiffOp::from_int_rows(&[&[1], &[-1, 1]]));
    }

    #[test]
    fn too_few_terms() {
        let f = TSeries::from_ints(&[1; 5]);
        assert!(matches!(guess(&f, 1, 1, 10), Err(Error::InsufficientTerms { .. })));
    }
}
