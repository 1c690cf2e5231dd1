//! Arbitrary-precision binary floating point.
//!
//! A value is `m · 2^e` with `|m| < 2^prec`. Results carry the larger of the
//! operand precisions and are rounded to nearest (ties to even). There is no
//! global precision state.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;

pub const MIN_PREC: u32 = 64;

#[derive(Clone)]
pub struct BigF {
    m: BigInt,
    e: i64,
    prec: u32,
}

fn round_mag(mag: BigUint, e: i64, prec: u32, sticky: bool) -> (BigUint, i64) {
    let bits = mag.bits() as i64;
    if bits <= prec as i64 {
        return (mag, e);
    }
    let sh = (bits - prec as i64) as usize;
    let mut q = &mag >> sh;
    let rem = &mag - (&q << sh);
    let half = BigUint::one() << (sh - 1);
    let up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || q.bit(0),
    };
    let mut e = e + sh as i64;
    if up {
        q += 1u32;
        if q.bits() > prec as u64 {
            q >>= 1;
            e += 1;
        }
    }
    (q, e)
}

impl BigF {
    fn make(m: BigInt, e: i64, prec: u32, sticky: bool) -> BigF {
        let prec = prec.max(MIN_PREC);
        if m.is_zero() {
            return BigF { m, e: 0, prec };
        }
        let (sign, mag) = m.into_parts();
        let (mag, e) = round_mag(mag, e, prec, sticky);
        BigF { m: BigInt::from_biguint(sign, mag), e, prec }
    }

    pub fn zero(prec: u32) -> BigF {
        BigF { m: BigInt::zero(), e: 0, prec: prec.max(MIN_PREC) }
    }

    pub fn one(prec: u32) -> BigF {
        BigF::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> BigF {
        BigF::make(BigInt::from(n), 0, prec, false)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> BigF {
        BigF::make(n.clone(), 0, prec, false)
    }

    pub fn from_rat(r: &Rat, prec: u32) -> BigF {
        let a = BigF::make(r.numer().clone(), 0, prec.max(MIN_PREC) + 8, false);
        if r.is_integer() {
            return a.with_prec(prec);
        }
        let b = BigF::make(r.denom().clone(), 0, prec.max(MIN_PREC) + 8, false);
        (&a / &b).with_prec(prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> BigF {
        assert!(x.is_finite());
        if x == 0.0 {
            return BigF::zero(prec);
        }
        let (fr, ex) = libm::frexp(x);
        let m = libm::ldexp(fr, 53) as i64;
        BigF::make(BigInt::from(m), ex as i64 - 53, prec, false)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-round to a new precision (may raise or lower it).
    pub fn with_prec(&self, prec: u32) -> BigF {
        BigF::make(self.m.clone(), self.e, prec, false)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> BigF {
        BigF { m: self.m.abs(), e: self.e, prec: self.prec }
    }

    /// Exponent of the leading bit plus one: |x| ∈ [2^(k−1), 2^k).
    /// Zero gives a very negative value, so `top() < k` holds for it.
    pub fn top(&self) -> i64 {
        if self.m.is_zero() {
            return i64::MIN / 4;
        }
        self.e + self.m.bits() as i64
    }

    /// x · 2^k
    pub fn ldexp(&self, k: i64) -> BigF {
        if self.is_zero() {
            return self.clone();
        }
        BigF { m: self.m.clone(), e: self.e + k, prec: self.prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits() as i64;
        let (m, e) = if bits > 60 { (&self.m >> (bits - 60) as usize, self.e + bits - 60) } else { (self.m.clone(), self.e) };
        let f = m.to_i64().unwrap() as f64;
        if e > 3000 {
            return f * f64::INFINITY;
        }
        if e < -3000 {
            return 0.0;
        }
        libm::ldexp(f, e as i32)
    }

    pub fn mul_rat(&self, r: &Rat) -> BigF {
        self * &BigF::from_rat(r, self.prec)
    }

    pub fn sqrt(&self) -> BigF {
        assert!(self.signum() >= 0, "sqrt of negative BigF");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as i64;
        let bits = self.m.bits() as i64;
        let mut k = (2 * p + 8 - bits).max(0);
        if (self.e - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let mm = &self.m << k as usize;
        let r = mm.sqrt();
        let sticky = &r * &r != mm;
        BigF::make(r, (self.e - k) / 2, self.prec, sticky)
    }

    /// Integer power by repeated squaring (negative exponents invert).
    pub fn powi(&self, n: i64) -> BigF {
        if n < 0 {
            return &BigF::one(self.prec) / &self.powi(-n);
        }
        let wp = self.prec + 2 * (64 - (n as u64).leading_zeros()) + 8;
        let mut base = self.with_prec(wp);
        let mut acc = BigF::one(wp);
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc.with_prec(self.prec)
    }

    /// Positive real n-th root by Newton iteration.
    pub fn nth_root(&self, n: u32) -> BigF {
        assert!(n >= 1);
        if n == 1 {
            return self.clone();
        }
        if n == 2 {
            return self.sqrt();
        }
        assert!(self.signum() >= 0, "even root of negative BigF");
        if self.is_zero() {
            return self.clone();
        }
        let wp = self.prec + 16;
        let x = self.with_prec(wp);
        // initial guess from the top bits
        let top = self.top();
        let frac = self.ldexp(-top).to_f64();
        let q = top.div_euclid(n as i64);
        let r = top.rem_euclid(n as i64);
        let y0 = libm::pow(libm::ldexp(frac, r as i32), 1.0 / n as f64);
        let mut y = BigF::from_f64(y0, wp).ldexp(q);
        let nn = BigF::from_i64(n as i64, wp);
        let n1 = BigF::from_i64(n as i64 - 1, wp);
        for _ in 0..200 {
            let yn1 = y.powi(n as i64 - 1);
            let next = &(&(&n1 * &y) + &(&x / &yn1)) / &nn;
            let delta = (&next - &y).abs();
            y = next;
            if delta.is_zero() || delta.top() < y.top() - wp as i64 + 2 {
                break;
            }
        }
        y.with_prec(self.prec)
    }

    /// x^(p/q) for x > 0 (or any x when q = 1).
    pub fn pow_rat(&self, r: &Rat) -> BigF {
        let q = r.denom().to_u32().expect("root index too large");
        let p = r.numer().to_i64().expect("exponent too large");
        if q == 1 {
            return self.powi(p);
        }
        let wp = self.prec + 16;
        self.with_prec(wp).nth_root(q).powi(p).with_prec(self.prec)
    }

    /// π to the given precision (Machin's formula in fixed point).
    pub fn pi(prec: u32) -> BigF {
        let s = prec as usize + 40;
        let atan_inv = |x: u64| -> BigInt {
            let one = BigInt::one() << s;
            let x2 = BigInt::from(x * x);
            let mut term = one / BigInt::from(x);
            let mut sum = BigInt::zero();
            let mut k = 0u64;
            while !term.is_zero() {
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 0 {
                    sum += t;
                } else {
                    sum -= t;
                }
                term /= &x2;
                k += 1;
            }
            sum
        };
        let v = atan_inv(5) * 16 - atan_inv(239) * 4;
        BigF::make(v, -(s as i64), prec, true)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        use alloc::format;
        if self.is_zero() {
            return String::from("0");
        }
        // estimate decimal exponent
        let l10 = (self.top() as f64 - 1.0) * core::f64::consts::LOG10_2;
        let mut d10 = libm::floor(l10) as i64;
        let wp = self.prec.max((digits as f64 * 3.33) as u32 + 32);
        let ten = BigF::from_i64(10, wp);
        let mut scaled;
        loop {
            let sh = digits as i64 - 1 - d10;
            scaled = &self.abs().with_prec(wp) * &ten.powi(sh);
            let int = scaled.round_to_int();
            let s = int.to_str_radix(10);
            if s.len() > digits {
                d10 += 1;
                continue;
            }
            if s.len() < digits && !int.is_zero() {
                d10 -= 1;
                continue;
            }
            let sign = if self.signum() < 0 { "-" } else { "" };
            let (a, b) = s.split_at(1);
            return if b.is_empty() { format!("{}{}e{}", sign, a, d10) } else { format!("{}{}.{}e{}", sign, a, b, d10) };
        }
    }

    /// Nearest integer.
    pub fn round_to_int(&self) -> BigInt {
        if self.e >= 0 {
            return &self.m << self.e as usize;
        }
        let sh = (-self.e) as usize;
        let (sign, mag) = self.m.clone().into_parts();
        let half = BigUint::one() << (sh - 1);
        let q: BigUint = (mag + half) >> sh;
        BigInt::from_biguint(sign, q)
    }

    pub fn max_prec(&self, o: &BigF) -> u32 {
        self.prec.max(o.prec)
    }
}

fn add_impl(a: &BigF, b: &BigF, negate_b: bool) -> BigF {
    let p = a.prec.max(b.prec);
    let bm = if negate_b { -&b.m } else { b.m.clone() };
    if a.is_zero() {
        return BigF::make(bm, b.e, p, false);
    }
    if b.is_zero() {
        return BigF::make(a.m.clone(), a.e, p, false);
    }
    let floor = a.top().max(b.top()) - p as i64 - 64;
    // operands far below the result's resolution are truncated, keeping a
    // sticky low bit so rounding still sees them
    let clip = |m: BigInt, e: i64| -> (BigInt, i64) {
        if e >= floor {
            return (m, e);
        }
        let sh = (floor - e) as usize;
        let (sign, mag) = m.into_parts();
        let q = &mag >> sh;
        let lost = q.clone() << sh != mag;
        let q = if lost { (q << 1) | BigUint::one() } else { q << 1 };
        (BigInt::from_biguint(sign, q), floor - 1)
    };
    let (am, ae) = clip(a.m.clone(), a.e);
    let (bm, be) = clip(bm, b.e);
    let e = ae.min(be);
    let s = (am << (ae - e) as usize) + (bm << (be - e) as usize);
    BigF::make(s, e, p, false)
}

impl Add for &BigF {
    type Output = BigF;
    fn add(self, o: &BigF) -> BigF {
        add_impl(self, o, false)
    }
}

impl Sub for &BigF {
    type Output = BigF;
    fn sub(self, o: &BigF) -> BigF {
        add_impl(self, o, true)
    }
}

impl Mul for &BigF {
    type Output = BigF;
    fn mul(self, o: &BigF) -> BigF {
        BigF::make(&self.m * &o.m, self.e + o.e, self.prec.max(o.prec), false)
    }
}

impl Div for &BigF {
    type Output = BigF;
    fn div(self, o: &BigF) -> BigF {
        assert!(!o.is_zero(), "BigF division by zero");
        let p = self.prec.max(o.prec);
        if self.is_zero() {
            return BigF::zero(p);
        }
        let sh = (p as i64 + 4 + o.m.bits() as i64 - self.m.bits() as i64).max(0);
        let num = &self.m << sh as usize;
        let q = &num / &o.m;
        let r = &num - &q * &o.m;
        let (q, ex) = (q * 2 + if r.is_zero() { 0 } else { q_sign(&num, &o.m) }, -1);
        BigF::make(q, self.e - sh - o.e + ex, p, false)
    }
}

fn q_sign(a: &BigInt, b: &BigInt) -> i32 {
    if (a.sign() == Sign::Minus) == (b.sign() == Sign::Minus) {
        1
    } else {
        -1
    }
}

impl Neg for &BigF {
    type Output = BigF;
    fn neg(self) -> BigF {
        BigF { m: -&self.m, e: self.e, prec: self.prec }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for BigF {
            type Output = BigF;
            fn $m(self, o: BigF) -> BigF {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for BigF {
    type Output = BigF;
    fn neg(self) -> BigF {
        -&self
    }
}

impl PartialEq for BigF {
    fn eq(&self, o: &BigF) -> bool {
        self.cmp_value(o) == Ordering::Equal
    }
}

impl PartialOrd for BigF {
    fn partial_cmp(&self, o: &BigF) -> Option<Ordering> {
        Some(self.cmp_value(o))
    }
}

impl BigF {
    fn cmp_value(&self, o: &BigF) -> Ordering {
        let sa = self.signum();
        let sb = o.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        a.cmp(&b)
    }
}

impl fmt::Debug for BigF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl fmt::Display for BigF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(((self.prec as f64) * 0.30103) as usize);
        write!(f, "{}", self.to_sci_string(d.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigF, b: &BigF, bits: i64) -> bool {
        let d = (a - b).abs();
        d.is_zero() || d.top() <= a.top() - bits
    }

    #[test]
    fn pi_digits() {
        let p = BigF::pi(200);
        assert_eq!(p.to_sci_string(30), "3.14159265358979323846264338328e0");
        assert!((p.to_f64() - core::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn basic_ops() {
        let a = BigF::from_rat(&Rat::frac(1, 3), 128);
        let b = &a * &BigF::from_i64(3, 128);
        assert!(close(&b, &BigF::one(128), 126));
        let s = BigF::from_i64(2, 128).sqrt();
        assert!(close(&(&s * &s), &BigF::from_i64(2, 128), 125));
        let c = BigF::from_i64(27, 128).nth_root(3);
        assert!(close(&c, &BigF::from_i64(3, 128), 124));
        let d = BigF::from_i64(8, 128).pow_rat(&Rat::frac(-2, 3));
        assert!(close(&d, &BigF::from_rat(&Rat::frac(1, 4), 128), 120));
        assert_eq!(BigF::from_f64(-0.75, 64).to_f64(), -0.75);
        assert!(BigF::from_i64(2, 64) > BigF::from_i64(1, 64));
        assert_eq!(BigF::from_rat(&Rat::frac(5, 2), 64).round_to_int(), BigInt::from(3));
    }

    #[test]
    fn tiny_addend() {
        let one = BigF::one(64);
        let tiny = BigF::one(64).ldexp(-500);
        assert_eq!(&one + &tiny, one);
        assert!(&(&one + &tiny) - &one == BigF::zero(64));
    }

    #[test]
    fn precision_doubling_agreement() {
        for p in [64u32, 128, 256] {
            let f = |q: u32| {
                let x = BigF::from_rat(&Rat::frac(7, 11), q);
                let y = &x.sqrt() + &BigF::pi(q);
                &(&y * &y) / &x.nth_root(5)
            };
            let a = f(p);
            let b = f(2 * p);
            assert!(close(&a.with_prec(2 * p), &b, p as i64 - 8), "p = {}", p);
        }
    }
}
