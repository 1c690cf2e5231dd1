use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// Minimal field interface shared by `Rat` and `RatFn` coefficients.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_neg(&self) -> Self;
    fn f_inv(&self) -> Self;
    fn f_from_i64(n: i64) -> Self;
    fn f_div(&self, o: &Self) -> Self {
        self.f_mul(&o.f_inv())
    }
}

impl Field for Rat {
    fn f_zero() -> Rat {
        Rat::zero()
    }
    fn f_one() -> Rat {
        Rat::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Rat) -> Rat {
        self + o
    }
    fn f_sub(&self, o: &Rat) -> Rat {
        self - o
    }
    fn f_mul(&self, o: &Rat) -> Rat {
        self * o
    }
    fn f_neg(&self) -> Rat {
        -self
    }
    fn f_inv(&self) -> Rat {
        self.recip()
    }
    fn f_from_i64(n: i64) -> Rat {
        Rat::from(n)
    }
}

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<F> {
    c: Vec<F>,
}

pub type Poly = UPoly<Rat>;

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().map_or(false, |x| x.f_is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::f_one())
    }

    pub fn constant(a: F) -> Self {
        Self::new(vec![a])
    }

    /// a·X^k
    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::f_zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn x() -> Self {
        Self::monomial(F::f_one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == F::f_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; -1 for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::f_zero)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(F::f_zero)
    }

    /// Largest k with X^k dividing self (0 for the zero polynomial).
    pub fn low_degree(&self) -> usize {
        self.c.iter().position(|a| !a.f_is_zero()).unwrap_or(0)
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.f_is_zero() {
            return Self::zero();
        }
        Self::new(self.c.iter().map(|x| x.f_mul(a)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::f_zero(); k];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }

    /// Divide by X^k, which must divide self.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.c.iter().take(k).all(|a| a.f_is_zero()));
        Self::new(self.c.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a.f_mul(&F::f_from_i64(i as i64))).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::f_zero();
        for a in self.c.iter().rev() {
            acc = acc.f_mul(x).f_add(a);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead().f_inv();
        self.scale(&l)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Euclidean division: self = q·d + r with deg r < deg d.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.deg() < d.deg() {
            return (Self::zero(), self.clone());
        }
        let dl = d.lead().f_inv();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut q = vec![F::f_zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let a = r[i + dd].f_mul(&dl);
            if a.f_is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] = r[i + j].f_sub(&a.f_mul(b));
            }
            q[i] = a;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Self::constant(a.clone());
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::new(self.c.iter().map(f).collect())
    }
}

impl<F: Field> Add for &UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, o: &UPoly<F>) -> UPoly<F> {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.f_add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::new(c)
    }
}

impl<F: Field> Sub for &UPoly<F> {
    type Output = UPoly<F>;
    fn sub(self, o: &UPoly<F>) -> UPoly<F> {
        self + &(-o)
    }
}

impl<F: Field> Neg for &UPoly<F> {
    type Output = UPoly<F>;
    fn neg(self) -> UPoly<F> {
        UPoly { c: self.c.iter().map(|a| a.f_neg()).collect() }
    }
}

impl<F: Field> Mul for &UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, o: &UPoly<F>) -> UPoly<F> {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![F::f_zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.f_is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].f_add(&a.f_mul(b));
            }
        }
        UPoly::new(c)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for UPoly<F> {
            type Output = UPoly<F>;
            fn $m(self, o: UPoly<F>) -> UPoly<F> {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<F: Field> Neg for UPoly<F> {
    type Output = UPoly<F>;
    fn neg(self) -> UPoly<F> {
        -&self
    }
}

impl<F: Field + fmt::Display> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.f_is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "({})*X", a)?,
                _ => write!(f, "({})*X^{}", a, i)?,
            }
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.c.iter()).finish()
    }
}

impl Poly {
    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&a| Rat::from(a)).collect())
    }

    pub fn from_rats(c: Vec<Rat>) -> Poly {
        Poly::new(c)
    }

    /// Positive content-free integer form: self = content · prim with prim
    /// integral, gcd 1 and positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), Poly::zero());
        }
        let (content, ints) = integer_content(self.coeffs());
        let prim = Poly::new(ints.into_iter().map(Rat::from).collect());
        (content, prim)
    }

    pub fn eval_i64(&self, x: i64) -> Rat {
        self.eval(&Rat::from(x))
    }
}

/// Writes r_i = c·n_i with integers n_i of gcd 1 whose last nonzero entry
/// is positive.
pub fn integer_content(v: &[Rat]) -> (Rat, Vec<BigInt>) {
    let mut l = BigInt::one();
    for a in v {
        l = l.lcm(a.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|a| a.numer() * (&l / a.denom())).collect();
    let mut g = BigInt::zero();
    for a in &ints {
        g = g.gcd(a);
    }
    if g.is_zero() {
        return (Rat::zero(), ints);
    }
    let lead_neg = ints.iter().rev().find(|a| !a.is_zero()).map_or(false, |a| a.is_negative());
    if lead_neg {
        g = -g;
    }
    for a in ints.iter_mut() {
        *a = &*a / &g;
    }
    (Rat::new(g, l), ints)
}
