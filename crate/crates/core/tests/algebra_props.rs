use num_bigint::{BigInt, Sign};
use proptest::prelude::*;
use qwalk_core::series::{ratfn_expand_at_infinity, ratfn_expand_at_zero};
use qwalk_core::{BigF, Poly, Rat, RatFn, TSeries};

fn big(limbs: Vec<u32>, neg: bool) -> BigInt {
    BigInt::from_slice(if neg { Sign::Minus } else { Sign::Plus }, &limbs)
}

fn big256() -> impl Strategy<Value = BigInt> {
    (prop::collection::vec(any::<u32>(), 8), any::<bool>()).prop_map(|(l, s)| big(l, s))
}

fn nonzero256() -> impl Strategy<Value = BigInt> {
    big256().prop_filter("nonzero", |b| b.sign() != Sign::NoSign)
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn unit_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    (prop::collection::vec(-9i64..=9, 0..=max_deg), 1i64..=5, any::<bool>()).prop_map(|(mut c, d0, neg)| {
        c.insert(0, if neg { -d0 } else { d0 });
        Poly::from_ints(&c)
    })
}

/// 1 + t·(small integer polynomial), as a series known through t^n.
fn unit_series(n: i64) -> impl Strategy<Value = TSeries> {
    prop::collection::vec(-4i64..=4, 1..6).prop_map(move |c| {
        let mut v = vec![1];
        v.extend(c);
        TSeries::from_poly(&Poly::from_ints(&v), n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rat_addition_is_exact(a in big256(), b in nonzero256(), c in big256(), d in nonzero256()) {
        let x = Rat::new(a.clone(), b.clone());
        let y = Rat::new(c.clone(), d.clone());
        let bd = Rat::new(&b * &d, BigInt::from(1));
        let lhs = &(&x + &y) * &bd;
        prop_assert_eq!(lhs, Rat::new(&a * &d + &c * &b, BigInt::from(1)));
    }

    #[test]
    fn rat_field_laws(a in big256(), b in nonzero256(), c in nonzero256(), d in nonzero256()) {
        let x = Rat::new(a, b);
        let y = Rat::new(c, d);
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
    }

    #[test]
    fn expand_at_zero_times_den(num in small_poly(6), den in unit_poly(5), n in 0i64..40) {
        let f = RatFn::new(num, den);
        let s = ratfn_expand_at_zero(&f, n).unwrap();
        let back = s.mul_poly(f.den()).truncate(n);
        prop_assert!(back.agrees_with(&TSeries::from_poly(f.num(), n)));
    }

    #[test]
    fn expand_at_infinity_times_den(num in small_poly(6), den in small_poly(5), k in 0i64..20) {
        prop_assume!(!den.is_zero() && !num.is_zero());
        let f = RatFn::new(num, den);
        // exponent e stands for x^(−e); multiply by den(x) in that variable
        let s = ratfn_expand_at_infinity(&f, k);
        let dd = f.den().deg();
        let top = f.num().deg();
        let mut prod = std::collections::BTreeMap::<i64, Rat>::new();
        for e in s.min_exp()..=s.order() {
            let a = s.coeff(e);
            if a.is_zero() {
                continue;
            }
            for (j, b) in f.den().coeffs().iter().enumerate() {
                let x_exp = -e + j as i64;
                let slot = prod.entry(x_exp).or_insert_with(Rat::zero);
                *slot = &*slot + &(&a * b);
            }
        }
        // exact for x-exponents above top − k
        for x_exp in (top - k + 1)..=(top.max(dd) + 1) {
            let lhs = prod.get(&x_exp).cloned().unwrap_or_else(Rat::zero);
            let rhs = if x_exp >= 0 { f.num().coeff(x_exp as usize) } else { Rat::zero() };
            prop_assert_eq!(lhs, rhs, "x^{}", x_exp);
        }
    }

    #[test]
    fn derive_undoes_integrate(c in prop::collection::vec(-20i64..=20, 1..30), lo in -4i64..3) {
        let s = TSeries::from_ints(&c).shift(lo);
        prop_assume!(s.get(-1).is_some_and(|a| a.is_zero()));
        let i = s.integrate().unwrap();
        prop_assert!(i.derive().agrees_with(&s));
    }

    #[test]
    fn polar_part_splits(c in prop::collection::vec(-20i64..=20, 1..30), lo in -6i64..3) {
        let s = TSeries::from_ints(&c).shift(lo);
        let pp = s.polar_part();
        prop_assert!(pp.add(&s.sub(&pp)).agrees_with(&s));
        prop_assert_eq!(pp.polar_part(), pp);
    }

    #[test]
    fn rational_power_then_integer_power(s in unit_series(25), p in -3i64..=3, q in 1i64..=4) {
        let r = s.pow_rational(&Rat::frac(p, q)).unwrap();
        prop_assert!(r.pow_int(q).unwrap().agrees_with(&s.pow_int(p).unwrap()));
    }

    #[test]
    fn compose_is_a_ring_map(a in unit_series(20), b in unit_series(20), wn in small_poly(3), wd in unit_poly(2)) {
        let w = RatFn::new(wn.shift(1), wd);
        let lhs = a.mul(&b).compose_rational(&w).unwrap();
        let rhs = a.compose_rational(&w).unwrap().mul(&b.compose_rational(&w).unwrap());
        prop_assert!(lhs.agrees_with(&rhs));
    }
}

#[test]
fn bigf_precision_doubling() {
    let corpus = [Rat::frac(1, 3), Rat::frac(-22, 7), Rat::frac(355, 113), Rat::frac(10_007, 3)];
    for p in [64u32, 128, 256] {
        for x in &corpus {
            for y in &corpus {
                let lo = &(&BigF::from_rat(x, p) * &BigF::from_rat(y, p)) / &BigF::from_rat(&(y + &Rat::one()), p);
                let hi = &(&BigF::from_rat(x, 2 * p) * &BigF::from_rat(y, 2 * p)) / &BigF::from_rat(&(y + &Rat::one()), 2 * p);
                let s_lo = BigF::from_rat(x, p).abs().sqrt();
                let s_hi = BigF::from_rat(x, 2 * p).abs().sqrt();
                for (a, b) in [(lo, hi), (s_lo, s_hi)] {
                    let d = (&a.with_prec(2 * p) - &b).abs();
                    let scale = b.abs().top();
                    assert!(d.is_zero() || d.top() <= scale - (p as i64 - 8), "p = {}", p);
                }
            }
        }
    }
}
