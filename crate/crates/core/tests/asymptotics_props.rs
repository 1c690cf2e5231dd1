use proptest::prelude::*;
use qwalk_core::asymptotics::{extrapolate, integral_i, terms_for_steps, IntegralSpec};
use qwalk_core::walks::{dp_series, enumerate, SpecPoint, StepSet};
use qwalk_core::{BigF, Rat};

const MODELS: [&[(i64, i64)]; 19] = [
    &[(0, 1), (0, -1), (1, 0), (-1, 0)],
    &[(1, 1), (-1, 1), (1, -1), (-1, -1)],
    &[(0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)],
    &[(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)],
    &[(1, 1), (-1, 1), (0, -1)],
    &[(1, 1), (-1, 1), (0, -1), (1, 0), (-1, 0)],
    &[(0, 1), (1, 1), (-1, 1), (0, -1)],
    &[(0, 1), (1, 1), (-1, 1), (0, -1), (1, 0), (-1, 0)],
    &[(0, 1), (1, 1), (-1, 1), (1, -1), (-1, -1)],
    &[(0, 1), (1, 1), (-1, 1), (1, -1), (-1, -1), (1, 0), (-1, 0)],
    &[(0, 1), (0, -1), (1, -1), (-1, -1)],
    &[(0, 1), (0, -1), (1, -1), (-1, -1), (1, 0), (-1, 0)],
    &[(1, 1), (-1, 1), (0, -1), (1, -1), (-1, -1)],
    &[(1, 1), (-1, 1), (0, -1), (1, -1), (-1, -1), (1, 0), (-1, 0)],
    &[(0, 1), (1, -1), (-1, -1)],
    &[(0, 1), (1, -1), (-1, -1), (1, 0), (-1, 0)],
    &[(1, 0), (-1, 1), (0, -1)],
    &[(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)],
    &[(1, 0), (-1, 0), (-1, 1), (1, -1)],
];

#[test]
fn terms_match_enumeration_through_30() {
    for (i, steps) in MODELS.iter().enumerate() {
        let s = StepSet::new(steps).unwrap();
        for sp in SpecPoint::ALL {
            let want = dp_series(&s, &[sp.rats()], 30).remove(0).power_coeffs();
            assert_eq!(terms_for_steps(&s, sp, 30).unwrap(), want, "case {} at {}", i + 1, sp);
        }
    }
}

#[test]
fn terms_past_the_direct_range_match_enumeration() {
    // cases 1 and 17 at (1,1): the recurrence takes over after the DP prefix
    for i in [0usize, 16] {
        let s = StepSet::new(MODELS[i]).unwrap();
        let sp = SpecPoint { alpha: 1, beta: 1 };
        let want = dp_series(&s, &[sp.rats()], 150).remove(0).power_coeffs();
        assert_eq!(terms_for_steps(&s, sp, 150).unwrap(), want, "case {}", i + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// a_m = ρ^m m^(−γ) (κ + Σ c_i/m^i) with exactly `levels` correction terms.
    #[test]
    fn extrapolation_is_exact_on_synthetic_input(
        rho in 2i64..=9,
        gamma in 0i64..=4,
        kappa in (1i64..=50, 1i64..=20),
        cs in prop::collection::vec(-30i64..=30, 6),
    ) {
        let kappa = Rat::frac(kappa.0, kappa.1);
        let n = 400usize;
        let a: Vec<Rat> = (0..=n)
            .map(|m| {
                if m == 0 {
                    return Rat::zero();
                }
                let mr = Rat::from(m as i64);
                let mut corr = kappa.clone();
                for (i, c) in cs.iter().enumerate() {
                    corr = &corr + &(&Rat::from(*c) / &mr.pow(i as i32 + 1));
                }
                &(&Rat::from(rho).pow(m as i32) / &mr.pow(gamma as i32)) * &corr
            })
            .collect();
        let prec = 160;
        let e = extrapolate(&a, &BigF::from_i64(rho, prec), &Rat::from(gamma), 0, 1, cs.len(), prec).unwrap();
        let d = (&e.value - &BigF::from_rat(&kappa, prec)).abs();
        prop_assert!(d.top() < -(prec as i64) + 24, "error 2^{}", d.top());
    }
}

#[test]
fn integral_is_stable_under_precision_doubling() {
    for case in [7u32, 5] {
        let spec = IntegralSpec::for_case(case).unwrap();
        for p in [64u32, 128] {
            let lo = integral_i(&spec, p).unwrap();
            let hi = integral_i(&spec, 2 * p).unwrap();
            let d = (&lo.with_prec(2 * p) - &hi).abs();
            assert!(d.is_zero() || d.top() < -(p as i64) + 4, "case {} at {} bits", case, p);
        }
    }
}

#[test]
fn king_growth_ratio_increases_toward_eight() {
    let s = StepSet::new(MODELS[3]).unwrap();
    let t = enumerate(&s, 200).totals();
    let ratio = |n: usize| Rat::new(t[n + 1].clone(), t[n].clone());
    // 3, 6, 35/6, … : only the first step dips
    for n in 2..199 {
        assert!(ratio(n) < ratio(n + 1), "n = {}", n);
        assert!(ratio(n + 1) < Rat::from(8));
    }
}
