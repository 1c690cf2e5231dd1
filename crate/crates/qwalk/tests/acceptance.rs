//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qwalk::data::{load_bundle, Bundle};
use qwalk_core::asymptotics::{
    check_kappa_terms, integral_i, terms_for, IntegralSpec, CONJECTURE_STATUS, DEFAULT_LEVELS, DEFAULT_NMAX, DEFAULT_PREC,
    DEFAULT_TOL,
};
use qwalk_core::closedform::{builtin_closed_forms, hg_series, validate_closed_form, verify_identity, HGParams, Identity};
use qwalk_core::cones::{default_kneg, positive_part_check, expand_r, hadamard_residue_check, q_via_residue, verify_lemma9, ConeSeries3};
use qwalk_core::dfinite::{
    annihilates, builtin_operators, builtin_targets, guess, guess_auto, king_left_factor, king_operator,
    king_right_factor, to_recurrence, unroll, validate_builtin_operators, DiffOp,
};
use qwalk_core::walks::{brute_force_counts, dp_series, enumerate, kernel_check, SpecPoint, StepSet};
use qwalk_core::{LPoly2, Poly, Rat};

type Check = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> (Check, Duration) {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    match (r, limit) {
        (Ok(_), Some(l)) if el > l => (Err(format!("took {:.1?}, limit {:.0?}", el, l)), el),
        (r, _) => (r, el),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn c1() -> Check {
    let kre = StepSet::new(&[(1, 1), (-1, 0), (0, -1)]).unwrap();
    let t = enumerate(&kre, 6).total(6);
    ensure(t == 125u32.into(), || format!("Kreweras length 6: {}", t))?;
    let king: Vec<(i64, i64)> = (-1..=1).flat_map(|i| (-1..=1).map(move |j| (i, j))).filter(|&s| s != (0, 0)).collect();
    let got: Vec<String> = enumerate(&StepSet::new(&king).unwrap(), 8).totals().iter().map(|x| x.to_string()).collect();
    let want = ["1", "3", "18", "105", "684", "4550", "31340", "219555", "1564080"];
    ensure(got == want, || format!("king totals {:?}", got))?;
    Ok("125; king through n = 8".into())
}

fn c2(b: &Bundle) -> Check {
    let n = 12;
    for m in &b.models {
        let tab = enumerate(&m.stepset, n);
        for len in 0..=n {
            let counts = brute_force_counts(&m.stepset, len);
            let mut cells = 0usize;
            for i in 0..=len {
                for j in 0..=len {
                    let c = tab.get(len, i, j);
                    let bf = counts.get(&(i as i64, j as i64)).cloned().unwrap_or_default();
                    ensure(*c == bf, || format!("model {} n = {} at ({}, {})", m.id, len, i, j))?;
                    if bf != 0u32.into() {
                        cells += 1;
                    }
                }
            }
            ensure(cells == counts.len(), || format!("model {} n = {}: endpoints off the table", m.id, len))?;
        }
    }
    Ok("19 models, n ≤ 12".into())
}

fn c3(b: &Bundle) -> Check {
    for m in &b.models {
        let tab = enumerate(&m.stepset, 20);
        kernel_check(&m.kernel(), &tab, 20).map_err(|e| format!("model {}: {}", m.id, e))?;
    }
    Ok("19 models through t^20".into())
}

fn c4(b: &Bundle) -> Check {
    for m in &b.models {
        for sp in SpecPoint::ALL {
            let (a, bb) = sp.rats();
            let res = q_via_residue(m, &a, &bb, 12).map_err(|e| format!("model {} at {}: {}", m.id, sp, e))?;
            let dp = dp_series(&m.stepset, &[(a, bb)], 12).remove(0);
            if let Some(k) = res.first_mismatch(&dp) {
                return Err(format!("model {} at {}: differs at t^{}", m.id, sp, k));
            }
        }
    }
    Ok("19 × 4 through t^12".into())
}

fn c5(b: &Bundle) -> Check {
    for m in &b.models {
        let tab = enumerate(&m.stepset, 12);
        positive_part_check(m, &tab, 12).map_err(|e| format!("model {}: {}", m.id, e))?;
    }
    for m in b.models.iter().filter(|m| m.id <= 16) {
        for j in 0..=5 {
            let ok = verify_lemma9(m, j, j as i64 + 4).map_err(|e| format!("model {} j = {}: {}", m.id, j, e))?;
            ensure(ok, || format!("two routes differ for model {} at j = {}", m.id, j))?;
        }
    }
    Ok("positive part through t^12; two routes for cases 1-16, j ≤ 5".into())
}

fn c6() -> Check {
    validate_builtin_operators(200).map_err(|e| e.to_string())?;
    let prod = king_left_factor().to_rat().mul(&king_right_factor()).clear_denominators();
    ensure(prod == king_operator().primitive(), || "king factorization".into())?;
    Ok("king and case 18 through t^200; exact factorization".into())
}

const ESCALATE: [usize; 5] = [80, 140, 220, 320, 460];
const HOLDOUT: usize = 40;

fn guess_from_dp(s: &StepSet, sp: SpecPoint) -> Result<(DiffOp, usize), String> {
    for t in ESCALATE {
        let f = dp_series(s, &[sp.rats()], t).remove(0);
        if let Ok((op, _, _)) = guess_auto(&f, 8, 10, 6) {
            return Ok((op, t));
        }
    }
    Err("no operator".into())
}

fn c7(b: &Bundle) -> Check {
    for m in &b.models {
        for sp in SpecPoint::ALL {
            let (op, t) = guess_from_dp(&m.stepset, sp).map_err(|e| format!("model {} at {}: {}", m.id, sp, e))?;
            let longer = dp_series(&m.stepset, &[sp.rats()], t + HOLDOUT).remove(0);
            ensure(annihilates(&op, &longer), || format!("model {} at {}: fails on held-out terms", m.id, sp))?;
        }
    }
    let king = &b.models.iter().find(|m| m.id == 4).ok_or("no king model")?.stepset;
    let f = dp_series(king, &[(Rat::one(), Rat::one())], 140).remove(0);
    let g = guess(&f, 3, 6, 10).map_err(|e| format!("king guess: {}", e))?;
    ensure(g.primitive() == builtin_operators()["king"].primitive(), || "king guess differs from the builtin".into())?;
    Ok(format!("76 pairs, {} held-out coefficients each; king operator recovered", HOLDOUT))
}

fn motzkin(n: usize) -> Vec<Rat> {
    let mut m = vec![Rat::one(), Rat::one()];
    for k in 2..=n {
        let k_ = k as i64;
        let v = &(&(&Rat::from(2 * k_ + 1) * &m[k - 1]) + &(&Rat::from(3 * k_ - 3) * &m[k - 2])) / &Rat::from(k_ + 2);
        m.push(v);
    }
    m.truncate(n + 1);
    m
}

fn c8(b: &Bundle) -> Check {
    for cf in builtin_closed_forms() {
        let m = b.get(cf.model).map_err(|e| e.to_string())?;
        let n = if m.asym_for(cf.spec).is_some_and(|a| a.algebraic) { 50 } else { 30 };
        validate_closed_form(&cf, &m.stepset, n).map_err(|e| format!("{}: {}", cf.label, e))?;
    }
    let m17 = b.get(17).map_err(|e| e.to_string())?;
    let got = dp_series(&m17.stepset, &[(Rat::one(), Rat::one())], 50).remove(0).power_coeffs();
    ensure(got == motzkin(50), || "case 17 totals are not the Motzkin numbers".into())?;
    Ok("cases 4, 3, 7, 5 through t^30; algebraic forms through t^50; Motzkin".into())
}

fn c9() -> Check {
    for id in Identity::ALL {
        verify_identity(id, 60).map_err(|e| format!("{}: {}", id.name(), e))?;
    }
    Ok("three identities through t^60".into())
}

fn c10(b: &Bundle) -> Check {
    let mut rows = 0;
    let mut failures = Vec::new();
    for m in &b.models {
        for sp in SpecPoint::ALL {
            let spec = m.asym_for(sp).ok_or_else(|| format!("model {} has no row for {}", m.id, sp))?;
            let a = terms_for(m, sp, DEFAULT_NMAX).map_err(|e| format!("model {} at {}: {}", m.id, sp, e))?;
            let rep = check_kappa_terms(spec, &a, DEFAULT_LEVELS, DEFAULT_TOL, DEFAULT_PREC)
                .map_err(|e| format!("model {} at {}: {}", m.id, sp, e))?;
            rows += rep.rows.len();
            for r in rep.rows.iter().filter(|r| !r.pass) {
                failures.push(format!("model {} at {} class {}: relerr {:.2e}", m.id, sp, r.class, r.relerr));
            }
        }
    }
    let pi = std::f64::consts::PI;
    let one = SpecPoint { alpha: 1, beta: 1 };
    for (id, want) in [(4, 8.0 / (3.0 * pi)), (3, 6f64.sqrt() / pi), (17, 1.5 * (3.0 / pi).sqrt())] {
        let spec = b.get(id).map_err(|e| e.to_string())?.asym_for(one).ok_or("missing row")?;
        let k = spec.kappa[0].as_ref().ok_or("zero class")?.to_f64().map_err(|e| e.to_string())?;
        ensure((k / want - 1.0).abs() < 1e-12, || format!("bundled κ for case {} is {}", id, k))?;
    }
    if failures.is_empty() {
        Ok(format!("{} classes over 76 pairs at N = {}", rows, DEFAULT_NMAX))
    } else {
        Err(format!("{} of {} classes: {}", failures.len(), rows, failures.join("; ")))
    }
}

fn c11(case: u32, want: f64) -> Check {
    let spec = IntegralSpec::for_case(case).ok_or("no integral")?;
    let v = integral_i(&spec, 128).map_err(|e| e.to_string())?.to_f64();
    ensure((v - want).abs() < 1e-8, || format!("case {}: {}", case, v))?;
    Ok(format!("case {}: {} ({})", case, v, CONJECTURE_STATUS))
}

fn lpoly2(max_terms: usize, span: i64) -> impl Strategy<Value = LPoly2> {
    prop::collection::vec((-span..=span, -span..=span, -9i64..=9), 0..max_terms).prop_map(|ts| {
        let mut p = LPoly2::zero();
        for (i, j, c) in ts {
            p.add_term(i, j, Rat::from(c));
        }
        p
    })
}

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn swapped(s: &ConeSeries3) -> ConeSeries3 {
    ConeSeries3::new(s.cone().clone(), s.layers().iter().map(LPoly2::swap_xy).collect(), s.kneg())
}

fn c12(b: &Bundle) -> Check {
    let nt = 8;
    for m in &b.models {
        let phi = expand_r(m, nt, default_kneg(nt)).map_err(|e| format!("model {}: {}", m.id, e))?;
        for s in [phi.clone(), swapped(&phi)] {
            let r = s.derivative_x().residue_xy().map_err(|e| e.to_string())?;
            ensure(r.is_zero_on_window(), || format!("model {}: residue of a derivative", m.id))?;
        }
        let xy = phi.positive_part_xy().map_err(|e| e.to_string())?;
        let a = phi.positive_part_x().and_then(|s| s.positive_part_y()).map_err(|e| e.to_string())?;
        let c = phi.positive_part_y().and_then(|s| s.positive_part_x()).map_err(|e| e.to_string())?;
        ensure(xy.layers() == a.layers() && a.layers() == c.layers(), || format!("model {}: positive parts", m.id))?;
    }
    runner(100)
        .run(&(lpoly2(10, 5), lpoly2(10, 5)), |(f, g)| {
            prop_assert!(hadamard_residue_check(&f, &g));
            Ok(())
        })
        .map_err(|e| format!("Hadamard residue: {}", e))?;
    runner(64)
        .run(&(-6i64..=6, -6i64..=6, 1i64..=8, 1i64..=4), |(a, bb, c, q)| {
            let p = HGParams::new(Rat::frac(a, q), Rat::frac(bb, q), Rat::frac(c, q)).unwrap();
            let f = hg_series(&p, 40).unwrap();
            let s = &(&p.a + &p.b) + &Rat::one();
            let l = DiffOp::new(vec![
                Poly::from_rats(vec![-(&p.a * &p.b)]),
                Poly::from_rats(vec![p.c.clone(), -s]),
                Poly::from_ints(&[0, 1, -1]),
            ]);
            prop_assert!(annihilates(&l, &f));
            Ok(())
        })
        .map_err(|e| format!("hypergeometric ODE: {}", e))?;
    let ops = builtin_operators();
    for (name, steps, sp) in builtin_targets() {
        let s = StepSet::new(&steps).map_err(|e| e.to_string())?;
        let f = dp_series(&s, &[sp.rats()], 120).remove(0).power_coeffs();
        let rec = to_recurrence(&ops[name]).map_err(|e| e.to_string())?;
        let u = unroll(&rec, &f[..rec.init_needed()], 120).map_err(|e| e.to_string())?;
        ensure(u == f, || format!("{} at {}: unrolled recurrence", name, sp))?;
    }
    Ok("derivative residues and positive parts on 19 expansions; 100 Hadamard residues; ODE; recurrences".into())
}

fn main() -> ExitCode {
    let b = load_bundle(None).expect("bundled models load");
    let secs = Duration::from_secs;
    let mut all = true;
    let mut report = |n: u32, (r, el): (Check, Duration)| {
        match r {
            Ok(msg) => println!("criterion {}: PASS ({:.1?}) {}", n, el, msg),
            Err(msg) => {
                all = false;
                println!("criterion {}: FAIL ({:.1?}) {}", n, el, msg)
            }
        }
    };
    report(1, timed(Some(secs(1)), c1));
    report(2, timed(Some(secs(120)), || c2(&b)));
    report(3, timed(None, || c3(&b)));
    report(4, timed(None, || c4(&b)));
    report(5, timed(None, || c5(&b)));
    report(6, timed(Some(secs(60)), c6));
    report(7, timed(None, || c7(&b)));
    report(8, timed(None, || c8(&b)));
    report(9, timed(None, c9));
    report(10, timed(None, || c10(&b)));
    let c11_both = || {
        let a = timed(Some(secs(120)), || c11(7, -2.0));
        let c = timed(Some(secs(120)), || c11(5, 1.0));
        let el = a.1 + c.1;
        match (a.0, c.0) {
            (Ok(x), Ok(y)) => (Ok(format!("{}; {}", x, y)), el),
            (Err(e), _) | (_, Err(e)) => (Err(e), el),
        }
    };
    report(11, c11_both());
    report(12, timed(None, || c12(&b)));
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
