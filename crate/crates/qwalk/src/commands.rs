//! Subcommand implementations. Each returns a JSON report and whether
//! everything it checked passed.

use num_bigint::BigInt;
use serde_json::{json, Value};

use qwalk_core::asymptotics::{
    annihilator, check_kappa_terms, conjecture_report, integral_i, terms_with, IntegralSpec, KappaReport, OperatorSource,
};
use qwalk_core::closedform::{builtin_closed_forms, validate_closed_form, verify_identity, Identity};
use qwalk_core::cones::{positive_part_check, q_via_residue, verify_lemma9};
use qwalk_core::dfinite::{annihilates, builtin_operators, guess, guess_auto, to_recurrence, unroll, validate_builtin_operators, DiffOp};
use qwalk_core::walks::{dp_series, enumerate, kernel_check, ModelData, SpecPoint, StepSet};
use qwalk_core::{BigF, Rat};

use crate::cache::Cache;
use crate::data::{adjudicate_asymptotics, validate_models, Bundle};
use crate::error::{CliError, CliResult};
use crate::jobs::run_jobs;
use crate::json::{cfexpr_to_json, diffop_from_json, diffop_to_json, prec_to_json, rat_to_json, tseries_to_json};

pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

impl Outcome {
    fn new(report: Value, pass: bool) -> Outcome {
        Outcome { report, pass }
    }
}

/// Steps given as "dx,dy;dx,dy;…".
pub fn parse_steps(s: &str) -> CliResult<StepSet> {
    let mut v = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let xy: Vec<&str> = part.split(',').map(str::trim).collect();
        if xy.len() != 2 {
            return Err(CliError::Usage(format!("bad step {:?}, expected dx,dy", part)));
        }
        let p = |t: &str| t.parse::<i64>().map_err(|_| CliError::Usage(format!("bad step coordinate {:?}", t)));
        v.push((p(xy[0])?, p(xy[1])?));
    }
    StepSet::new(&v).map_err(|e| CliError::Usage(e.to_string()))
}

fn steps_json(s: &StepSet) -> Value {
    json!(s.steps().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>())
}

fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

/// Step set from --model or --steps.
pub fn pick_steps(b: &Bundle, model: Option<u32>, steps: Option<&str>) -> CliResult<StepSet> {
    match (model, steps) {
        (Some(m), None) => Ok(b.get(m)?.stepset.clone()),
        (None, Some(s)) => parse_steps(s),
        _ => Err(CliError::Usage("give exactly one of --model and --steps".into())),
    }
}

pub fn cmd_enum(s: &StepSet, n: usize, endpoints: bool, cache: &Cache) -> CliResult<Outcome> {
    let key = Cache::key(&["enum", &format!("{:016x}", s.digest()), &n.to_string(), &endpoints.to_string()]);
    let v = cache.get_or_put(&key, || {
        let tab = enumerate(s, n);
        let totals: Vec<Value> = tab.totals().iter().map(big).collect();
        let mut out = json!({ "steps": steps_json(s), "n": n, "totals": totals });
        if endpoints {
            let mut rows = Vec::new();
            for len in 0..=n {
                for i in 0..=len {
                    for j in 0..=len {
                        let c = tab.get(len, i, j);
                        if c != &BigInt::from(0) {
                            rows.push(json!([len, i, j, big(c)]));
                        }
                    }
                }
            }
            out["endpoints"] = Value::Array(rows);
        }
        Ok(out)
    })?;
    Ok(Outcome::new(v, true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kernel,
    Eq29,
    Residue,
    Lemma9,
    Identities,
    Closedforms,
    Operators,
    Guess,
    Models,
}

impl Suite {
    pub fn parse(s: &str) -> CliResult<Suite> {
        Ok(match s {
            "kernel" => Suite::Kernel,
            "eq29" => Suite::Eq29,
            "residue" => Suite::Residue,
            "lemma9" => Suite::Lemma9,
            "identities" => Suite::Identities,
            "closedforms" => Suite::Closedforms,
            "operators" => Suite::Operators,
            "guess" => Suite::Guess,
            "models" => Suite::Models,
            _ => return Err(CliError::Usage(format!("unknown suite {:?}", s))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Eq29 => "eq29",
            Suite::Residue => "residue",
            Suite::Lemma9 => "lemma9",
            Suite::Identities => "identities",
            Suite::Closedforms => "closedforms",
            Suite::Operators => "operators",
            Suite::Guess => "guess",
            Suite::Models => "models",
        }
    }

    pub fn default_order(&self) -> usize {
        match self {
            Suite::Kernel => 20,
            Suite::Eq29 | Suite::Residue | Suite::Models => 12,
            Suite::Lemma9 => 5,
            Suite::Identities => 60,
            Suite::Closedforms => 30,
            Suite::Operators => 200,
            Suite::Guess => 0,
        }
    }
}

fn row(label: Value, r: CliResult<bool>) -> (Value, bool) {
    match r {
        Ok(ok) => {
            let mut v = label;
            v["pass"] = json!(ok);
            (v, ok)
        }
        Err(e) => {
            let mut v = label;
            v["pass"] = json!(false);
            v["error"] = json!(e.to_string());
            (v, false)
        }
    }
}

fn finish(suite: &str, order: usize, rows: Vec<(Value, bool)>) -> Outcome {
    let pass = rows.iter().all(|r| r.1);
    let first = rows.iter().find(|r| !r.1).map(|r| r.0.clone());
    let results: Vec<Value> = rows.into_iter().map(|r| r.0).collect();
    Outcome::new(json!({ "suite": suite, "order": order, "pass": pass, "first_failure": first, "results": results }), pass)
}

fn model_jobs(models: &[&ModelData], jobs: usize, f: impl Fn(&ModelData) -> CliResult<bool> + Sync) -> Vec<(Value, bool)> {
    run_jobs(models, jobs, |m| row(json!({ "model": m.id }), f(m)))
}

/// Run one verification suite over the selected models.
pub fn cmd_verify(b: &Bundle, suite: Suite, order: Option<usize>, models: &[u32], jobs: usize, cache: &Cache) -> CliResult<Outcome> {
    let order = order.unwrap_or(suite.default_order());
    let sel: Vec<&ModelData> =
        if models.is_empty() { b.models.iter().collect() } else { models.iter().map(|&m| b.get(m)).collect::<CliResult<_>>()? };
    let rows = match suite {
        Suite::Kernel => model_jobs(&sel, jobs, |m| {
            let tab = enumerate(&m.stepset, order);
            Ok(kernel_check(&m.kernel(), &tab, order).is_ok())
        }),
        Suite::Eq29 => model_jobs(&sel, jobs, |m| {
            let tab = enumerate(&m.stepset, order);
            Ok(positive_part_check(m, &tab, order).is_ok())
        }),
        Suite::Residue => {
            let tasks: Vec<(&ModelData, SpecPoint)> = sel.iter().flat_map(|&m| SpecPoint::ALL.iter().map(move |&sp| (m, sp))).collect();
            run_jobs(&tasks, jobs, |&(m, sp)| {
                let (a, bb) = sp.rats();
                let r = (|| -> CliResult<bool> {
                    let res = q_via_residue(m, &a, &bb, order)?;
                    let dp = dp_series(&m.stepset, &[(a.clone(), bb.clone())], order).remove(0);
                    Ok(res.first_mismatch(&dp).is_none())
                })();
                row(json!({ "model": m.id, "spec": sp.to_string() }), r)
            })
        }
        Suite::Lemma9 => {
            let sel: Vec<&ModelData> = sel.into_iter().filter(|m| m.id <= 16).collect();
            model_jobs(&sel, jobs, |m| {
                for j in 0..=order {
                    if !verify_lemma9(m, j, j as i64 + 4)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
        }
        Suite::Identities => Identity::ALL
            .iter()
            .map(|&id| row(json!({ "identity": id.name() }), verify_identity(id, order as i64).map(|_| true).map_err(CliError::from)))
            .collect(),
        Suite::Closedforms => {
            let cfs = builtin_closed_forms();
            run_jobs(&cfs, jobs, |cf| {
                let n = if b.get(cf.model).map(|m| m.asym_for(cf.spec).is_some_and(|a| a.algebraic)).unwrap_or(false) {
                    order.max(50)
                } else {
                    order
                };
                let r = b.get(cf.model).and_then(|m| validate_closed_form(cf, &m.stepset, n).map(|_| true).map_err(CliError::from));
                row(json!({ "model": cf.model, "spec": cf.spec.to_string(), "label": cf.label, "order": n }), r)
            })
        }
        Suite::Operators => {
            vec![row(json!({ "operators": ["king", "king_left", "king_right", "case18"] }), validate_builtin_operators(order).map(|_| true).map_err(CliError::from))]
        }
        Suite::Guess => {
            let tasks: Vec<(&ModelData, SpecPoint)> = sel.iter().flat_map(|&m| SpecPoint::ALL.iter().map(move |&sp| (m, sp))).collect();
            run_jobs(&tasks, jobs, |&(m, sp)| {
                let label = json!({ "model": m.id, "spec": sp.to_string() });
                match guess_for(m, sp, cache) {
                    Ok((op, src, holdout)) => {
                        let mut v = label;
                        v["source"] = json!(source_name(&src));
                        v["order"] = json!(op.order());
                        v["degree"] = json!(op.degree());
                        v["holdout"] = json!(holdout);
                        row(v, Ok(holdout >= 10))
                    }
                    Err(e) => row(label, Err(e)),
                }
            })
        }
        Suite::Models => {
            let mut rows: Vec<(Value, bool)> = validate_models(b, order, jobs).into_iter().map(|(_, v, ok)| (v, ok)).collect();
            for (id, sp, r) in adjudicate_asymptotics(b, 1000, 6, 1e-3, jobs) {
                let label = json!({ "model": id, "spec": sp.to_string(), "check": "short extrapolation N=1000" });
                rows.push(row(label, r.map(|rep| rep.passed())));
            }
            rows
        }
    };
    Ok(finish(suite.name(), order, rows))
}

fn source_name(s: &OperatorSource) -> String {
    match s {
        OperatorSource::Builtin(n) => format!("builtin {}", n),
        OperatorSource::Guessed { terms, order, degree } => format!("guessed from {} terms at order {} degree {}", terms, order, degree),
    }
}

/// Annihilator for a model and point, with the number of enumerated
/// coefficients beyond those used to find it that it also annihilates.
pub fn guess_for(m: &ModelData, sp: SpecPoint, cache: &Cache) -> CliResult<(DiffOp, OperatorSource, usize)> {
    let (op, src) = cached_annihilator(m, sp, cache)?;
    let used = match &src {
        OperatorSource::Guessed { terms, .. } => *terms,
        OperatorSource::Builtin(_) => 0,
    };
    // check on 40 fresh coefficients past the guessing window
    let n = used + 40;
    let f = dp_series(&m.stepset, &[sp.rats()], n).remove(0);
    let ok = annihilates(&op, &f);
    Ok((op, src, if ok { n - used.saturating_sub(qwalk_core::asymptotics::GUESS_GUARD) } else { 0 }))
}

fn cached_annihilator(m: &ModelData, sp: SpecPoint, cache: &Cache) -> CliResult<(DiffOp, OperatorSource)> {
    let key = Cache::key(&["annihilator", &format!("{:016x}", m.stepset.digest()), &sp.to_string()]);
    if let Some(v) = cache.get(&key) {
        if let (Ok(op), Some(src)) = (diffop_from_json(&v["operator"]), source_from_json(&v["source"])) {
            return Ok((op, src));
        }
    }
    let (op, src, _) = annihilator(&m.stepset, sp)?;
    cache.put(&key, &json!({ "operator": diffop_to_json(&op), "source": source_to_json(&src) }))?;
    Ok((op, src))
}

fn source_to_json(s: &OperatorSource) -> Value {
    match s {
        OperatorSource::Builtin(n) => json!({ "builtin": n }),
        OperatorSource::Guessed { terms, order, degree } => json!({ "terms": terms, "order": order, "degree": degree }),
    }
}

fn source_from_json(v: &Value) -> Option<OperatorSource> {
    if let Some(n) = v.get("builtin").and_then(Value::as_str) {
        let names = builtin_operators();
        return names.keys().find(|k| **k == n).map(|k| OperatorSource::Builtin(k));
    }
    Some(OperatorSource::Guessed {
        terms: v.get("terms")?.as_u64()? as usize,
        order: v.get("order")?.as_u64()? as usize,
        degree: v.get("degree")?.as_u64()? as usize,
    })
}

pub struct GuessArgs {
    pub r: Option<usize>,
    pub d: Option<usize>,
    pub terms: usize,
    pub guard: usize,
}

pub fn cmd_guess(m: &ModelData, sp: SpecPoint, a: &GuessArgs) -> CliResult<Outcome> {
    let f = dp_series(&m.stepset, &[sp.rats()], a.terms).remove(0);
    let (op, r, d) = match (a.r, a.d) {
        (Some(r), Some(d)) => {
            let op = guess(&f, r, d, a.guard)?;
            let (rr, dd) = (op.order() as usize, op.degree() as usize);
            (op, rr, dd)
        }
        (None, None) => guess_auto(&f, 8, a.guard, 6)?,
        _ => return Err(CliError::Usage("give both --r and --d, or neither".into())),
    };
    let mut report = json!({
        "model": m.id,
        "spec": sp.to_string(),
        "terms": a.terms,
        "guard": a.guard,
        "order": r,
        "degree": d,
        "operator": diffop_to_json(&op),
        "annihilates_all_terms": annihilates(&op, &f),
    });
    if let Some(name) = builtin_name(m, sp) {
        let b = builtin_operators()[name].primitive();
        report["builtin"] = json!(name);
        report["equals_builtin"] = json!(b == op.primitive());
    }
    if let Ok(rec) = to_recurrence(&op) {
        report["recurrence"] = prec_to_json(&rec);
    }
    Ok(Outcome::new(report, true))
}

fn builtin_name(m: &ModelData, sp: SpecPoint) -> Option<&'static str> {
    for (name, steps, p) in qwalk_core::dfinite::builtin_targets() {
        if p == sp && steps.len() == m.stepset.len() && steps.iter().all(|&s| m.stepset.contains(s)) {
            return Some(if name == "king" { "king" } else { "case18" });
        }
    }
    None
}

/// Terms a_0..a_N through a cached annihilator.
pub fn terms_cached(m: &ModelData, sp: SpecPoint, n: usize, cache: &Cache) -> CliResult<Vec<Rat>> {
    if n <= qwalk_core::asymptotics::DP_DIRECT {
        return Ok(dp_series(&m.stepset, &[sp.rats()], n).remove(0).power_coeffs());
    }
    let (op, _) = cached_annihilator(m, sp, cache)?;
    Ok(terms_with(&m.stepset, sp, &op, Vec::new(), n)?)
}

pub struct AsymArgs {
    pub nmax: usize,
    pub tol: f64,
    pub levels: usize,
    pub prec: u32,
}

fn kappa_rows(rep: &KappaReport) -> Vec<Value> {
    rep.rows
        .iter()
        .map(|r| {
            json!({
                "model": r.model,
                "spec": r.spec.to_string(),
                "class": r.class,
                "modulus": r.modulus,
                "rho": r.rho,
                "gamma": rat_to_json(&r.gamma),
                "kappa_expected": r.kappa_expected.clone().unwrap_or_else(|| "0".into()),
                "kappa_expected_value": r.expected,
                "kappa_measured": r.measured,
                "spread": r.spread,
                "expansion": if r.expansion == 1 { "1/m" } else { "m^(-1/2)" },
                "relerr": r.relerr,
                "pass": r.pass,
            })
        })
        .collect()
}

/// κ comparison for the given (model, point) pairs.
pub fn cmd_asym(b: &Bundle, tasks: &[(u32, SpecPoint)], a: &AsymArgs, jobs: usize, cache: &Cache) -> CliResult<Outcome> {
    let results = run_jobs(tasks, jobs, |&(id, sp)| -> CliResult<KappaReport> {
        let m = b.get(id)?;
        let spec = m.asym_for(sp).ok_or_else(|| CliError::Format(format!("model {} has no row for {}", id, sp)))?;
        let terms = terms_cached(m, sp, a.nmax, cache)?;
        Ok(check_kappa_terms(spec, &terms, a.levels, a.tol, a.prec)?)
    });
    let mut rows = Vec::new();
    let mut pass = true;
    for (r, &(id, sp)) in results.into_iter().zip(tasks) {
        match r {
            Ok(rep) => {
                pass &= rep.passed();
                rows.extend(kappa_rows(&rep));
            }
            Err(e) => {
                pass = false;
                rows.push(json!({ "model": id, "spec": sp.to_string(), "pass": false, "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome::new(Value::Array(rows), pass))
}

pub fn cmd_integral(case: u32, prec: u32) -> CliResult<Outcome> {
    let spec = IntegralSpec::for_case(case).ok_or_else(|| CliError::Usage(format!("no integral for case {} (use 7 or 5)", case)))?;
    if prec < 64 {
        return Err(CliError::Usage("--prec must be at least 64".into()));
    }
    let v = integral_i(&spec, prec)?;
    let err = (&v - &BigF::from_rat(&spec.expected, prec)).abs().to_f64();
    let digits = (prec as f64 * 0.30103) as usize;
    let pass = err <= 1e-8;
    Ok(Outcome::new(
        json!({
            "case": case,
            "prec": prec,
            "value": v.to_sci_string(digits.max(10)),
            "expected": rat_to_json(&spec.expected),
            "abserr": err,
            "pass": pass,
            "status": qwalk_core::asymptotics::CONJECTURE_STATUS,
        }),
        pass,
    ))
}

pub fn cmd_conjectures(b: &Bundle, prec: u32, nmax: usize, tol: f64) -> CliResult<Outcome> {
    let models: Vec<&ModelData> = [7, 5].iter().filter_map(|&id| b.get(id).ok()).collect();
    let rows = conjecture_report(&models, prec, nmax, tol)?;
    let pass = rows.iter().all(|r| r.integral_pass && r.kappa_pass != Some(false));
    let v: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "case": r.case,
                "integral": r.integral,
                "integral_expected": rat_to_json(&r.integral_expected),
                "integral_abserr": r.integral_abserr,
                "integral_pass": r.integral_pass,
                "kappa_expected": r.kappa_expected,
                "kappa_measured": r.kappa_measured,
                "kappa_relerr": r.kappa_relerr,
                "kappa_pass": r.kappa_pass,
                "status": r.status,
            })
        })
        .collect();
    Ok(Outcome::new(Value::Array(v), pass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMethod {
    Dp,
    Recurrence,
    Residue,
}

pub fn cmd_series(m: &ModelData, sp: SpecPoint, n: usize, method: SeriesMethod, cache: &Cache) -> CliResult<Outcome> {
    let s = match method {
        SeriesMethod::Dp => dp_series(&m.stepset, &[sp.rats()], n).remove(0),
        SeriesMethod::Recurrence => {
            let (op, _) = cached_annihilator(m, sp, cache)?;
            let rec = to_recurrence(&op)?;
            let need = rec.init_needed().min(n + 1);
            let init = dp_series(&m.stepset, &[sp.rats()], need.max(1) - 1).remove(0).power_coeffs();
            qwalk_core::TSeries::from_coeffs(unroll(&rec, &init, n)?)
        }
        SeriesMethod::Residue => {
            let (a, bb) = sp.rats();
            q_via_residue(m, &a, &bb, n)?
        }
    };
    Ok(Outcome::new(json!({ "model": m.id, "spec": sp.to_string(), "series": tseries_to_json(&s) }), true))
}

pub fn cmd_closed_form(b: &Bundle, model: Option<u32>, n: usize, jobs: usize) -> CliResult<Outcome> {
    let cfs: Vec<_> = builtin_closed_forms().into_iter().filter(|c| model.is_none_or(|m| c.model == m)).collect();
    if cfs.is_empty() {
        return Err(CliError::Usage(format!("no closed form bundled for model {}", model.unwrap_or(0))));
    }
    let rows = run_jobs(&cfs, jobs, |cf| {
        let r = b.get(cf.model).and_then(|m| validate_closed_form(cf, &m.stepset, n).map_err(CliError::from));
        json!({
            "model": cf.model,
            "spec": cf.spec.to_string(),
            "label": cf.label,
            "expr": cfexpr_to_json(&cf.expr),
            "order": n,
            "pass": r.is_ok(),
            "error": r.err().map(|e| e.to_string()),
        })
    });
    let pass = rows.iter().all(|r| r["pass"] == json!(true));
    Ok(Outcome::new(Value::Array(rows), pass))
}
