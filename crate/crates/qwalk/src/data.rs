//! The bundled model file: parsing, structural checks and the full
//! load-time validation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qwalk_core::asymptotics::{check_kappa_terms, terms_for, AsymSpec, ConstExpr, KappaReport};
use qwalk_core::closedform::HGParams;
use qwalk_core::walks::{validate_model, ModelData, SpecPoint, StepSet, Table2};
use qwalk_core::{LPoly2, Rat, RatFn2};

use crate::cache::Cache;
use crate::error::{CliError, CliResult};
use crate::jobs::run_jobs;
use crate::json::poly_from_json;

pub const BUNDLED_MODELS: &str = include_str!("../data/models.json");

/// Bumped whenever a change to the code or data can change a cached value.
pub const CODE_DATA_VERSION: u32 = 1;

#[derive(Deserialize, Serialize)]
struct RawFile {
    version: u32,
    models: Vec<RawModel>,
}

#[derive(Deserialize, Serialize)]
struct RawLaurent {
    num: Vec<(i64, i64, String)>,
    den: Vec<(i64, i64, String)>,
}

#[derive(Deserialize, Serialize)]
struct RawTable2 {
    a: String,
    b: String,
    c: String,
    w: Value,
}

#[derive(Deserialize, Serialize)]
struct RawAsym {
    rho: String,
    gamma: String,
    period: u32,
    kappa_expr: Vec<String>,
    oeis: String,
    algebraic: bool,
    #[serde(default)]
    anchor: Vec<String>,
}

#[derive(Deserialize, Serialize)]
struct RawModel {
    id: u32,
    steps: Vec<(i64, i64)>,
    group_order: usize,
    #[serde(rename = "N_orbit")]
    n_orbit: RawLaurent,
    orbit_norm: String,
    table2: RawTable2,
    asym: BTreeMap<String, RawAsym>,
}

/// Parsed model file.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub models: Vec<ModelData>,
    /// Group order recorded with each model.
    pub group_orders: BTreeMap<u32, usize>,
    /// sha256 of the file contents.
    pub checksum: String,
}

impl Bundle {
    pub fn get(&self, id: u32) -> CliResult<&ModelData> {
        self.models
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| CliError::Usage(format!("no model {} (bundled models are 1..={})", id, self.models.len())))
    }
}

fn rat(s: &str) -> CliResult<Rat> {
    s.parse::<Rat>().map_err(|e| CliError::Format(format!("rational {:?}: {}", s, e)))
}

fn laurent(terms: &[(i64, i64, String)]) -> CliResult<LPoly2> {
    let mut p = LPoly2::zero();
    for (i, j, c) in terms {
        p.add_term(*i, *j, rat(c)?);
    }
    Ok(p)
}

fn const_expr(s: &str, what: &str) -> CliResult<ConstExpr> {
    s.parse::<ConstExpr>().map_err(|e| CliError::Format(format!("{} {:?}: {}", what, s, e)))
}

fn asym_spec(id: u32, sp: SpecPoint, r: &RawAsym) -> CliResult<AsymSpec> {
    let kappa = r
        .kappa_expr
        .iter()
        .map(|k| if k.trim() == "0" { Ok(None) } else { const_expr(k, "kappa").map(Some) })
        .collect::<CliResult<Vec<_>>>()?;
    let spec = AsymSpec {
        model: id,
        spec: sp,
        rho: const_expr(&r.rho, "rho")?,
        gamma: rat(&r.gamma)?,
        period: r.period,
        kappa,
        oeis: r.oeis.clone(),
        algebraic: r.algebraic,
        anchor: r.anchor.iter().map(|a| rat(a)).collect::<CliResult<_>>()?,
    };
    spec.check()?;
    Ok(spec)
}

fn model(r: &RawModel) -> CliResult<ModelData> {
    let stepset = StepSet::new(&r.steps)?;
    let den = laurent(&r.n_orbit.den)?;
    if den.is_zero() {
        return Err(CliError::Format(format!("model {}: zero orbit denominator", r.id)));
    }
    let n_orbit = &laurent(&r.n_orbit.num)?.to_ratfn2() / &den.to_ratfn2();
    let params = HGParams::new(rat(&r.table2.a)?, rat(&r.table2.b)?, rat(&r.table2.c)?)?;
    let wn = poly_from_json(r.table2.w.get("num").unwrap_or(&Value::Null))?;
    let wd = poly_from_json(r.table2.w.get("den").unwrap_or(&Value::Null))?;
    if wd.is_zero() {
        return Err(CliError::Format(format!("model {}: w(t) has a zero denominator", r.id)));
    }
    let mut asym = Vec::new();
    for (k, a) in &r.asym {
        let sp: SpecPoint = k.parse()?;
        asym.push(asym_spec(r.id, sp, a)?);
    }
    if asym.len() != 4 {
        return Err(CliError::Format(format!("model {}: {} asymptotic rows, expected 4", r.id, asym.len())));
    }
    asym.sort_by_key(|a| SpecPoint::ALL.iter().position(|p| *p == a.spec));
    Ok(ModelData {
        id: r.id,
        stepset,
        n_orbit,
        orbit_norm: rat(&r.orbit_norm)?,
        table2: Table2 { params, w: qwalk_core::RatFn::new(wn, wd) },
        asym,
    })
}

/// Parse a model file and run the cheap structural checks.
pub fn parse_bundle(text: &str) -> CliResult<Bundle> {
    let raw: RawFile = serde_json::from_str(text)?;
    if raw.version != 1 {
        return Err(CliError::Format(format!("unsupported model file version {}", raw.version)));
    }
    let mut models = Vec::new();
    let mut group_orders = BTreeMap::new();
    for r in &raw.models {
        if group_orders.insert(r.id, r.group_order).is_some() {
            return Err(CliError::Format(format!("model {} listed twice", r.id)));
        }
        models.push(model(r)?);
    }
    models.sort_by_key(|m| m.id);
    let checksum = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Bundle { models, group_orders, checksum })
}

/// The bundled models, or those of `path`.
pub fn load_bundle(path: Option<&Path>) -> CliResult<Bundle> {
    match path {
        Some(p) => parse_bundle(&std::fs::read_to_string(p)?),
        None => parse_bundle(BUNDLED_MODELS),
    }
}

/// Kernel decomposition, group and orbit sum, kernel equation, positive
/// part of R and anchor terms, through t^order.
pub fn validate_models(b: &Bundle, order: usize, jobs: usize) -> Vec<(u32, Value, bool)> {
    run_jobs(&b.models, jobs, |m| {
        let expected = b.group_orders.get(&m.id).copied();
        match validate_model(m, order) {
            Ok(rep) => {
                let group_ok = expected == Some(rep.group_order);
                let checks: Vec<Value> = rep
                    .checks
                    .iter()
                    .map(|(name, ok)| json!({ "check": name, "pass": ok }))
                    .chain(std::iter::once(json!({ "check": "group order", "pass": group_ok, "found": rep.group_order })))
                    .collect();
                (m.id, json!({ "model": m.id, "checks": checks }), rep.passed() && group_ok)
            }
            Err(e) => (m.id, json!({ "model": m.id, "error": e.to_string() }), false),
        }
    })
}

/// Short numeric adjudication of every asymptotic row: extrapolated κ
/// from `nmax` terms must match within `tol`.
pub fn adjudicate_asymptotics(b: &Bundle, nmax: usize, levels: usize, tol: f64, jobs: usize) -> Vec<(u32, SpecPoint, CliResult<KappaReport>)> {
    let tasks: Vec<(&ModelData, SpecPoint)> = b.models.iter().flat_map(|m| SpecPoint::ALL.iter().map(move |&sp| (m, sp))).collect();
    run_jobs(&tasks, jobs, |&(m, sp)| {
        let r = (|| -> CliResult<KappaReport> {
            let spec = m.asym_for(sp).ok_or_else(|| CliError::Format(format!("model {} has no row for {}", m.id, sp)))?;
            let a = terms_for(m, sp, nmax)?;
            Ok(check_kappa_terms(spec, &a, levels, tol, 128)?)
        })();
        (m.id, sp, r)
    })
}

/// Full validation once per model file, remembered in the cache.
pub fn ensure_validated(b: &Bundle, cache: &Cache, order: usize, jobs: usize) -> CliResult<()> {
    let key = Cache::key(&["validated", &b.checksum, &order.to_string()]);
    if cache.get(&key).is_some() {
        return Ok(());
    }
    let bad: Vec<String> = validate_models(b, order, jobs).into_iter().filter(|r| !r.2).map(|r| r.1.to_string()).collect();
    if !bad.is_empty() {
        return Err(CliError::Core(qwalk_core::Error::ValidationFailed(bad.join("; "))));
    }
    cache.put(&key, &json!(true))?;
    Ok(())
}

/// Orbit numerator as text, for reports.
pub fn describe_orbit(n: &RatFn2) -> String {
    match n.to_lpoly2() {
        Some(p) => format!("{:?}", p),
        None => format!("{:?}", n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_parses() {
        let b = load_bundle(None).unwrap();
        assert_eq!(b.models.len(), 19);
        assert_eq!(b.models[3].stepset.len(), 8);
        assert_eq!(b.group_orders[&19], 8);
    }

    #[test]
    fn duplicate_rejected() {
        let mut v: Value = serde_json::from_str(BUNDLED_MODELS).unwrap();
        let first = v["models"][0].clone();
        v["models"].as_array_mut().unwrap().push(first);
        assert!(parse_bundle(&v.to_string()).is_err());
    }

    #[test]
    fn bad_kappa_rejected() {
        let mut v: Value = serde_json::from_str(BUNDLED_MODELS).unwrap();
        v["models"][0]["asym"]["11"]["kappa_expr"][0] = json!("4/(pi");
        assert!(parse_bundle(&v.to_string()).is_err());
    }
}
