//! JSON encodings of the core types. Rationals are strings "p/q" (or "p"),
//! polynomials are arrays of such strings in ascending degree.

use serde_json::{json, Map, Value};

use qwalk_core::closedform::{CFExpr, HGParams};
use qwalk_core::cones::ConeSpec;
use qwalk_core::dfinite::{DiffOp, PRec};
use qwalk_core::{Poly, Rat, RatFn, TSeries};

use crate::error::{CliError, CliResult};

fn bad(what: &str, v: &Value) -> CliError {
    CliError::Format(format!("expected {} but found {}", what, v))
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rat_from_json(v: &Value) -> CliResult<Rat> {
    match v {
        Value::String(s) => s.parse::<Rat>().map_err(|e| CliError::Format(format!("rational {:?}: {}", s, e))),
        Value::Number(n) if n.is_i64() => Ok(Rat::from(n.as_i64().unwrap())),
        _ => Err(bad("rational string", v)),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::Format(format!("missing field {:?}", key)))
}

fn int_field(v: &Value, key: &str) -> CliResult<i64> {
    let f = field(v, key)?;
    f.as_i64().ok_or_else(|| bad("integer", f))
}

pub fn rats_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn rats_from_json(v: &Value) -> CliResult<Vec<Rat>> {
    array(v, "array of rationals")?.iter().map(rat_from_json).collect()
}

pub fn poly_to_json(p: &Poly) -> Value {
    rats_to_json(p.coeffs())
}

pub fn poly_from_json(v: &Value) -> CliResult<Poly> {
    Ok(Poly::from_rats(rats_from_json(v)?))
}

pub fn ratfn_to_json(f: &RatFn) -> Value {
    json!({ "num": poly_to_json(f.num()), "den": poly_to_json(f.den()) })
}

pub fn ratfn_from_json(v: &Value) -> CliResult<RatFn> {
    let den = poly_from_json(field(v, "den")?)?;
    if den.is_zero() {
        return Err(CliError::Format("zero denominator".into()));
    }
    Ok(RatFn::new(poly_from_json(field(v, "num")?)?, den))
}

pub fn tseries_to_json(s: &TSeries) -> Value {
    json!({ "minExp": s.min_exp(), "order": s.order(), "coeffs": rats_to_json(s.coeffs()) })
}

pub fn tseries_from_json(v: &Value) -> CliResult<TSeries> {
    let min_exp = int_field(v, "minExp")?;
    let order = int_field(v, "order")?;
    let coeffs = rats_from_json(field(v, "coeffs")?)?;
    if order < min_exp - 1 || coeffs.len() as i64 != order - min_exp + 1 {
        return Err(CliError::Format(format!("series window {}..{} holds {} coefficients", min_exp, order, coeffs.len())));
    }
    Ok(TSeries::new(min_exp, coeffs, order))
}

pub fn diffop_to_json(l: &DiffOp) -> Value {
    json!({ "order": l.order(), "coeffs": Value::Array(l.coeffs().iter().map(poly_to_json).collect()) })
}

pub fn diffop_from_json(v: &Value) -> CliResult<DiffOp> {
    let coeffs: Vec<Poly> = array(field(v, "coeffs")?, "coefficient list")?.iter().map(poly_from_json).collect::<CliResult<_>>()?;
    let op = DiffOp::new(coeffs);
    if let Some(r) = v.get("order").and_then(Value::as_i64) {
        if r != op.order() {
            return Err(CliError::Format(format!("operator order {} does not match its {} coefficients", r, op.order() + 1)));
        }
    }
    Ok(op)
}

pub fn prec_to_json(r: &PRec) -> Value {
    json!({
        "order": r.order(),
        "variable": "n",
        "coeffs": Value::Array(r.coeffs().iter().map(poly_to_json).collect()),
    })
}

pub fn prec_from_json(v: &Value) -> CliResult<PRec> {
    let coeffs: Vec<Poly> = array(field(v, "coeffs")?, "coefficient list")?.iter().map(poly_from_json).collect::<CliResult<_>>()?;
    Ok(PRec::new(coeffs)?)
}

pub fn cone_to_json(c: &ConeSpec) -> Value {
    json!({ "dim": c.dim, "generators": c.generators })
}

pub fn cone_from_json(v: &Value) -> CliResult<ConeSpec> {
    let dim = int_field(v, "dim")?;
    let gens: Vec<Vec<i64>> = serde_json::from_value(field(v, "generators")?.clone())?;
    if dim < 1 || gens.iter().any(|g| g.len() as i64 != dim) {
        return Err(CliError::Format("cone generators must have length dim".into()));
    }
    if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return Err(CliError::Format("zero cone generator".into()));
    }
    Ok(ConeSpec::new(dim as usize, gens))
}

pub fn hg_to_json(p: &HGParams) -> Value {
    json!({ "a": rat_to_json(&p.a), "b": rat_to_json(&p.b), "c": rat_to_json(&p.c) })
}

pub fn hg_from_json(v: &Value) -> CliResult<HGParams> {
    Ok(HGParams::new(rat_from_json(field(v, "a")?)?, rat_from_json(field(v, "b")?)?, rat_from_json(field(v, "c")?)?)?)
}

pub fn cfexpr_to_json(e: &CFExpr) -> Value {
    let mut m = Map::new();
    let kind = match e {
        CFExpr::Rational(f) => {
            m.insert("f".into(), ratfn_to_json(f));
            "Rational"
        }
        CFExpr::Pow(c, r) => {
            m.insert("base".into(), cfexpr_to_json(c));
            m.insert("exp".into(), rat_to_json(r));
            "Pow"
        }
        CFExpr::HG(p, w) => {
            m.insert("params".into(), hg_to_json(p));
            m.insert("w".into(), ratfn_to_json(w));
            "HG"
        }
        CFExpr::Int0t(c) => {
            m.insert("arg".into(), cfexpr_to_json(c));
            "Int0t"
        }
        CFExpr::Sum(v) => {
            m.insert("terms".into(), Value::Array(v.iter().map(cfexpr_to_json).collect()));
            "Sum"
        }
        CFExpr::Prod(v) => {
            m.insert("factors".into(), Value::Array(v.iter().map(cfexpr_to_json).collect()));
            "Prod"
        }
        CFExpr::Scale(a, c) => {
            m.insert("factor".into(), rat_to_json(a));
            m.insert("arg".into(), cfexpr_to_json(c));
            "Scale"
        }
        CFExpr::InvT(c) => {
            m.insert("arg".into(), cfexpr_to_json(c));
            "InvT"
        }
    };
    m.insert("kind".into(), Value::String(kind.into()));
    Value::Object(m)
}

pub fn cfexpr_from_json(v: &Value) -> CliResult<CFExpr> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("kind string", v))?;
    let child = |k: &str| -> CliResult<Box<CFExpr>> { Ok(Box::new(cfexpr_from_json(field(v, k)?)?)) };
    let list = |k: &str| -> CliResult<Vec<CFExpr>> { array(field(v, k)?, "expression list")?.iter().map(cfexpr_from_json).collect() };
    let e = match kind {
        "Rational" => CFExpr::Rational(ratfn_from_json(field(v, "f")?)?),
        "Pow" => CFExpr::Pow(child("base")?, rat_from_json(field(v, "exp")?)?),
        "HG" => CFExpr::HG(hg_from_json(field(v, "params")?)?, ratfn_from_json(field(v, "w")?)?),
        "Int0t" => CFExpr::Int0t(child("arg")?),
        "Sum" => CFExpr::Sum(list("terms")?),
        "Prod" => CFExpr::Prod(list("factors")?),
        "Scale" => CFExpr::Scale(rat_from_json(field(v, "factor")?)?, child("arg")?),
        "InvT" => CFExpr::InvT(child("arg")?),
        other => return Err(CliError::Format(format!("unknown expression kind {:?}", other))),
    };
    e.check()?;
    Ok(e)
}
