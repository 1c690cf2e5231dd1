use proptest::prelude::*;
use serde_json::Value;

use qwalk::cache::Cache;
use qwalk::json::*;
use qwalk_core::closedform::builtin_closed_forms;
use qwalk_core::cones::ConeSpec;
use qwalk_core::dfinite::{builtin_operators, to_recurrence, DiffOp};
use qwalk_core::{Poly, Rat, TSeries};

fn rat() -> impl Strategy<Value = Rat> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rat::frac(n, d))
}

fn tseries() -> impl Strategy<Value = TSeries> {
    (-5i64..5, prop::collection::vec(rat(), 0..30)).prop_map(|(lo, c)| {
        let order = lo + c.len() as i64 - 1;
        TSeries::new(lo, c, order)
    })
}

fn diffop() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(prop::collection::vec(rat(), 1..6), 1..5)
        .prop_map(|cs| DiffOp::new(cs.into_iter().map(Poly::from_rats).collect()))
}

proptest! {
    #[test]
    fn tseries_round_trip(s in tseries()) {
        let v = tseries_to_json(&s);
        let text = v.to_string();
        prop_assert_eq!(tseries_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), s);
    }

    #[test]
    fn diffop_round_trip(l in diffop()) {
        prop_assert_eq!(diffop_from_json(&diffop_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn cone_round_trip(dim in 1usize..=4, g in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..6)) {
        let g: Vec<Vec<i64>> = g.into_iter().map(|v| v[..dim].to_vec()).collect();
        prop_assume!(g.iter().all(|v| v.iter().any(|&x| x != 0)));
        let c = ConeSpec::new(dim, g);
        prop_assert_eq!(cone_from_json(&cone_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn cached_values_round_trip(s in tseries(), l in diffop()) {
        let d = tempfile::tempdir().unwrap();
        let c = Cache::at(d.path());
        let key = Cache::key(&["test", "x"]);
        let v = serde_json::json!({ "series": tseries_to_json(&s), "operator": diffop_to_json(&l) });
        c.put(&key, &v).unwrap();
        let back = c.get(&key).unwrap();
        prop_assert_eq!(tseries_from_json(&back["series"]).unwrap(), s);
        prop_assert_eq!(diffop_from_json(&back["operator"]).unwrap(), l);
    }
}

#[test]
fn builtin_formulas_and_recurrences_round_trip() {
    for cf in builtin_closed_forms() {
        let v = cfexpr_to_json(&cf.expr);
        let text = serde_json::to_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(cfexpr_from_json(&back).unwrap(), cf.expr, "{}", cf.label);
    }
    for (name, op) in builtin_operators() {
        let rec = to_recurrence(&op).unwrap();
        assert_eq!(prec_from_json(&prec_to_json(&rec)).unwrap(), rec, "{}", name);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    use serde_json::json;
    assert!(cfexpr_from_json(&json!({ "kind": "Nope" })).is_err());
    assert!(cfexpr_from_json(&json!({ "kind": "Pow", "exp": "1/2" })).is_err());
    assert!(cone_from_json(&json!({ "dim": 2, "generators": [[1, 0, 0]] })).is_err());
    assert!(cone_from_json(&json!({ "dim": 2, "generators": [[0, 0]] })).is_err());
    assert!(diffop_from_json(&json!({ "order": 3, "coeffs": [["1"], ["0", "1"]] })).is_err());
    assert!(ratfn_from_json(&json!({ "num": ["1"], "den": ["0"] })).is_err());
}
