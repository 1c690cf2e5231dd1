use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

use qwalk::data::{load_bundle, BUNDLED_MODELS};
use qwalk_core::walks::{dp_series, SpecPoint};

fn qwalk(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).env("QWALK_CACHE", cache).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({}): {}", e, String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn enum_examples() {
    let d = tempfile::tempdir().unwrap();
    let o = qwalk(d.path(), &["enum", "--model", "4", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["totals"][8], json!("1564080"));
    let o = qwalk(d.path(), &["enum", "--steps", "1,1;-1,0;0,-1", "--n", "6"]);
    assert_eq!(stdout_json(&o)["totals"][6], json!("125"));
    let o = qwalk(d.path(), &["enum", "--model", "4", "--n", "0"]);
    assert_eq!(stdout_json(&o)["totals"], json!(["1"]));
}

#[test]
fn usage_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["enum", "--n", "3"][..],
        &["enum", "--model", "99", "--n", "3"],
        &["enum", "--steps", "2,0", "--n", "3"],
        &["frobnicate"],
        &["verify", "nosuchsuite"],
        &["integral", "--case", "3"],
        &["asym", "--model", "1", "--spec", "22"],
    ] {
        let o = qwalk(d.path(), args);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn failed_check_exits_1() {
    let d = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(BUNDLED_MODELS).unwrap();
    let m = v["models"].as_array_mut().unwrap().iter_mut().find(|m| m["id"] == json!(1)).unwrap();
    m["asym"]["11"]["kappa_expr"] = json!(["5/pi"]);
    let file = d.path().join("models.json");
    std::fs::write(&file, v.to_string()).unwrap();
    let o = qwalk(d.path(), &["asym", "--models", file.to_str().unwrap(), "--model", "1", "--spec", "11", "--nmax", "600", "--levels", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let rep = stdout_json(&o);
    assert!(rep.as_array().unwrap().iter().all(|r| r["pass"] == json!(false)));
    // the unmodified file passes
    let o = qwalk(d.path(), &["asym", "--model", "1", "--spec", "11", "--nmax", "600", "--levels", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn jobs_do_not_change_results() {
    let d = tempfile::tempdir().unwrap();
    let e = tempfile::tempdir().unwrap();
    for args in [&["verify", "residue", "--order", "8"][..], &["asym", "--model", "5", "--nmax", "500", "--levels", "6"]] {
        let one = qwalk(d.path(), &[args, &["--jobs", "1"]].concat());
        let four = qwalk(e.path(), &[args, &["--jobs", "4"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{:?}", args);
    }
}

#[test]
fn asym_report_fields() {
    let d = tempfile::tempdir().unwrap();
    let o = qwalk(d.path(), &["asym", "--model", "1", "--spec", "00", "--nmax", "800", "--levels", "6"]);
    assert_eq!(o.status.code(), Some(0));
    for row in stdout_json(&o).as_array().unwrap() {
        for k in ["model", "spec", "class", "rho", "gamma", "kappa_expected", "kappa_measured", "relerr", "pass"] {
            assert!(row.get(k).is_some(), "missing {}", k);
        }
        let odd = row["class"].as_u64().unwrap() % 2 == 1;
        assert_eq!(row["kappa_expected"], json!(if odd { "0" } else { "32/pi" }));
        if odd {
            assert_eq!(row["kappa_measured"], json!(0.0));
        }
    }
}

#[test]
fn cache_survives_corruption() {
    let d = tempfile::tempdir().unwrap();
    let args = ["enum", "--model", "7", "--n", "20"];
    let first = qwalk(d.path(), &args);
    let entries: Vec<_> = std::fs::read_dir(d.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!entries.is_empty());
    for p in &entries {
        std::fs::write(p, "{\"key\": \"garbage").unwrap();
    }
    let second = qwalk(d.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    // entries were rewritten whole
    for p in std::fs::read_dir(d.path()).unwrap().map(|e| e.unwrap().path()) {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert!(v["checksum"].is_string());
    }
    let third = qwalk(d.path(), &args);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn series_methods_agree() {
    let d = tempfile::tempdir().unwrap();
    for model in ["3", "17"] {
        let get = |m: &str| stdout_json(&qwalk(d.path(), &["series", "--model", model, "--spec", "10", "--n", "12", "--method", m]))["series"].clone();
        let dp = get("dp");
        assert_eq!(get("residue"), dp);
        assert_eq!(get("recurrence"), dp);
    }
}

#[test]
fn integral_reports_conjectural_status() {
    let d = tempfile::tempdir().unwrap();
    let o = qwalk(d.path(), &["integral", "--case", "7", "--prec", "80"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert!(v["value"].as_str().unwrap().starts_with("-2.0000000000"));
    assert!(v["status"].as_str().unwrap().contains("conjectural"));
}

#[test]
fn expected_zero_classes_vanish() {
    let b = load_bundle(None).unwrap();
    let n = 120;
    let mut checked = 0;
    for m in &b.models {
        let pts: Vec<_> = SpecPoint::ALL.iter().map(|p| p.rats()).collect();
        let ser = dp_series(&m.stepset, &pts, n);
        for (sp, s) in SpecPoint::ALL.iter().zip(&ser) {
            let a = m.asym_for(*sp).unwrap();
            let p = a.period.max(1) as usize;
            for (r, k) in a.kappa.iter().enumerate() {
                if k.is_none() {
                    checked += 1;
                    for i in (r..=n).step_by(p) {
                        assert!(s.coeff(i as i64).is_zero(), "model {} at {}: a_{} ≠ 0", m.id, sp, i);
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}
