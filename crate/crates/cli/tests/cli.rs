//! The `mockq` binary end to end: exit codes, configuration layering, schemas and
//! reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mockq(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mockq"));
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    // Keep the caller's environment from leaking into the layering tests.
    for k in ["MOCKQ_ORDER", "MOCKQ_PRECISION", "MOCKQ_TOLERANCE", "MOCKQ_JOBS", "MOCKQ_FORMAT", "MOCKQ_CONFIG", "MOCKQ_F3_VARIANT", "MOCKQ_RANK_SIGN"] {
        if !env.iter().any(|(e, _)| *e == k) {
            c.env_remove(k);
        }
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

fn schema(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn resolve<'a>(root: &'a Value, s: &'a Value) -> &'a Value {
    match s.get("$ref").and_then(Value::as_str) {
        Some(r) => root.pointer(r.trim_start_matches('#')).expect("reference resolves"),
        None => s,
    }
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

/// The keywords the published schemas use: type, enum, required, properties,
/// additionalProperties, items, minItems, maxItems and local references.
fn validate(root: &Value, s: &Value, v: &Value, path: &str, errs: &mut Vec<String>) {
    let s = resolve(root, s);
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => false,
        };
        if !ok {
            errs.push(format!("{path}: expected {t}, got {v}"));
            return;
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            errs.push(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Value::Object(map) = v {
        for r in s.get("required").and_then(Value::as_array).into_iter().flatten().filter_map(Value::as_str) {
            if !map.contains_key(r) {
                errs.push(format!("{path}: missing {r}"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => validate(root, ps, x, &format!("{path}.{k}"), errs),
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => errs.push(format!("{path}: unexpected {k}")),
                None => {}
            }
        }
    }
    if let Value::Array(items) = v {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < n {
                errs.push(format!("{path}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if items.len() as u64 > n {
                errs.push(format!("{path}: more than {n} items"));
            }
        }
        if let Some(is) = s.get("items") {
            for (i, x) in items.iter().enumerate() {
                validate(root, is, x, &format!("{path}[{i}]"), errs);
            }
        }
    }
}

fn assert_valid(schema_name: &str, v: &Value) {
    let root = schema(schema_name);
    let mut errs = Vec::new();
    validate(&root, &root, v, "$", &mut errs);
    assert!(errs.is_empty(), "{schema_name}: {errs:#?}");
}

fn strip_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn validator_rejects_malformed_documents() {
    let root = schema("report.schema.json");
    let mut errs = Vec::new();
    validate(&root, &root, &serde_json::json!({ "tool": 3, "extra": true }), "$", &mut errs);
    assert!(errs.iter().any(|e| e.contains("missing pass")));
    assert!(errs.iter().any(|e| e.contains("unexpected extra")));
    assert!(errs.iter().any(|e| e.contains("$.tool")));
}

#[test]
fn listing_names_identities_and_radial_statements() {
    let o = mockq(&["list", "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("list.schema.json", &v);
    let ids: Vec<&str> = v["identities"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"gm-mixed") && ids.contains(&"master") && ids.contains(&"hecke-f"));
    let gm = v["identities"].as_array().unwrap().iter().find(|e| e["id"] == "gm-mixed").unwrap();
    assert!(gm["citation"].as_str().unwrap().contains("Appell-Lerch"));
    let psi = v["radial"].as_array().unwrap().iter().find(|r| r["id"] == "PSI10").unwrap();
    assert_eq!(psi["ell_values"], serde_json::json!([1, 3, 5, 7, 9]));
    assert_eq!(v["radial"].as_array().unwrap().len(), 8);
    let text = stdout(&mockq(&["list"], &[]));
    assert!(text.contains("gm-mixed") && text.contains("PSI10"));
}

#[test]
fn passing_check_exits_zero_with_valid_json() {
    let o = mockq(&["check", "z-shift", "triple-product", "--order", "20", "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_valid("report.schema.json", &v);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["order"], 20);
}

#[test]
fn printed_bilateral_identity_fails_with_its_first_mismatch() {
    // The bilateral g2 statement is false as printed; the report says where.
    let o = mockq(&["check", "master", "--order", "40", "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let first = &v["identities"][0];
    assert_eq!(first["pass"], false);
    assert!(first["first_mismatch"].is_i64());
    assert!(first["lhs_coefficient"].is_string() && first["rhs_coefficient"].is_string());
}

#[test]
fn check_all_covers_every_entry_and_is_thread_independent() {
    let serial = mockq(&["check", "all", "--order", "30", "--format", "json"], &[]);
    let parallel = mockq(&["check", "all", "--order", "30", "--format", "json", "--jobs", "3"], &[]);
    let (a, b) = (json(&serial), json(&parallel));
    assert_valid("report.schema.json", &a);
    let listed = json(&mockq(&["list", "--format", "json"], &[]));
    for e in listed["identities"].as_array().unwrap() {
        assert!(a["identities"].as_array().unwrap().iter().any(|r| r["id"] == e["id"]), "{}", e["id"]);
    }
    assert_eq!(strip_timestamp(a), strip_timestamp(b));
    // Only the two false printed statements fail.
    assert_eq!(serial.status.code(), Some(1));
}

#[test]
fn reruns_are_identical_apart_from_the_timestamp() {
    let run = || strip_timestamp(json(&mockq(&["check", "RLN2a", "hecke-f", "--order", "25", "--format", "json"], &[])));
    assert_eq!(run(), run());
}

#[test]
fn explicit_specialization() {
    let o = mockq(&["check", "z-shift", "--at", "x=2,z=-q^2,M=2", "--order", "15"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("x = 2, p1 = -q^2, M = 2"));
    // x = q^2 with M = 2 puts a theta argument on the lattice.
    let o = mockq(&["check", "triple-product", "--at", "x=q^2,M=2", "--order", "15", "--format", "json"], &[]);
    assert_eq!(json(&o)["identities"][0]["pass"], true);
    let o = mockq(&["check", "z-shift", "--at", "x=q,z=q,M=1", "--order", "15", "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["identities"][0]["error"].as_str().unwrap().contains("not generic"));
    assert_eq!(mockq(&["check", "z-shift", "--at", "y=2"], &[]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["check", "z-shift", "--order", "5"],
        vec!["radial", "FOR", "--k", "1", "--precision", "32"],
        vec!["radial", "FOR", "--k", "1", "--tolerance", "0"],
        vec!["check", "no-such-identity"],
        vec!["frobnicate"],
        vec!["check", "--format", "yaml"],
        vec!["radial", "FOR", "--k", "2", "--root-index", "2"],
    ] {
        let o = mockq(&args, &[]);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn inadmissible_radial_order_echoes_the_condition() {
    let o = mockq(&["radial", "EX1", "--k", "2"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k odd"));
    let o = mockq(&["radial", "EX3", "--k", "0"], &[]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("4k"));
    let o = mockq(&["radial", "PSI10", "--k", "0", "--ell", "4"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn configuration_precedence() {
    let dir = std::env::temp_dir().join(format!("mockq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("run.conf");
    std::fs::write(&file, "# shared settings\norder = 12\nformat = json\n").unwrap();
    let f = file.to_str().unwrap();
    let order = |o: &Output| json(o)["config"]["order"].as_i64().unwrap();
    // File over defaults.
    assert_eq!(order(&mockq(&["check", "z-shift", "--config", f], &[])), 12);
    // Environment over file, flag over environment.
    assert_eq!(order(&mockq(&["check", "z-shift", "--config", f], &[("MOCKQ_ORDER", "14")])), 14);
    assert_eq!(order(&mockq(&["check", "z-shift", "--config", f, "--order", "16"], &[("MOCKQ_ORDER", "14")])), 16);
    // The config path itself may come from the environment.
    assert_eq!(order(&mockq(&["check", "z-shift"], &[("MOCKQ_CONFIG", f)])), 12);
    assert_eq!(mockq(&["check", "z-shift"], &[("MOCKQ_ORDER", "3")]).status.code(), Some(2));
    std::fs::write(&file, "order = twelve\n").unwrap();
    assert_eq!(mockq(&["check", "z-shift", "--config", f], &[]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn radial_run_records_its_settings() {
    let o = mockq(&["radial", "W3", "--k", "1", "--format", "json", "--f3-variant", "paper"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_valid("report.schema.json", &v);
    let r = &v["radial"][0];
    assert_eq!(r["root_order"], 3);
    assert_eq!(r["precision_bits"], 256);
    assert_eq!(r["samples"].as_array().unwrap().len(), 11);
    assert_eq!(v["config"]["f3_variant"], "paper");
    // The variant only concerns the l = 3 tenth-order branch.
    assert!(r["f3_variant"].is_null());
}

#[test]
fn tenth_order_branch_with_field_division() {
    let o = mockq(&["radial", "PSI10", "--k", "0", "--ell", "5", "--format", "json"], &[]);
    let v = json(&o);
    let r = &v["radial"][0];
    assert_eq!(r["root_order"], 5);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn first_even_order_limit() {
    let o = mockq(&["radial", "FOR", "--k", "1"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass FOR k=1"));
}
