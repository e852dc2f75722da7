//! End-to-end checks of the `orbiloop` binary: verb behavior, error-code
//! mapping, and byte-level determinism of the JSON reports.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn orbiloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbiloop"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn character_cochain() -> PathBuf {
    write_temp(
        "orbiloop-cli-test-chi.json",
        r#"{
  "schema": "cochain.v1",
  "group": "Z4",
  "degree": 1,
  "entries": [
    {"args": ["1"], "value": "1/4"},
    {"args": ["2"], "value": "1/2"},
    {"args": ["3"], "value": "3/4"}
  ]
}"#,
    )
}

#[test]
fn loop_reports_objects_morphisms_and_sectors() {
    let doc = stdout_json(&orbiloop(&["loop", "--builtin", "BZ3"]));
    assert_eq!(doc["groupoid"]["objects"].as_array().unwrap().len(), 3);
    assert_eq!(doc["groupoid"]["morphisms"].as_array().unwrap().len(), 9);
    assert_eq!(doc["meta"]["schema"], "loop-meta.v1");
    assert_eq!(doc["meta"]["sectors"].as_array().unwrap().len(), 3);
}

#[test]
fn loop_output_reingests_as_input() {
    let doc = stdout_json(&orbiloop(&["loop", "--builtin", "BZ4"]));
    let path = write_temp(
        "orbiloop-cli-test-loop.json",
        &serde_json::to_string(&doc["groupoid"]).unwrap(),
    );
    let again = stdout_json(&orbiloop(&["loop", "--input", path.to_str().unwrap()]));
    // L(BZ4) has 4 objects with automorphism group Z4 each, so its loop
    // groupoid has 16 objects; each keeps a transitive Z4 action.
    assert_eq!(again["groupoid"]["objects"].as_array().unwrap().len(), 16);
    assert_eq!(again["meta"]["sectors"].as_array().unwrap().len(), 16);
}

#[test]
fn inertia_check_confirms_the_equivalence() {
    for name in ["BS3", "Z2-swap", "pt2"] {
        let doc = stdout_json(&orbiloop(&["inertia-check", "--builtin", name]));
        assert_eq!(doc["equivalence"], true, "on `{name}`");
    }
}

#[test]
fn gcohom_tables_match_known_values() {
    let doc = stdout_json(&orbiloop(&[
        "gcohom", "--builtin", "Z6", "--coeff", "Z", "--nmax", "4",
    ]));
    let degrees = doc["degrees"].as_array().unwrap();
    let shape: Vec<(u64, Vec<u64>)> = degrees
        .iter()
        .map(|d| {
            let torsion =
                d["torsion"].as_array().unwrap().iter().map(|t| t.as_u64().unwrap()).collect();
            (d["rank"].as_u64().unwrap(), torsion)
        })
        .collect();
    assert_eq!(
        shape,
        vec![(1, vec![]), (0, vec![]), (0, vec![6]), (0, vec![]), (0, vec![6])],
    );

    let doc = stdout_json(&orbiloop(&[
        "gcohom", "--builtin", "S3", "--coeff", "QmodZ", "--nmax", "1",
    ]));
    assert_eq!(doc["degrees"][0]["divisible"], true);
    assert_eq!(doc["degrees"][1]["torsion"][0], 2); // |H^1| = |abelianized S3|
}

#[test]
fn transgress_bundle_returns_the_character() {
    let path = character_cochain();
    let doc = stdout_json(&orbiloop(&["transgress", "--bundle", "--input", path.to_str().unwrap()]));
    assert_eq!(doc["kind"], "bundle");
    let values: Vec<&str> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, vec!["0/1", "1/4", "1/2", "3/4"]);
}

#[test]
fn transgress_gerbe_flags_the_nondegenerate_sectors() {
    let doc = stdout_json(&orbiloop(&["transgress", "--gerbe", "--builtin", "v4-sym"]));
    let trivial: Vec<bool> = doc["sectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["trivial"].as_bool().unwrap())
        .collect();
    assert_eq!(trivial.iter().filter(|t| **t).count(), 1);
    assert_eq!(trivial.len(), 4);
}

#[test]
fn holonomy_theorem_example_holds() {
    let doc = stdout_json(&orbiloop(&[
        "holonomy-theorem", "--gamma", "4", "--phi", "1", "--N", "16",
    ]));
    assert_eq!(doc["verdict"], true);
    for entry in doc["entries"].as_array().unwrap() {
        assert_eq!(entry["transgressed"], entry["character"]);
        assert_eq!(entry["integrated"], entry["character"]);
    }
}

#[test]
fn deloc_splits_the_half_turn_sphere() {
    let doc = stdout_json(&orbiloop(&["deloc", "--builtin", "s2-rot"]));
    let total: Vec<u64> =
        doc["total"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(total, vec![3, 0, 1]);
    assert_eq!(doc["twisted"], false);
}

#[test]
fn deloc_accepts_a_builtin_twist() {
    let doc = stdout_json(&orbiloop(&["deloc", "--builtin", "point-V4", "--beta", "v4-sym"]));
    assert_eq!(doc["twisted"], true);
    let total: Vec<u64> =
        doc["total"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(total.iter().sum::<u64>(), 1);
}

#[test]
fn zcohom_twist_collapses_the_sphere() {
    let doc = stdout_json(&orbiloop(&[
        "zcohom", "--builtin", "s3", "--twist", "1", "--periodic",
    ]));
    let dims: Vec<u64> =
        doc["dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(dims[0], 1);
    assert!(dims[1..].iter().all(|d| *d == 0));
    assert_eq!(doc["periodic"]["even"], 0);
    assert_eq!(doc["periodic"]["odd"], 0);

    let doc = stdout_json(&orbiloop(&["zcohom", "--builtin", "s3", "--periodic"]));
    assert_eq!(doc["periodic"]["even"], 1);
    assert_eq!(doc["periodic"]["odd"], 1);
}

#[test]
fn zcohom_honors_mmax() {
    let doc = stdout_json(&orbiloop(&["zcohom", "--builtin", "point", "--mmax", "2"]));
    let dims: Vec<u64> =
        doc["dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 1]);
}

#[test]
fn selftest_passes_and_lists_every_check() {
    let out = orbiloop(&["selftest"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["failed"], 0);
    assert!(doc["passed"].as_u64().unwrap() >= 25);
}

#[test]
fn schema_violations_exit_2_with_a_pointer() {
    let path = write_temp(
        "orbiloop-cli-test-bad.json",
        r#"{"schema":"groupoid.v1","name":"x","objects":["a"],
            "morphisms":[{"id":"e","src":"a","dst":"b"}],
            "compose":[],"ident":{"a":"e"},"inv":{"e":"e"}}"#,
    );
    let out = orbiloop(&["loop", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/morphisms/0/dst"), "stderr: {err}");
}

#[test]
fn precondition_failures_exit_3_with_a_name() {
    let out = orbiloop(&["loop", "--builtin", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("builtin-name"));

    // Fiber order 6 is not a multiple of the order-4 character.
    let out = orbiloop(&["holonomy-theorem", "--gamma", "4", "--phi", "1", "--N", "6"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("twist-order"));
}

#[test]
fn every_verb_emits_byte_identical_json_across_runs() {
    let chi = character_cochain();
    let chi = chi.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["loop", "--builtin", "BS3"],
        vec!["inertia-check", "--builtin", "Z2-swap"],
        vec!["gcohom", "--builtin", "Q8", "--coeff", "Z", "--nmax", "3"],
        vec!["transgress", "--gerbe", "--builtin", "v4-sym"],
        vec!["transgress", "--bundle", "--input", chi],
        vec!["holonomy-theorem", "--gamma", "3", "--phi", "1", "--N", "9"],
        vec!["deloc", "--builtin", "point-Q8"],
        vec!["zcohom", "--builtin", "s2", "--periodic"],
        vec!["selftest"],
    ];
    for args in cases {
        let first = orbiloop(&args);
        let second = orbiloop(&args);
        assert!(first.status.success(), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "nondeterministic JSON for {args:?}");
        let _: Value = serde_json::from_slice(&first.stdout).expect("output should parse");
    }
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_orbiloop"))
            .args(["deloc", "--builtin", "s2-rot"])
            .env("ORBILOOP_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let many = run("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn text_format_is_also_deterministic() {
    let args = ["deloc", "--builtin", "torus7-z7", "--format", "text"];
    let first = orbiloop(&args);
    let second = orbiloop(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("total"), "text: {text}");
}
