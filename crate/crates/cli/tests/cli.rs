use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn genrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genrank"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn assert_schema(schema: &str, value: &Value) {
    let path = root().join("schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("valid schema");
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", path.display());
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn rank_from_profile_file() {
    let out = genrank(&["rank", "--profile", "samples/two_sphere_m2.json"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    // ceil((2 + 1) / 2)
    assert_eq!(v["gr"], 2);
    assert_eq!(v["dominating_d"], 2);
    assert_schema("rank_result.schema.json", &v);
}

#[test]
fn rank_inline_matches_file() {
    let file = json_of(&genrank(&["rank", "--profile", "samples/torus_mixed.json"]));
    let inline = json_of(&genrank(&[
        "rank", "--dim", "1=3", "--square", "6", "--dim", "2=5", "--dim", "4=13",
    ]));
    assert_eq!(file, inline);
    assert_eq!(inline["gr"], 6);
}

#[test]
fn rank_infinite_locdim() {
    let v = json_of(&genrank(&["rank", "--dim", "3=inf"]));
    assert_eq!(v["gr"], "inf");
}

#[test]
fn strata_table_default() {
    let out = genrank(&["strata", "--d", "3", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(rows.len(), 5);
    assert!(text.contains("max non-trivial stratum dimension: 14"));
}

#[test]
fn strata_json_and_csv() {
    let v = json_of(&genrank(&["strata", "--d", "2", "--n", "2", "--format", "json"]));
    assert_schema("strata_rows.schema.json", &v);
    assert_eq!(v.as_array().unwrap().len(), 3);

    let out = genrank(&["strata", "--d", "2", "--n", "2", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(r.headers().unwrap().len(), 6);
    assert_eq!(r.records().count(), 3);
}

#[test]
fn check_identical_fibers_is_negative() {
    let out = genrank(&["check", "samples/two_fibers_identical.json"]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["generates"], false);
    assert_eq!(v["conflict_pairs"], serde_json::json!([[0, 1]]));
    assert_schema("generation_report.schema.json", &v);
}

#[test]
fn check_distinct_fibers_with_oracle() {
    let out = genrank(&["check", "samples/two_fibers_distinct.json", "--oracle"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["generates"], true);
    assert_eq!(v["oracle_generates"], true);
}

#[test]
fn check_reducible_fiber() {
    for extra in [&[][..], &["--unital"][..]] {
        let mut args = vec!["check", "samples/reducible_m3.json", "--oracle"];
        args.extend_from_slice(extra);
        let out = genrank(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert_eq!(json_of(&out)["fiber_ok"], serde_json::json!([false]));
    }
}

#[test]
fn missing_file_is_usage_error() {
    let out = genrank(&["check", "samples/does_not_exist.json"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("does_not_exist.json"), "{err}");
}

#[test]
fn malformed_input_is_usage_error() {
    // a tuple file is not a check document
    let out = genrank(&["check", "samples/pair_m2.json"]);
    assert_eq!(code(&out), 2);
    let out = genrank(&["rank", "--profile", "samples/pair_m2.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&genrank(&["strata", "--d", "three", "--n", "1"])), 2);
    assert_eq!(code(&genrank(&["rank"])), 2);
    assert_eq!(code(&genrank(&["rank", "--dim", "2"])), 2);
    assert_eq!(code(&genrank(&["mc", "frontier", "--d", "2"])), 2);
    assert_eq!(code(&genrank(&["mc", "finite-gr"])), 2);
    assert_eq!(code(&genrank(&["nonsense"])), 2);
}

#[test]
fn mc_reports_are_deterministic_and_schema_valid() {
    let runs = [
        vec!["mc", "genericity", "--d", "3", "--trials", "50"],
        vec!["mc", "repair", "--d", "2", "--trials", "9"],
        vec!["mc", "frontier", "--d", "3", "--orbit-type", "[(2,1),(1,1)]", "--trials", "30", "--epsilon", "1e-6"],
        vec!["mc", "finite-gr", "--fibers", "2,1", "--trials", "8"],
    ];
    for args in runs {
        let a = genrank(&args);
        let b = genrank(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v = json_of(&a);
        assert_schema("experiment_report.schema.json", &v);
        assert_eq!(v["config"]["seed"], genrank::DEFAULT_SEED);
    }
}

#[test]
fn mc_csv_export_and_seed_override() {
    let dir = std::env::temp_dir().join(format!("genrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trials.csv");
    let out = genrank(&["mc", "repair", "--d", "3", "--trials", "6", "--seed", "7", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["config"]["seed"], 7);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("trial,success,detail\n"));
    assert_eq!(text.lines().count(), 7);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn shipped_samples_match_schemas() {
    let load = |f: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(root().join("samples").join(f)).unwrap()).unwrap()
    };
    assert_schema("profile.schema.json", &load("two_sphere_m2.json"));
    assert_schema("profile.schema.json", &load("torus_mixed.json"));
    assert_schema("matrix_tuple.schema.json", &load("pair_m2.json"));
    for f in ["two_fibers_identical.json", "two_fibers_distinct.json", "reducible_m3.json"] {
        assert_schema("check_input.schema.json", &load(f));
    }
}

#[test]
fn survey_rows() {
    let out = genrank(&["mc", "survey", "--d", "2", "--n", "1"]);
    assert_eq!(code(&out), 0);
    assert_schema("strata_rows.schema.json", &json_of(&out));
}
