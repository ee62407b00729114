use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use cauchyden::fincat::SizeCap;
use cauchyden::json::{CategoryJson, FunctorJson, QuantCategoryJson, QuantFunctorJson};
use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchyden"))
        .args(args)
        .env_remove("CAUCHYDEN_TOLERANCE")
        .env_remove("CAUCHYDEN_FORMAT")
        .env_remove("CAUCHYDEN_CAP")
        .output()
        .expect("binary runs")
}

fn run_example(args: &[&str], files: &[&str]) -> (i32, Value) {
    let paths: Vec<String> = files.iter().map(|f| example(f).display().to_string()).collect();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(paths.iter().map(String::as_str));
    let out = run(&all);
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn check(kind: &str, file: &str) -> (i32, Value) {
    run_example(&["check", kind], &[file])
}

#[test]
fn cauchy_density_of_bundled_functors() {
    let expected = [
        ("z4-to-z2.json", 0),
        ("z2-into-z4.json", 1),
        ("discrete-into-arrow.json", 1),
        ("discrete-collapse.json", 1),
        ("chain-collapse.json", 0),
        ("two-mutual.json", 0),
        ("two-bottom-inclusion.json", 1),
        ("metric-twin.json", 0),
        ("metric-near-twin.json", 0),
        ("metric-gap.json", 1),
        ("metric-far.json", 1),
        ("lukasiewicz-gap.json", 1),
        ("lukasiewicz-close.json", 0),
    ];
    for (file, code) in expected {
        let (got, json) = check("cauchy-dense", file);
        assert_eq!(got, code, "{file}");
        assert_eq!(json["holds"], Value::Bool(code == 0), "{file}");
        assert_eq!(json["witness"].is_null(), code == 0, "{file}");
    }
}

#[test]
fn discrete_into_arrow_prints_a_witness_pair() {
    let (_, json) = check("cauchy-dense", "discrete-into-arrow.json");
    let w = &json["witness"];
    assert_eq!(w["source"], "bot");
    assert_eq!(w["target"], "top");
    assert_eq!(w["failure"], "not-injective");
}

#[test]
fn monoid_input_reports_the_tensor_congruence() {
    let (_, json) = check("cauchy-dense", "z4-to-z2.json");
    assert_eq!(json["tensor_congruence"], true);
    let (_, json) = check("cauchy-dense", "z2-into-z4.json");
    assert_eq!(json["tensor_congruence"], false);
}

#[test]
fn tolerance_flag_and_environment() {
    let (code, _) = run_example(&["check", "cauchy-dense", "--tolerance", "0"], &["metric-near-twin.json"]);
    assert_eq!(code, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_cauchyden"))
        .args(["check", "cauchy-dense"])
        .arg(example("metric-near-twin.json"))
        .env("CAUCHYDEN_TOLERANCE", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let (code, _) = run_example(&["check", "cauchy-dense", "--tolerance", "-1"], &["metric-near-twin.json"]);
    assert_eq!(code, 2);
}

#[test]
fn other_checks() {
    let table = [
        ("fully-faithful", "z4-to-z2.json", 1),
        ("fully-faithful", "two-mutual.json", 0),
        ("fully-faithful", "metric-gap.json", 0),
        ("split-full", "z4-to-z2.json", 0),
        ("split-full", "discrete-collapse.json", 1),
        ("dense-lan", "z4-to-z2.json", 0),
        ("dense-lan", "discrete-into-arrow.json", 1),
        ("lax-epi", "z4-to-z2.json", 0),
        ("lax-epi", "z2-into-z4.json", 1),
        ("lax-epi", "discrete-collapse.json", 1),
    ];
    for (kind, file, code) in table {
        assert_eq!(check(kind, file).0, code, "{kind} {file}");
    }
}

#[test]
fn collapse_exercises_the_flagged_shortcut_path() {
    let (code, json) = check("split-full", "discrete-collapse.json");
    assert_eq!(code, 1);
    assert_eq!(json["shortcut"]["diagonal_surjective"], true);
    assert_eq!(json["shortcut"]["cauchy_dense"], false);
    assert_eq!(json["shortcut"]["flag"], "hypothesis-not-met");
    let (_, json) = check("split-full", "z4-to-z2.json");
    assert_eq!(json["shortcut"]["flag"], Value::Null);
}

#[test]
fn lax_epi_against_a_supplied_target() {
    let target = example("z2.json");
    let (code, _) = run_example(
        &["check", "lax-epi", "--target", target.to_str().unwrap()],
        &["z4-to-z2.json"],
    );
    assert_eq!(code, 0);
}

#[test]
fn malformed_input_is_an_error_with_a_line() {
    let dir = std::env::temp_dir().join(format!("cauchyden-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("syntax.json", "{\n  \"objects\": [\"a\",\n}\n", ":3"),
        ("unknown-key.json", "{\n  \"objects\": [],\n  \"colour\": 1\n}\n", ":3"),
        (
            "dangling.json",
            "{\n  \"objects\": [\"a\"],\n  \"morphisms\": [{\"id\": \"1_a\", \"src\": \"a\", \"dst\": \"b\"}],\n  \"identity\": {\"a\": \"1_a\"}\n}\n",
            ":3",
        ),
    ];
    for (name, text, line) in cases {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        let out = run(&["complete", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(&format!("{name}{line}")), "{name}: {err}");
    }
    let out = run(&["check", "cauchy-dense", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn complete_idempotent_monoid_gives_two_objects() {
    let (code, json) = run_example(&["complete"], &["idem-monoid.json"]);
    assert_eq!(code, 0);
    assert_eq!(json["summary"]["objects"], 2);
    assert_eq!(json["input_cauchy_complete"], false);
    // the emitted structures re-parse and re-validate
    let env: CategoryJson = serde_json::from_value(json["envelope"].clone()).unwrap();
    let c = env.to_category().unwrap();
    c.validate(SizeCap::VALIDATION).unwrap();
    let emb: FunctorJson = serde_json::from_value(json["embedding"].clone()).unwrap();
    let (a, b) = emb.to_parts().unwrap();
    assert_eq!(b, c);
    emb.to_functor(Arc::new(a), Arc::new(b)).unwrap().validate().unwrap();
    let bundled: CategoryJson =
        serde_json::from_str(&std::fs::read_to_string(example("idem-monoid-karoubi.json")).unwrap()).unwrap();
    assert_eq!(bundled, env);
}

#[test]
fn complete_group_is_isomorphic() {
    let (code, json) = run_example(&["complete"], &["z3.json"]);
    assert_eq!(code, 0);
    assert_eq!(json["summary"]["objects"], 1);
    assert_eq!(json["summary"]["morphisms"], 3);
    assert_eq!(json["input_cauchy_complete"], true);
}

#[test]
fn complete_over_two() {
    let (code, json) = run_example(&["complete"], &["two-split-pair.json"]);
    assert_eq!(code, 0);
    let c: QuantCategoryJson = serde_json::from_value(json["completion"].clone()).unwrap();
    assert_eq!(c.base, cauchyden::json::BaseJson::Named("two".into()));
    assert_eq!(c.objects.len(), 1);
    let f: QuantFunctorJson = serde_json::from_value(json["embedding"].clone()).unwrap();
    f.to_functor(0.0).unwrap();
}

#[test]
fn morita_verdicts() {
    let (code, json) = run_example(&["morita"], &["idem-monoid.json", "idem-monoid-karoubi.json"]);
    assert_eq!(code, 0);
    assert_eq!(json["verified"], true);
    for leg in ["left", "equivalence", "right"] {
        let f: FunctorJson = serde_json::from_value(json["zigzag"][leg].clone()).unwrap();
        let (a, b) = f.to_parts().unwrap();
        f.to_functor(Arc::new(a), Arc::new(b)).unwrap();
    }
    let (code, json) = run_example(&["morita"], &["z2.json", "z3.json"]);
    assert_eq!(code, 1);
    assert_eq!(json["morita_equivalent"], false);
}

#[test]
fn decompose_and_explore() {
    let (code, json) = run_example(&["decompose"], &["z4-to-z2.json"]);
    assert_eq!(code, 0);
    assert_eq!(json["reassembles"], true);
    assert_eq!(json["groupoid"]["pieces"].as_array().unwrap().len(), 1);
    assert_eq!(run_example(&["decompose"], &["discrete-collapse.json"]).0, 1);
    let (code, json) = run_example(&["explore"], &["z2-into-z4.json"]);
    assert_eq!(code, 1);
    assert_eq!(json["refuted"], true);
    let (code, json) = run_example(&["explore", "--cap", "5"], &["z4-to-z2.json"]);
    assert_eq!(code, 0);
    assert_eq!(json["cap"], 5);
    assert_eq!(run_example(&["explore", "--cap", "9"], &["z4-to-z2.json"]).0, 2);
}

#[test]
fn manifests() {
    let out = run(&["--manifest", example("check-z4-to-z2.manifest.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "cauchy-dense: true\n");
    let dir = std::env::temp_dir().join(format!("cauchyden-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("m.json");
    std::fs::write(&p, r#"{"command": "check", "kind": "cauchy-dense", "inputs": [], "extra": 1}"#).unwrap();
    assert_eq!(run(&["--manifest", p.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&p, r#"{"command": "props", "options": {"samples": 1, "colour": 2}}"#).unwrap();
    assert_eq!(run(&["--manifest", p.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn props_output_is_reproducible() {
    let args = ["props", "--seed", "42", "--samples", "10", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let out = run(&["props", "--samples", "3", "--property", "no.such"]);
    assert_eq!(out.status.code(), Some(2));
}
