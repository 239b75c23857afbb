use polymass::analysis::Analysis;
use polymass::report::{self, SCHEMA, SCHEMA_REPORTS};
use polymass::verify;
use serde_json::Value;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_polymass");

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn validator(report: &str) -> jsonschema::Validator {
    let mut schema: Value = serde_json::from_str(SCHEMA).expect("schema is JSON");
    schema["$ref"] = Value::from(format!("#/$defs/{report}"));
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn check(report: &str, doc: &Value) {
    let v = validator(report);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{report}: {errors:#?}");
}

fn cli(args: &[&str]) -> Value {
    let out = Command::new(BIN).args(args).arg("--json").output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn every_named_report_is_defined() {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    for name in SCHEMA_REPORTS {
        assert!(schema["$defs"].get(name).is_some(), "{name}");
    }
    let printed = Command::new(BIN).arg("schema").output().unwrap();
    assert_eq!(printed.stdout, SCHEMA.as_bytes());
}

#[test]
fn cli_reports_validate() {
    for fixture in ["y12.json", "hexagon.json", "cube.json"] {
        let path = data(fixture);
        check("analysis", &cli(&["analyze", &path]));
        check("mass_linear", &cli(&["mass-linear", &path]));
        check("classify", &cli(&["classify", &path]));
        check("toric", &cli(&["toric", &path]));
    }
    let y = data("y12.json");
    check("mass_linear", &cli(&["mass-linear", &y, "--h", "1,0,0"]));
    check("mass_linear", &cli(&["mass-linear", &y, "--h", "0,1,5"]));
    check("classify", &cli(&["classify", &y, "--h", "1,0,0"]));
    check("toric", &cli(&["toric", &y, "--h", "1,2,2"]));
    check("toric", &cli(&["toric", &y, "--h", "1,0,0"]));
    check("polytope", &cli(&["construct", "y", "--a", "1,2"]));
    check("corpus", &cli(&["corpus", "--dim", "3", "--count", "4"]));
    check("verify", &cli(&["verify", "lem4.15", "--count", "4"]));
    check("verify", &cli(&["verify", "y-family-constraints", "--grid", "1"]));
    check("verify", &cli(&["verify", "all", "--count", "2", "--grid", "1"]));
}

#[test]
fn corpus_reports_validate() {
    let analysis = validator("analysis");
    let classify = validator("classify");
    for preset in ["dim2_default", "dim2_smooth", "dim3_default", "dim3_smooth", "dim4_smooth"] {
        for (k, p) in verify::corpus_from_preset(preset, Some(12), 3).unwrap().into_iter().enumerate() {
            let a = Analysis::new(p).unwrap();
            let doc = report::analysis_report(&a).unwrap();
            assert!(analysis.is_valid(&doc), "{preset} item {k}: {}", analysis.iter_errors(&doc).map(|e| e.to_string()).collect::<Vec<_>>().join("; "));
            if let Ok(verdicts) = report::classify(&a, None) {
                let doc = report::classify_report(&a, &verdicts);
                assert!(classify.is_valid(&doc), "{preset} item {k}: {}", classify.iter_errors(&doc).map(|e| e.to_string()).collect::<Vec<_>>().join("; "));
            }
        }
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator("analysis");
    let mut doc = cli(&["analyze", &data("y12.json")]);
    assert!(v.is_valid(&doc));
    doc["dim_mass_linear"] = Value::from(-1);
    assert!(!v.is_valid(&doc));
    let mut doc = cli(&["analyze", &data("y12.json")]);
    doc["polytope"]["support"][0] = serde_json::json!([1, 2, 3]);
    assert!(!v.is_valid(&doc));
}
