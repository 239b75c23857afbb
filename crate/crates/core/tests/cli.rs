use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_polymass");

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN).args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_y_family() {
    let r = json(&run(&["analyze", &data("y12.json"), "--json"]));
    assert_eq!(r["dim_mass_linear"], 2);
    assert_eq!(r["essential_dim"], 1);
    assert_eq!(r["inessential"]["dim"], 1);
    assert_eq!(r["classes"]["classes"], serde_json::json!([[1], [2], [3], [4, 5]]));
    assert_eq!(r["structure"]["verdict"], "Y_family");
    assert_eq!(r["face_counts"]["f_vector"], serde_json::json!([6, 9, 5]));
}

#[test]
fn analyze_hexagon_and_cube() {
    let hex = json(&run(&["analyze", &data("hexagon.json"), "--json"]));
    assert_eq!(hex["dim_mass_linear"], 0);
    assert_eq!(hex["toric"]["flags"]["torus_injects"], true);
    let cube = json(&run(&["analyze", &data("cube.json"), "--json"]));
    assert_eq!(cube["structure"]["verdict"], "product");
    assert_eq!(cube["structure"]["product"]["factor_dims"], serde_json::json!([1, 1, 1]));
    assert_eq!(cube["dim_mass_linear"], 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [vec!["analyze", "y12.json", "--json"], vec!["analyze", "y12.json"], vec!["corpus", "--dim", "3", "--count", "5", "--seed", "4"]] {
        let args: Vec<String> = args.iter().map(|a| if a.ends_with(".json") { data(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze", &data("truncated.json")]).status.code(), Some(2));
    assert_eq!(run(&["analyze", &data("missing.json")]).status.code(), Some(2));
    let out = run(&["analyze", &data("unbounded.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["toric", &data("half_square.json")]).status.code(), Some(3));
    assert_eq!(run(&["verify", "prop9.9"]).status.code(), Some(3));
    assert_eq!(run(&["mass-linear", &data("y12.json"), "--h", "1,x,0"]).status.code(), Some(2));
}

#[test]
fn verify_reads_a_corpus_file() {
    let dir = std::env::temp_dir().join(format!("polymass-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corpus.json");
    let hex = std::fs::read_to_string(data("hexagon.json")).unwrap();
    std::fs::write(&path, format!("[{hex}]")).unwrap();
    let out = run(&["verify", "thm1.8", "--corpus", path.to_str().unwrap(), "--json"]);
    let r = json(&out);
    assert_eq!(r["property"], "rigid-without-pervasive-or-flat");
    assert_eq!(r["applicable"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_suites_pass() {
    let r = json(&run(&["verify", "lem4.15", "--corpus", "dim3_smooth", "--count", "20", "--json"]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["alias"], "lem4.15");
    let r = json(&run(&["verify", "prop4.7", "--grid", "2", "--json"]));
    assert_eq!(r["checked"], 25);
    assert_eq!(r["passed"], true);
    let r = json(&run(&["verify", "all-mass-linear-criteria", "--corpus", "dim4_default", "--count", "10", "--json"]));
    assert_eq!(r["passed"], true);
    let text = run(&["verify", "thm1.10", "--corpus", "dim2_default", "--count", "5"]);
    let line = String::from_utf8(text.stdout).unwrap();
    assert!(line.starts_with("PASS all-mass-linear-criteria"), "{line}");
}

#[test]
fn construct_pipes_into_analyze() {
    let y = run(&["construct", "y", "--a", "1,1"]);
    assert!(y.status.success());
    let r = json(&run_stdin(&["analyze", "-", "--json"], &String::from_utf8(y.stdout).unwrap()));
    assert_eq!(r["essential_dim"], 0);
    assert_eq!(r["toric"]["pi1_rank"], 1);

    let simplex = json(&run(&["construct", "simplex", "3"]));
    assert_eq!(simplex["dim"], 3);
    let prod = json(&run(&["construct", "product", "--dims", "1,2"]));
    assert_eq!(prod["conormals"].as_array().unwrap().len(), 5);
    let exp = json(&run(&["construct", "expansion", &data("hexagon.json"), "--facet", "1"]));
    assert_eq!(exp["dim"], 3);
    let blow = json(&run(&["construct", "blowup", &data("cube.json"), "--face", "1,3,5"]));
    assert_eq!(blow["conormals"].as_array().unwrap().len(), 7);
    let interval = run(&["construct", "simplex", "1"]);
    let dir = std::env::temp_dir().join(format!("polymass-bundle-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fiber = dir.join("interval.json");
    std::fs::write(&fiber, interval.stdout).unwrap();
    let bundle = json(&run(&["construct", "bundle", fiber.to_str().unwrap(), "--k", "2", "--twists", "0;0;1"]));
    assert_eq!(bundle["dim"], 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mass_linear_and_classify() {
    let r = json(&run(&["mass-linear", &data("y12.json"), "--h", "-1,-2,-2", "--json"]));
    assert_eq!(r["dim_mass_linear"], 2);
    assert_eq!(r["query"]["essential"], false);
    let r = json(&run(&["mass-linear", &data("y12.json"), "--h", "1,0,0", "--json"]));
    assert_eq!(r["query"]["essential"], true);
    let r = json(&run(&["classify", &data("y12.json"), "--h", "1,0,0", "--json"]));
    assert_eq!(r["verdicts"][0]["verdict"], "Y_family");
    assert_eq!(r["verdicts"][0]["y_normalization"]["invariant"], serde_json::json!([-2, 1]));
    assert_eq!(run(&["classify", &data("y12.json"), "--h", "0,0,0"]).status.code(), Some(3));
}

#[test]
fn text_mode_names_properties_without_citations() {
    let out = String::from_utf8(run(&["verify", "prop2.11", "--count", "5"]).stdout).unwrap();
    assert!(out.contains("asymmetric-pervasive-or-flat"));
    assert!(!out.to_lowercase().contains("proposition"));
}
