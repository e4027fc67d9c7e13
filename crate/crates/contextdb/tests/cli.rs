//! End-to-end tests of the command-line binary: realistic invocations,
//! stdin piping, report shape, and the exit-code contract (0 = analysis
//! completed, 2 = malformed input or usage, 3 = enumeration cap).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use contextdb::gluing::{classify, ContextualityClass};
use contextdb::interchange::parse_model;
use contextdb::models::bell_model;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contextdb"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("piped stdin")
        .write_all(stdin.unwrap_or("").as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary terminates")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "expected success, got {:?}; stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).expect("tmpdir exists");
    dir.join(name)
}

#[test]
fn generate_emits_parseable_models_and_schemas() {
    for spec in [["bell"].as_slice(), &["hardy"], &["ghz", "--n", "4"]] {
        let mut args = vec!["generate"];
        args.extend_from_slice(spec);
        let output = run(&args, None);
        assert!(output.status.success());
        let text = String::from_utf8(output.stdout).expect("utf-8");
        parse_model(&text).expect("generated model parses back");
    }
    let output = run(&["generate", "bell"], None);
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(parse_model(&text).unwrap(), bell_model());
}

#[test]
fn classify_reads_stdin_and_reports() {
    let model = String::from_utf8(run(&["generate", "bell"], None).stdout).unwrap();
    let output = run(&["classify", "-"], Some(&model));
    let report = stdout_json(&output);

    assert_eq!(report["command"], "classify");
    assert_eq!(report["input"]["path"], "-");
    let sha = report["input"]["sha256"].as_str().expect("hex digest");
    assert_eq!(sha.len(), 64);
    assert!(sha.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(report["elapsed_ms"].is_number());

    let result = &report["result"];
    assert_eq!(result["class"], "probabilistically-contextual");
    assert_eq!(result["lhv"]["feasible"], false);
    assert!(result["lhv"]["certificate"].is_array());
    assert_eq!(result["support_glue"]["exists"], true);

    // The report's verdict matches the library's.
    let in_memory = classify(&parse_model(&model).unwrap()).unwrap();
    assert_eq!(in_memory.class, ContextualityClass::ProbabilisticallyContextual);
}

#[test]
fn check_reports_violations_from_a_file() {
    let path = scratch("bell.json");
    let model = run(&["generate", "bell"], None).stdout;
    std::fs::write(&path, &model).unwrap();

    let output = run(&["check", path.to_str().unwrap()], None);
    let report = stdout_json(&output);
    assert_eq!(report["command"], "check");
    assert_eq!(report["result"]["compatible"], true);
    assert_eq!(report["result"]["violations"].as_array().unwrap().len(), 0);
    assert_eq!(
        report["input"]["path"],
        Value::String(path.to_str().unwrap().to_string())
    );
}

#[test]
fn glue_dispatches_on_semiring() {
    // Boolean: universal-relation verdict with the join witness.
    let hardy = String::from_utf8(run(&["generate", "hardy"], None).stdout).unwrap();
    let report = stdout_json(&run(&["glue", "-"], Some(&hardy)));
    assert_eq!(report["result"]["semiring"], "boolean");
    assert_eq!(report["result"]["glue"]["exists"], false);

    // Probability: hidden-variable feasibility with certificate on refusal.
    let bell = String::from_utf8(run(&["generate", "bell"], None).stdout).unwrap();
    let report = stdout_json(&run(&["glue", "-"], Some(&bell)));
    assert_eq!(report["result"]["semiring"], "probability");
    assert_eq!(report["result"]["lhv"]["feasible"], false);
    // One multiplier per equation: 4 contexts × 4 outcome rows.
    let certificate = report["result"]["lhv"]["certificate"].as_array().unwrap();
    assert_eq!(certificate.len(), 16);
}

#[test]
fn schema_analyses_select_by_flag() {
    let ks = String::from_utf8(run(&["generate", "ks18"], None).stdout).unwrap();

    // All analyses by default.
    let report = stdout_json(&run(&["schema", "-"], Some(&ks)));
    assert_eq!(report["result"]["acyclicity"]["acyclic"], false);
    assert_eq!(report["result"]["parity"]["no_global_section"], true);
    assert_eq!(report["result"]["parity"]["divisor"], 2);
    assert_eq!(report["result"]["ks"]["section_exists"], false);

    // Flag selection: only the requested analysis appears.
    let report = stdout_json(&run(&["schema", "-", "--parity"], Some(&ks)));
    assert_eq!(report["result"]["parity"]["no_global_section"], true);
    assert!(report["result"]["acyclicity"].is_null());
    assert!(report["result"]["ks"].is_null());

    // An acyclic schema reports its elimination order.
    let chain = r#"{
        "attributes": [
            {"name": "a", "domain": ["0", "1"]},
            {"name": "b", "domain": ["0", "1"]},
            {"name": "c", "domain": ["0", "1"]}
        ],
        "contexts": [["a", "b"], ["b", "c"]]
    }"#;
    let report = stdout_json(&run(&["schema", "-", "--acyclicity"], Some(chain)));
    assert_eq!(report["result"]["acyclicity"]["acyclic"], true);
    let steps = report["result"]["acyclicity"]["elimination"].as_array().unwrap();
    assert!(!steps.is_empty());
    assert_eq!(steps[0]["kind"], "remove-attribute");
}

#[test]
fn quantum_rationalize_recovers_the_exact_model() {
    let output = run(&["quantum", "bell", "--rationalize", "8"], None);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(parse_model(&text).unwrap(), bell_model());

    // Without --rationalize the output is a float document that still parses.
    let output = run(&["quantum", "ghz", "--n", "3"], None);
    let text = String::from_utf8(output.stdout).unwrap();
    parse_model(&text).expect("float model document parses");
}

#[test]
fn generate_compatible_requires_and_honors_seed() {
    let schema_path = scratch("chain.json");
    std::fs::write(
        &schema_path,
        r#"{
            "attributes": [
                {"name": "a", "domain": ["0", "1"]},
                {"name": "b", "domain": ["0", "1"]},
                {"name": "c", "domain": ["0", "1"]}
            ],
            "contexts": [["a", "b"], ["b", "c"]]
        }"#,
    )
    .unwrap();
    let path = schema_path.to_str().unwrap();

    // Omitting --seed is a usage error (reproducibility is not optional).
    let output = run(&["generate", "compatible", "--schema", path], None);
    assert!(!output.status.success());

    // Same seed, same instance; different seed, (almost surely) different.
    let one = run(&["generate", "compatible", "--schema", path, "--seed", "5"], None);
    let two = run(&["generate", "compatible", "--schema", path, "--seed", "5"], None);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);

    let text = String::from_utf8(one.stdout).unwrap();
    let model = parse_model(&text).unwrap();
    assert!(contextdb::gluing::check_compatibility(&model).compatible());
}

#[test]
fn exit_codes_distinguish_failure_modes() {
    // Malformed input: 2, error on stderr, nothing on stdout.
    let output = run(&["classify", "-"], Some("this is not json"));
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());
    assert!(String::from_utf8_lossy(&output.stderr).starts_with("error:"));

    // A missing file is malformed input, not a crash.
    let output = run(&["check", "/nonexistent/path.json"], None);
    assert_eq!(output.status.code(), Some(2));

    // Enumeration caps: 3.
    let output = run(&["generate", "ghz", "--n", "99"], None);
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("error:"));

    // Usage errors are clap's native exit 2.
    let output = run(&["frobnicate"], None);
    assert_eq!(output.status.code(), Some(2));
}
