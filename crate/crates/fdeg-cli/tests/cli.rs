//! End-to-end tests of the command-line interface: each subcommand on
//! the shipped sample files, the JSON mode, and the exit-code contract
//! (0 success, 1 identity failure, 2 operational error).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fdeg"))
}

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn analyze_reports_the_ramified_symplectic_block() {
    let path = testdata("c2-sc-ramified-order2.json");
    let output = run(&["analyze", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("datum: C2-sc (rank 2, 4 positive roots)"));
    assert!(text.contains("ratio = q^4, root-number modulus = q^4 (match)"));
    assert!(text.contains("order 8 = 4 reflections x 2 diagram"));
    assert!(text.contains("condition: components B2; excluded primes [2]; p = 3 allowed"));
}

#[test]
fn analyze_json_exposes_the_report_fields() {
    let path = testdata("c2-sc-ramified-order2.json");
    let output = run(&["--json", "analyze", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["artin_exponent"], 8);
    assert_eq!(value["volumes"]["ratio_matches_epsilon"], true);
    assert_eq!(value["volumes"]["ratio"], "q^4");
    assert_eq!(value["stabilizer"]["diagram_order"], 2);
    assert_eq!(value["subsystem"]["parent_indices"], serde_json::json!([0, 2, 3, 6]));
    assert_eq!(value["condition"]["satisfied"], true);
}

#[test]
fn gamma_reproduces_the_rank_one_steinberg_value() {
    let path = testdata("gamma-pgl2-steinberg.json");
    let output = run(&["gamma", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    // |gamma(0)|^2 = (q^2/(q+1))^2 at q = 3.
    assert!(text.contains("|gamma(0, Ad)|^2 = 81/16"));
    assert!(text.contains("discrete: true"));
}

#[test]
fn hii_rhs_verifies_the_chain_on_the_symplectic_block() {
    let path = testdata("c2-sc-ramified-order2.json");
    let output = run(&["hii-rhs", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("component order |S#| = 4"));
    assert!(text.contains("|gamma(0, Ad)|^2 = 43046721/256"));
    assert!(text.contains("rhs^2 = 43046721/4096"));
    assert!(text.contains("identity chain: verified (ratio q^4"));
}

#[test]
fn hii_rhs_json_carries_the_chain_status() {
    let path = testdata("a1-ad-steinberg.json");
    let output = run(&["--json", "hii-rhs", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["rhs_sq"], "81/64");
    assert_eq!(value["s_sharp_order"], 2);
    assert_eq!(value["chain"]["status"], "verified");
    assert_eq!(value["strands"][0]["weight"], 2);
}

#[test]
fn verify_small_sweep_exits_cleanly() {
    let output = run(&["verify", "--max-rank", "1", "--trials", "3", "--seed", "5"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("identity sweep: 2 data, 3 trials each, seed 5"));
    assert!(text.contains("all checks passed"));
}

#[test]
fn verify_json_summarises_the_checks() {
    let output = run(&[
        "--json", "verify", "--max-rank", "1", "--lattices", "sc", "--trials", "2",
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["failed"], false);
    assert_eq!(value["data"], serde_json::json!(["A1-sc"]));
    assert_eq!(
        value["checks"]["volume ratio equals the root-number modulus"]["passes"],
        2
    );
}

#[test]
fn verify_reports_failing_checks_with_exit_one() {
    // An absurdly small enumeration cap makes the Weyl-order check fail,
    // which the sweep reports as a failure rather than an error.
    let output = run(&["verify", "--max-rank", "1", "--trials", "1", "--weyl-limit", "1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("first counterexamples:"));
    assert!(stderr(&output).contains("failing checks"));
}

#[test]
fn missing_input_file_is_an_operational_error() {
    let output = run(&["analyze", "/no/such/file.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("cannot read"));
}

#[test]
fn malformed_json_is_an_operational_error() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{ not json").unwrap();
    let output = run(&["analyze", file.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("error:"));
}

#[test]
fn fully_ramified_block_has_no_principal_arc() {
    // Rank one, simply connected, quadratic character: every root is
    // ramified, so there is no principal arc and no right-hand side; the
    // analysis itself still works and shows the empty subsystem.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"datum":{{"type":"A1","lattice":"sc"}},"inertial":{{"levels":[[["1/2"]]]}},"q":3}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();

    let output = run(&["analyze", path]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("unramified subsystem: none"));

    let output = run(&["hii-rhs", path]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("no principal arc"));
}

#[test]
fn condition_report_flags_an_excluded_prime() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"datum":{{"type":"G2"}},"q":7,"p":3}}"#).unwrap();
    let output = run(&["analyze", file.path().to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("p = 3 excluded"));
}
