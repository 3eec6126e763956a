use std::fs;
use std::path::{Path, PathBuf};

use essence_core::cli::run;
use essence_core::project::{load_project, save_project};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/plant.json");

struct Outcome {
    status: u8,
    stdout: String,
    stderr: String,
}

fn essence(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("essence").chain(args.iter().copied());
    let status = run(argv, &mut out, &mut err);
    Outcome { status, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn scratch_copy(dir: &Path) -> PathBuf {
    let path = dir.join("plant.json");
    fs::copy(FIXTURE, &path).unwrap();
    path
}

#[test]
fn fixture_is_canonical() {
    let bytes = fs::read(FIXTURE).unwrap();
    let project = load_project(&bytes).unwrap();
    assert_eq!(String::from_utf8(save_project(&project)).unwrap(), String::from_utf8(bytes).unwrap());
}

#[test]
fn desig_parse_paper_example() {
    let o = essence(&["desig", "parse", "=F1 / -12-N4-DN18 / +M13"]);
    assert_eq!(o.status, 0);
    assert_eq!(o.stdout, "=F1 / -12-N4-DN18 / +M13\nfunction: F1\nproduct: 12 N4 DN18\nlocation: M13\n");
}

#[test]
fn desig_parse_reorders_to_canonical() {
    let o = essence(&["desig", "parse", "+M13/=F1"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.starts_with("=F1 / +M13\n"));
}

#[test]
fn desig_parse_lowercase_is_usage_error() {
    let o = essence(&["desig", "parse", "=f1"]);
    assert_eq!(o.status, 2);
    assert!(o.stderr.contains("BAD_SEGMENT"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn structured_errors_carry_code() {
    let o = essence(&["--format", "structured", "desig", "parse", "=F1+M1"]);
    assert_eq!(o.status, 2);
    let v: serde_json::Value = serde_json::from_str(&o.stderr).unwrap();
    assert_eq!(v["error"], "MIXED_CHAIN");
}

#[test]
fn desig_check_against_fixture_trees() {
    let o = essence(&["desig", "check", FIXTURE, "=F1 / -12-N4-DN18 / +M13"]);
    assert_eq!(o.status, 0, "{}", o.stdout);
    assert!(o.stdout.contains("result: unambiguous"));

    let o = essence(&["desig", "check", FIXTURE, "-N4"]);
    assert_eq!(o.status, 1);
    assert!(o.stdout.contains("product -N4: 2 matches"), "{}", o.stdout);

    let o = essence(&["desig", "check", FIXTURE, "-N4 / +M99"]);
    assert_eq!(o.status, 1);
}

#[test]
fn arch_check_missing_allocation() {
    let o = essence(&["arch", "check", FIXTURE, "--views", "P&ID,Parts list"]);
    assert_eq!(o.status, 1);
    assert!(o.stdout.contains("missing: Allocation"), "{}", o.stdout);

    let o = essence(&["arch", "check", FIXTURE, "--views", "P&ID,Parts list,Layout"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.starts_with("viable: yes"));

    let o = essence(&["arch", "check", FIXTURE, "--views", "Nope"]);
    assert_eq!(o.status, 2);
    assert!(o.stderr.contains("UNKNOWN_REFERENCE"));
}

#[test]
fn lint_endeavor_reports_missing_kinds() {
    let o = essence(&["lint", "endeavor", FIXTURE]);
    assert_eq!(o.status, 1);
    assert_eq!(o.stdout.lines().count(), 2);
    assert!(o.stdout.contains("process") && o.stdout.contains("team"));
}

#[test]
fn doc_parse_builtin_and_custom_table() {
    let o = essence(&["doc", "parse", "=F1&MCA"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.contains("technical area: M (Mechanical engineering)"));

    let o = essence(&["doc", "parse", "=F1&XCA"]);
    assert_eq!(o.status, 2);
    assert!(o.stderr.contains("UNKNOWN_TECHNICAL_AREA"));

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("dcc.json");
    fs::write(&table, r#"{"name":"plant","areas":{"X":"Process engineering"}}"#).unwrap();
    let o = essence(&["doc", "parse", "=F1&XCA", "--dcc-table", table.to_str().unwrap()]);
    assert_eq!(o.status, 0, "{}", o.stderr);
    assert!(o.stdout.contains("table: plant"));
    // the file replaces the builtin table
    let o = essence(&["doc", "parse", "=F1&MCA", "--dcc-table", table.to_str().unwrap()]);
    assert_eq!(o.status, 2);
}

#[test]
fn assess_state_and_blocking() {
    let o = essence(&["assess", "state", FIXTURE, "--alpha-instance", "station"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.starts_with("achieved: Raw materials\nnext: Parts\n"), "{}", o.stdout);

    let o = essence(&["assess", "blocking", FIXTURE, "--alpha-instance", "station", "--target", "Raw materials"]);
    assert_eq!(o.status, 0);
    let o = essence(&["assess", "blocking", FIXTURE, "--alpha-instance", "station", "--target", "Parts"]);
    assert_eq!(o.status, 1);
    assert_eq!(o.stdout.lines().count(), 3);
    let o = essence(&["assess", "blocking", FIXTURE, "--alpha-instance", "station", "--target", "Flying"]);
    assert_eq!(o.status, 2);
}

#[test]
fn assess_record_rewrites_only_on_success() {
    let dir = tempfile::tempdir().unwrap();
    let path = scratch_copy(dir.path());
    let p = path.to_str().unwrap();
    let before = fs::read(&path).unwrap();

    let o = essence(&[
        "assess",
        "record",
        p,
        "--alpha-instance",
        "station",
        "--state",
        "Parts",
        "--checkpoint",
        "P-9",
        "--satisfied",
        "true",
    ]);
    assert_eq!(o.status, 2);
    assert!(o.stderr.contains("UNKNOWN_CHECKPOINT"));
    assert_eq!(fs::read(&path).unwrap(), before);

    let o = essence(&[
        "assess",
        "record",
        p,
        "--alpha-instance",
        "station",
        "--state",
        "Parts",
        "--checkpoint",
        "P-2",
        "--satisfied",
        "true",
        "--evidence",
        "test-1",
        "pid",
        "--at",
        "1700001000",
    ]);
    assert_eq!(o.status, 0, "{}", o.stderr);
    let after = load_project(&fs::read(&path).unwrap()).unwrap();
    let last = after.assessment.records().last().unwrap();
    assert_eq!((last.checkpoint.as_str(), last.recorded_at), ("P-2", 1_700_001_000));
    assert_eq!(last.evidence, ["test-1", "pid"]);
}

#[test]
fn record_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        fs::copy(FIXTURE, path).unwrap();
        let o = essence(&[
            "assess",
            "record",
            path.to_str().unwrap(),
            "--alpha-instance",
            "plant",
            "--state",
            "Raw materials",
            "--checkpoint",
            "RM-1",
            "--satisfied",
            "false",
            "--at",
            "7",
        ]);
        assert_eq!(o.status, 0);
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn project_init_and_add_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("new.json");
    let p = path.to_str().unwrap();
    assert_eq!(essence(&["project", "init", p, "--id", "demo"]).status, 0);
    assert_eq!(essence(&["project", "init", p, "--id", "demo"]).status, 2);
    let o = essence(&["assess", "add-instance", p, "--id", "w", "--alpha", "Way of Working"]);
    assert_eq!(o.status, 0, "{}", o.stderr);
    let o = essence(&["assess", "add-instance", p, "--id", "x", "--alpha", "Nothing"]);
    assert_eq!(o.status, 2);
    let o = essence(&["cards", p]);
    assert!(o.stdout.starts_with("Way of Working [w, system of interest]\nachieved: none\n"), "{}", o.stdout);
}

#[test]
fn cards_for_fixture() {
    let o = essence(&["cards", FIXTURE]);
    assert_eq!(o.status, 0);
    assert_eq!(o.stdout.matches("achieved:").count(), 3);
    assert!(o.stdout.contains("* 1. Raw materials"));
}

#[test]
fn kernel_show_and_export() {
    let o = essence(&["kernel", "show"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.contains("System Realization: Raw materials > Parts"));

    let o = essence(&["kernel", "show", "--alpha", "System Definition"]);
    assert!(o.stdout.contains("sub-alphas: Requirements, Architecture, Non-architectural Design"));
    let o = essence(&["kernel", "show", "--alpha", "Nope"]);
    assert_eq!(o.status, 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    fs::write(&path, essence(&["kernel", "export"]).stdout).unwrap();
    let o = essence(&["kernel", "validate", path.to_str().unwrap()]);
    assert_eq!(o.status, 0, "{}", o.stdout);
    assert!(o.stderr.contains("note:"));
}

#[test]
fn kernel_validate_reports_findings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let bad = r#"{"name":"k","areas":["Solution"],"alphas":[
        {"name":"A","area":"Solution","states":[{"name":"S","checkpoints":[{"id":"1","text":"t"}]}],"subalphas":["B"]},
        {"name":"B","area":"Solution","states":[{"name":"S","checkpoints":[{"id":"1","text":"t"}]}],"subalphas":["A"]}]}"#;
    fs::write(&path, bad).unwrap();
    let o = essence(&["kernel", "validate", path.to_str().unwrap()]);
    assert_eq!(o.status, 1);
    assert!(o.stdout.contains("SUBALPHA_CYCLE"), "{}", o.stdout);

    fs::write(&path, "{").unwrap();
    assert_eq!(essence(&["kernel", "validate", path.to_str().unwrap()]).status, 2);
}

#[test]
fn broken_project_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let text = fs::read_to_string(FIXTURE).unwrap().replace("\"format-version\": 1", "\"format-version\": 2");
    fs::write(&path, text).unwrap();
    let o = essence(&["cards", path.to_str().unwrap()]);
    assert_eq!(o.status, 2);
    assert!(o.stderr.contains("UNSUPPORTED_VERSION"));
}

#[test]
fn usage_errors() {
    assert_eq!(essence(&[]).status, 2);
    assert_eq!(essence(&["desig"]).status, 2);
    assert_eq!(essence(&["--format", "xml", "desig", "parse", "=F1"]).status, 2);
    let help = essence(&["--help"]);
    assert_eq!(help.status, 0);
    assert!(help.stdout.contains("desig"));
}
