use std::io::Write;
use std::process::{Command, Output};

const CIRCUIT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/circuit.net");
const EVIDENCE: &str = "Input=current,TotalOutput=current";

fn mre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mre")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_lists_the_minimal_pool() {
    let o = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let explanations: Vec<String> = stdout(&o).lines().map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
    assert_eq!(explanations, ["B=defective,C=defective", "A=defective", "B=defective,D=defective"]);
}

#[test]
fn solve_single_and_json() {
    let one = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE]);
    assert_eq!(stdout(&one).lines().count(), 1);
    let json = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--k", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["explanation"]["B"], "defective");
    let parallel = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--k", "5", "--jobs", "3"]);
    let serial = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--k", "5"]);
    assert_eq!(parallel.stdout, serial.stdout);
}

#[test]
fn score_reports_gbf_and_cbf() {
    let o = mre(&[
        "score",
        "--net",
        CIRCUIT,
        "--evidence",
        EVIDENCE,
        "--explanation",
        "A=defective",
        "--given",
        "B=defective,C=defective",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gbf = v["gbf"].as_f64().unwrap();
    let cbf = v["cbf"].as_f64().unwrap();
    assert!((gbf - 39.44).abs() < 0.5, "{gbf}");
    assert!((cbf - 1.03).abs() < 0.05, "{cbf}");
    let flat = mre(&["score", "--net", CIRCUIT, "--evidence", "A=ok", "--explanation", "B=defective"]);
    let line = stdout(&flat).lines().next().unwrap().to_string();
    let value: f64 = line.split('\t').nth(1).unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let malformed = mre(&["solve", "--net", CIRCUIT, "--evidence", "B:bad"]);
    assert_eq!(malformed.status.code(), Some(1));
    assert!(stderr(&malformed).contains("column 1"));
    assert!(malformed.stdout.is_empty());

    let zero = mre(&["solve", "--net", CIRCUIT, "--evidence", "Input=noCurr,TotalOutput=current"]);
    assert_eq!(zero.status.code(), Some(2));

    let budget = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--budget-candidates", "10"]);
    assert_eq!(budget.status.code(), Some(3));
    let table = mre(&["solve", "--net", CIRCUIT, "--evidence", EVIDENCE, "--budget-table", "4"]);
    assert_eq!(table.status.code(), Some(3));

    let mut calm = tempfile::NamedTempFile::new().unwrap();
    write!(
        calm,
        "network calm\nvar T role=target states=ok,bad normal=ok\nvar O role=observation states=fine,alarm normal=fine\ncpt T\n1 0\ncpt O parents=T\n1 0\n0 1\n"
    )
    .unwrap();
    let path = calm.path().to_str().unwrap();
    let exhausted = mre(&["bench", "--net", path, "--cases", "3", "--attempts", "1000"]);
    assert_eq!(exhausted.status.code(), Some(4));

    assert_eq!(mre(&["solve", "--net", "/no/such/file", "--evidence", EVIDENCE]).status.code(), Some(1));
    assert_eq!(mre(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mre(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--net", CIRCUIT, "--cases", "20", "--k", "3", "--min-faults", "1", "--seed", "7", "--attempts", "50000"];
    let a = mre(&args);
    let b = mre(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("case,method,k,min_faults,precision,recall,f_score\n"));
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "4"]);
    assert_eq!(mre(&jobs).stdout, a.stdout);
}

#[test]
fn bench_refuses_marginal_with_top_k() {
    let o = mre(&["bench", "--net", CIRCUIT, "--cases", "5", "--k", "3", "--methods", "marginal", "--attempts", "50000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("single solution"));
}

#[test]
fn bench_grid_has_one_aggregate_row_per_cell() {
    let o = mre(&["bench", "--net", CIRCUIT, "--k", "1,3", "--min-faults", "1,2", "--seed", "3", "--attempts", "50000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let aggregate: Vec<&str> = text.split("# aggregate\n").nth(1).unwrap().lines().skip(1).collect();
    // marginal runs at K=1 only
    assert_eq!(aggregate.len(), 2 * (4 + 3));
    let json = mre(&["bench", "--net", CIRCUIT, "--k", "1,3", "--min-faults", "1,2", "--seed", "3", "--attempts", "50000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["aggregates"].as_array().unwrap().len(), aggregate.len());
    let first_csv: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let first_json = &v["records"][0];
    assert_eq!(first_csv[4].parse::<f64>().unwrap(), first_json["precision"].as_f64().unwrap());
}

#[test]
fn saved_cases_feed_the_benchmark() {
    let o = mre(&["cases", "--net", CIRCUIT, "--cases", "6", "--seed", "5", "--attempts", "50000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&o.stdout).unwrap();
    let path = file.path().to_str().unwrap();
    let from_file = mre(&["bench", "--net", CIRCUIT, "--case-file", path]);
    let sampled = mre(&["bench", "--net", CIRCUIT, "--cases", "6", "--seed", "5", "--attempts", "50000"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, sampled.stdout);
}
