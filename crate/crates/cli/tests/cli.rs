use std::fs;
use std::path::Path;
use std::process::Command;

fn snbkit(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_snbkit")).env("SNBKIT_DIR", dir).args(args).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn count(dir: &Path) -> usize {
    fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn generate_lays_out_dataset_streams_and_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out) = snbkit(tmp.path(), &["generate", "--persons", "150", "--seed", "7", "--format", "CsvBasic"]);
    assert_eq!(code, 0, "{out}");
    let root = tmp.path().join("social_network");
    assert_eq!(count(&root.join("static")) + count(&root.join("dynamic")), 33);
    assert!(root.join("updateStream_0_0_person.csv").is_file());
    assert!(root.join("updateStream_0_0_forum.csv").is_file());
    assert!(root.join("updateStream.properties").is_file());
    assert_eq!(count(&tmp.path().join("substitution_parameters")), 39);
    assert_eq!(snbkit(tmp.path(), &["load"]).0, 0);
    let (code, out) = snbkit(tmp.path(), &["validate"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn rerunning_generate_rewrites_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["generate", "--scale", "60", "--seed", "3", "--parts", "2"];
    assert_eq!(snbkit(tmp.path(), &args).0, 0);
    let before = fs::read(tmp.path().join("social_network/dynamic/person_1_0.csv")).unwrap();
    assert_eq!(snbkit(tmp.path(), &args).0, 0);
    assert_eq!(fs::read(tmp.path().join("social_network/dynamic/person_1_0.csv")).unwrap(), before);
}

#[test]
fn other_layouts_round_trip_through_write_and_curate() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(snbkit(tmp.path(), &["generate", "--persons", "80", "--format", "CsvCompositeMergeForeign"]).0, 0);
    let root = tmp.path().join("social_network");
    assert_eq!(count(&root.join("static")) + count(&root.join("dynamic")), 18);
    let out = tmp.path().join("basic");
    let (code, text) = snbkit(
        tmp.path(),
        &["write", "--format", "CsvCompositeMergeForeign", "--to", "CsvMergeForeign", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code, 0, "{text}");
    assert_eq!(snbkit(&out, &["load", "--format", "CsvMergeForeign"]).0, 0);
    assert_eq!(snbkit(&out, &["curate", "--format", "CsvMergeForeign", "--params", "5", "--json-params"]).0, 0);
    let line = fs::read_to_string(out.join("substitution_parameters/interactive_1_param.txt")).unwrap();
    assert!(line.starts_with("{\"firstName\""));
}

#[test]
fn run_writes_a_log_and_report_scores_it() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(snbkit(tmp.path(), &["generate", "--persons", "100", "--seed", "2"]).0, 0);
    let results = tmp.path().join("res");
    let (code, out) = snbkit(tmp.path(), &["run", "--tcr", "20000000", "--threads", "2", "--results_dir", results.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let log = fs::read_to_string(results.join("results_log.csv")).unwrap();
    assert!(log.starts_with("operation|scheduled_start_time|actual_start_time|duration_us|result_count|status\n"));
    assert!(log.lines().count() > 100);
    assert!(results.join("results_summary.json").is_file());
    assert_eq!(snbkit(tmp.path(), &["report", "--results_dir", results.to_str().unwrap()]).0, 0);
}

fn synthetic_log(dir: &Path, late: usize) {
    fs::create_dir_all(dir).unwrap();
    let mut text = String::from("operation|scheduled_start_time|actual_start_time|duration_us|result_count|status\n");
    for i in 0..100 {
        let delay = if i < late { 2000 } else { 10 };
        text.push_str(&format!("IC1|{}|{}|50|1|OK\n", 1000 * i, 1000 * i + delay));
    }
    fs::write(dir.join("results_log.csv"), text).unwrap();
}

#[test]
fn report_exit_status_follows_the_on_time_rule() {
    let tmp = tempfile::tempdir().unwrap();
    let results = tmp.path().join("results");
    synthetic_log(&results, 6);
    assert_eq!(snbkit(tmp.path(), &["report"]).0, 2);
    synthetic_log(&results, 5);
    assert_eq!(snbkit(tmp.path(), &["report"]).0, 0);
}

#[test]
fn exit_codes_for_usage_and_io_failures() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(snbkit(tmp.path(), &["frobnicate"]).0, 1);
    assert_eq!(snbkit(tmp.path(), &["generate", "--scale", "SF9"]).0, 1);
    assert_eq!(snbkit(tmp.path(), &["generate", "--persons", "0"]).0, 1);
    assert_eq!(snbkit(tmp.path(), &["load"]).0, 3);
    assert_eq!(snbkit(tmp.path(), &["report"]).0, 3);
    assert_eq!(snbkit(tmp.path(), &["--help"]).0, 0);
}

#[test]
fn schema_violations_exit_with_validation_status() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(snbkit(tmp.path(), &["generate", "--persons", "40"]).0, 0);
    let path = tmp.path().join("social_network/dynamic/person_knows_person_0_0.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    let first = text.lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = first.split('|').collect();
    text.push_str(&format!("{}|{}|{}\n", cells[0], cells[0], cells[2]));
    fs::write(&path, text).unwrap();
    let (code, out) = snbkit(tmp.path(), &["load"]);
    assert!(code == 2 || code == 3, "{out}");
}
