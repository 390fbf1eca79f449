use std::process::{Command, Output};

use liesym::classify::golden::TableDocument;

fn liesym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesym")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rootsys_reports_counts_and_marks() {
    let o = liesym(&["rootsys", "E8"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("roots 240"));
    assert!(s.contains("marks (2,3,4,6,5,4,3,2)"));
    assert!(stdout(&liesym(&["rootsys", "A1"])).contains("roots 2 "));
}

#[test]
fn bad_type_is_a_usage_error() {
    assert_eq!(liesym(&["rootsys", "X9"]).status.code(), Some(1));
    assert_eq!(liesym(&["fix", "E8", "K9"]).status.code(), Some(1));
    assert_eq!(liesym(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn fixed_subalgebras_of_sigma() {
    assert!(stdout(&liesym(&["fix", "E8", "1/2*K3"])).contains("fixed A7+A1  dim 66  dim z 0"));
    assert!(stdout(&liesym(&["fix", "E8", "1/2*K2"])).contains("fixed A7+R  dim 64  dim z 1"));
    assert!(stdout(&liesym(&["fix", "E8", "0"])).contains("fixed E8  dim 248"));
}

#[test]
fn invol_reports_the_class() {
    let o = liesym(&["invol", "E8", "3", "--base", "tau1", "--twist", "K6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], "E7+A1");
    assert_eq!(v["k_dim"], 136);
    assert_eq!(v["commutation"], "anticommutes");
    assert_eq!(liesym(&["invol", "E8", "1"]).status.code(), Some(1));
}

#[test]
fn grade_checks_closure() {
    let o = liesym(&["grade", "G2", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], 3);
    assert_eq!(v["sampled"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn table7_diff_is_empty() {
    let o = liesym(&["tables", "7", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn unknown_table_is_an_error() {
    let o = liesym(&["tables", "99"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("table 99"));
}

#[test]
fn table5_json_round_trips() {
    let o = liesym(&["tables", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let doc: TableDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.tables.len(), 1);
    assert_eq!(doc.tables[0].blocks.len(), 4);
    assert_eq!(doc.tables[0].blocks.iter().map(|b| b.rows.len()).sum::<usize>(), 16);
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
}

#[test]
fn witnesses_replay() {
    let o = liesym(&["witness"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn thread_count_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_liesym"))
        .args(["rootsys", "G2"])
        .env("LIESYM_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_liesym"))
        .args(["rootsys", "G2"])
        .env("LIESYM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
