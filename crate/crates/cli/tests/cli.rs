use std::process::{Command, Output};

use orbifold_hurwitz::report::{Report, Status};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifold-hurwitz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Report, i32, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "json", "--no-timing", "--threads", "1"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let rep: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (rep, out.status.code().unwrap(), text)
}

fn item<'a>(rep: &'a Report, key: &str) -> &'a str {
    &rep.items.iter().find(|i| i.key == key).expect(key).actual
}

#[test]
fn compute_examples() {
    let (rep, code, _) = json(&["compute", "--g", "0", "--q", "1", "--r", "1", "--mu", "2"]);
    assert_eq!((item(&rep, "hurwitz"), code), ("1/2", 0));
    let (rep, _, _) = json(&["compute", "--g", "0", "--q", "1", "--r", "2", "--mu", "1,1"]);
    assert_eq!(item(&rep, "hurwitz"), "1");
    let (rep, _, _) = json(&[
        "compute",
        "--g",
        "0",
        "--q",
        "1",
        "--r",
        "2",
        "--mu",
        "1,1",
        "--disconnected",
    ]);
    assert_eq!(item(&rep, "hurwitz"), "7/6");
    let (rep, code, _) = json(&["compute", "--g", "0", "--q", "1", "--r", "2", "--mu", "2"]);
    assert_eq!(item(&rep, "hurwitz"), "0");
    assert_eq!(item(&rep, "admissibility"), "b non-integral");
    assert_eq!(code, 0);
}

#[test]
fn invalid_input_exits_with_two() {
    let (rep, code, _) = json(&["compute", "--g", "0", "--q", "0", "--r", "1", "--mu", "2"]);
    assert_eq!((rep.status, code), (Status::InvalidInput, 2));
    let out = run(&["compute", "--g", "0", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let (_, code, _) = json(&["check", "residue", "--q", "1", "--r", "1", "--eta", "3"]);
    assert_eq!(code, 2);
    let (_, code, _) = json(&[
        "check",
        "polynomiality",
        "--q",
        "1",
        "--r",
        "1",
        "--g",
        "0",
        "--n",
        "2",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn check_suites_pass() {
    for args in [
        vec!["check", "f02", "--q", "1", "--r", "2", "--max", "10"],
        vec!["check", "bergman", "--q", "2", "--r", "1", "--order", "8"],
        vec!["check", "f01", "--q", "2", "--r", "2", "--max", "3"],
        vec![
            "check", "residue", "--q", "2", "--r", "1", "--m", "2", "--max-u", "2",
        ],
        vec![
            "check",
            "hurw-aop",
            "--q",
            "2",
            "--r",
            "1",
            "--max-size",
            "3",
            "--max-u",
            "4",
        ],
        vec![
            "check",
            "polynomiality",
            "--q",
            "1",
            "--r",
            "1",
            "--g",
            "1",
            "--n",
            "1",
            "--grid",
            "4",
        ],
    ] {
        let (rep, code, _) = json(&args);
        assert_eq!((rep.status, code), (Status::Pass, 0), "{args:?}");
        assert!(!rep.items.is_empty());
    }
}

#[test]
fn tr_conjectural_regime_reports_evidence() {
    let (rep, code, _) = json(&[
        "check", "tr", "--g", "1", "--n", "1", "--q", "1", "--r", "2", "--mu-max", "4", "--prec",
        "256",
    ]);
    assert_eq!((rep.status, code), (Status::Evidence, 0));
    let err: f64 = rep.params["max_rel_error"].parse().unwrap();
    assert!(err < 1e-15);
    let (rep, _, _) = json(&[
        "check", "tr", "--g", "0", "--n", "3", "--q", "1", "--r", "1", "--mu-max", "2",
    ]);
    assert_eq!(rep.status, Status::Pass);
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = [
        "table", "--g", "1", "--q", "2", "--r", "1", "--n", "2", "--mu-max", "4",
    ];
    let (rep, _, first) = json(&args);
    let (_, _, second) = json(&args);
    assert_eq!(first, second);
    let mut again = serde_json::to_string_pretty(&rep).unwrap();
    again.push('\n');
    assert_eq!(again, first);
}

#[test]
fn table_rows_agree_with_compute() {
    let (rep, _, _) = json(&[
        "table", "--g", "0", "--q", "1", "--r", "2", "--n", "2", "--mu-max", "4",
    ]);
    let keys: Vec<&str> = rep.items.iter().map(|i| i.key.as_str()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for row in rep.items.iter().take(3) {
        let mu = row.key.trim_start_matches("mu=");
        let (single, _, _) = json(&["compute", "--g", "0", "--q", "1", "--r", "2", "--mu", mu]);
        assert_eq!(item(&single, "hurwitz"), row.actual, "{mu}");
    }
}

#[test]
fn csv_has_the_fixed_header() {
    let out = run(&[
        "check", "f02", "--q", "1", "--r", "1", "--max", "4", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,expected,actual,status"));
    assert_eq!(lines.next(), Some("\"mu=(1,1)\",1/2,1/2,pass"));
}
