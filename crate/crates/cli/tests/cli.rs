use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const K11A47_BRAID: &str = "4: 1 1 -2 -2 -2 3 3 1 -2 -2 3";
const HEADER: &str = "name,pd,braid,det,volume,crossings";
const FIG8: &str = "K4a1,\"[[4,2,5,1],[2,7,3,8],[6,3,7,4],[8,6,1,5]]\",,5,2.029883212819,4";

fn voldet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voldet"))
        .args(args)
        .env_remove("VOLDET_DIGITS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn csv_file(lines: &[&str]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for l in lines {
        writeln!(f, "{l}").unwrap();
    }
    f
}

#[test]
fn constants_print_truncated_prefixes() {
    let out = voldet(&["constants", "--digits", "30"]);
    assert!(out.status.success());
    let v = json(&out);
    let value = |name: &str| {
        v["constants"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()["value"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert!(value("gamma").starts_with("1.425299"));
    assert!(value("v_tet").starts_with("1.014941"));
    assert!(value("xi").starts_with("5.029546"));
}

#[test]
fn invariants_of_the_eleven_crossing_example() {
    let out = voldet(&["invariants", K11A47_BRAID]);
    assert!(out.status.success());
    let inv = &json(&out)["invariants"];
    assert_eq!(inv["c"], 11);
    assert_eq!(inv["t"], 6);
    assert_eq!(inv["det"], "117");
    let mut sizes: Vec<u64> = inv["twist_sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_u64().unwrap())
        .collect();
    sizes.sort();
    assert_eq!(sizes, [1, 1, 2, 2, 2, 3]);
}

#[test]
fn mirror_keeps_determinant() {
    let out = voldet(&["invariants", K11A47_BRAID, "--mirror"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["invariants"]["det"], "117");
}

#[test]
fn bounds_report_both_sides() {
    let out = voldet(&["bounds", "--t", "9", "--c", "20", "--det", "117"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["t"], 9);
    assert!(!v["det_lower"].as_array().unwrap().is_empty());
}

#[test]
fn certify_with_volume() {
    let out = voldet(&["certify", K11A47_BRAID, "--volume", "15.5977141458"]);
    assert!(out.status.success());
    let cert = &json(&out)["certificate"];
    assert_eq!(cert["method"], "direct");
    assert_eq!(cert["verdict"], "certified");
    assert!(cert["comparison"]["margin"].as_str().unwrap().starts_with("14.3239"));
}

#[test]
fn sweep_emits_thresholds() {
    let out = voldet(&["sweep", "--t-range", "9..=10", "--emit-csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("t,"));
    assert!(lines[1].starts_with("9,409452.70"));
}

#[test]
fn validate_table_exit_codes() {
    let good = csv_file(&[HEADER, FIG8]);
    let out = voldet(&["validate-table", good.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let bad_det = FIG8.replace(",5,2.0", ",7,2.0");
    let bad = csv_file(&[HEADER, &bad_det]);
    let out = voldet(&["validate-table", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = voldet(&["validate-table", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn validate_table_csv_output_and_cache() {
    let table = csv_file(&[HEADER, FIG8]);
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let report = dir.path().join("report.csv");
    for _ in 0..2 {
        let out = voldet(&[
            "validate-table",
            table.path().to_str().unwrap(),
            "--cache",
            cache.to_str().unwrap(),
            "--output",
            report.to_str().unwrap(),
            "--format",
            "csv",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let cached = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(cached.lines().count(), 1);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.lines().any(|l| l.starts_with('#')));
    assert!(text.contains("K4a1"));
}

#[test]
fn malformed_input_exits_with_two() {
    let out = voldet(&["invariants", "[[1,2,3]]"]);
    assert_eq!(out.status.code(), Some(2));
}
