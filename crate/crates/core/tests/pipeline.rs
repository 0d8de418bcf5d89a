mod common;

use voldet::numerics::cached_constants;
use voldet::pipeline::{
    compute_invariants, ingest_csv, ingest_reader, update_cache, validate_table, InvariantCache,
    ValidateOptions,
};

fn sample() -> voldet::pipeline::Census {
    let text = std::fs::read_to_string(common::census_path()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let body: Vec<&str> = lines.step_by(40).collect();
    ingest_reader(format!("{header}\n{}\n", body.join("\n")).as_bytes()).unwrap()
}

#[test]
fn parallel_and_serial_reports_agree() {
    let ctx = cached_constants(30).unwrap();
    let census = sample();
    let serial = validate_table(&census, &ctx, ValidateOptions::default(), None);
    let parallel = validate_table(
        &census,
        &ctx,
        ValidateOptions { parallel: true, ..Default::default() },
        None,
    );
    assert_eq!(serial.to_json(), parallel.to_json());
    assert!(serial.is_clean());
    assert_eq!(serial.summary.certified, census.rows.len());
}

#[test]
fn oracle_and_mirror_runs_stay_clean() {
    let ctx = cached_constants(30).unwrap();
    let census = sample();
    let report = validate_table(
        &census,
        &ctx,
        ValidateOptions { oracle: true, mirror: true, parallel: false },
        None,
    );
    assert!(report.is_clean());
    assert!(report.rows.iter().all(|r| !r.oracle.is_empty()));
}

#[test]
fn cache_is_reused_and_survives_reopening() {
    let ctx = cached_constants(30).unwrap();
    let census = sample();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.jsonl");
    let first = {
        let mut cache = InvariantCache::open(&path).unwrap();
        let report = validate_table(&census, &ctx, ValidateOptions::default(), Some(&cache));
        assert_eq!(update_cache(&report, &mut cache).unwrap(), census.rows.len());
        report
    };
    let mut cache = InvariantCache::open(&path).unwrap();
    assert_eq!(cache.len(), census.rows.len());
    assert!(cache.warnings().is_empty());
    let second = validate_table(&census, &ctx, ValidateOptions::default(), Some(&cache));
    assert_eq!(update_cache(&second, &mut cache).unwrap(), 0);
    assert_eq!(first.to_json(), second.to_json());
    for row in census.rows.iter().take(5) {
        let d = voldet::diagram::Diagram::build(row.pd.as_ref().unwrap()).unwrap();
        let inv = compute_invariants(&d);
        assert_eq!(cache.get(&inv.digest), Some(&inv));
    }
}

#[test]
fn bad_rows_are_reported_not_fatal() {
    let text = "name,pd,braid,det,volume,crossings\n\
        ok,,2: 1 1 1,3,,3\n\
        ,,2: 1 1 1,3,,3\n\
        nothing,,,,,\n\
        garbled,[[1,2,3]],,,,\n\
        wrong,,2: 1 1 1,5,,3\n";
    let census = ingest_reader(text.as_bytes()).unwrap();
    assert!(!census.errors.is_empty());
    let ctx = cached_constants(30).unwrap();
    let report = validate_table(&census, &ctx, ValidateOptions::default(), None);
    assert!(!report.is_clean());
    let wrong = report.rows.iter().find(|r| r.name == "wrong").unwrap();
    assert!(wrong.discrepancies.iter().any(|d| d.field == "det"));
    let ok = report.rows.iter().find(|r| r.name == "ok").unwrap();
    assert!(ok.discrepancies.is_empty() && ok.error.is_none());
    let csv = report.to_csv();
    assert!(csv.starts_with('#'));
    assert!(csv.contains("det:5!=3"));
}

#[test]
fn missing_file_is_an_error() {
    assert!(ingest_csv("/no/such/census.csv").is_err());
}
