use std::fs;
use std::path::{Path, PathBuf};

use clasp::ingest::{parse_table, parse_table_str, run_report, ProfileCache};
use clasp::obstruct::{Check, CoverSpec, KnotRecord};
use clasp::Error;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn record(name: &str) -> KnotRecord {
    let table = parse_table(&fixtures().join("knots.csv")).unwrap();
    table.records.into_iter().find(|r| r.name == name).unwrap()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn malformed_fixtures_give_located_errors() {
    let expected = [
        ("bad_cover_args", 2, 5),
        ("duplicate_name", 3, 1),
        ("even_determinant", 2, 2),
        ("missing_column", 1, 1),
        ("non_numeric", 2, 2),
        ("odd_signature", 2, 3),
        ("short_row", 2, 5),
        ("unbalanced_sum", 2, 5),
        ("unknown_kind", 2, 4),
        ("signature_mod_four", 2, 3),
        ("unterminated_quote", 2, 5),
    ];
    let dir = fixtures().join("malformed");
    assert_eq!(fs::read_dir(&dir).unwrap().count(), expected.len());
    for (name, line, column) in expected {
        match parse_table(&dir.join(format!("{name}.csv"))) {
            Err(Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{name}"),
            other => panic!("{name}: expected a located error, got {other:?}"),
        }
    }
}

#[test]
fn fixture_table_parses() {
    let table = parse_table(&fixtures().join("knots.csv")).unwrap();
    assert!(table.warnings.is_empty());
    assert_eq!(table.records.len(), 15);
    let r = record("9_10");
    assert_eq!((r.determinant, r.signature, r.cover.to_string()), (33, 4, "lens(33,23)".to_string()));
    let r = record("8_3");
    assert_eq!((r.determinant, r.signature, r.cover.to_string()), (17, 0, "lens(17,4)".to_string()));
    assert_eq!(r.unknotting.as_deref(), Some("2"));
}

#[test]
fn empty_file_is_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    fs::write(&path, "").unwrap();
    assert!(parse_table(&path).unwrap().records.is_empty());
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(parse_table(Path::new("/nonexistent/knots.csv")), Err(Error::Io { .. })));
}

#[test]
fn reports_are_deterministic() {
    let table = parse_table(&fixtures().join("knots.csv")).unwrap();
    let checks = Check::parse_list("u1,uc1,cstar1,cstar:2").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_report(&table.records, &checks, a.path(), None).unwrap();
    run_report(&table.records, &checks, b.path(), None).unwrap();
    assert_eq!(snapshot(a.path()), snapshot(b.path()));
    assert_eq!(first.files.len(), table.records.len() + 1);
    assert!(first.csv.starts_with("name,det,signature,u1,uc1,cstar1,cstar:2,flags\n"));
}

#[test]
fn cold_and_warm_cache_agree() {
    let table = parse_table(&fixtures().join("knots.csv")).unwrap();
    let checks = Check::parse_list("u1,cstar1").unwrap();
    let work = tempfile::tempdir().unwrap();
    let cache = ProfileCache::open(work.path().join("cache")).unwrap();
    let plain = work.path().join("plain");
    let cold = work.path().join("cold");
    let warm = work.path().join("warm");
    run_report(&table.records, &checks, &plain, None).unwrap();
    run_report(&table.records, &checks, &cold, Some(&cache)).unwrap();
    let entries = snapshot(cache.dir());
    run_report(&table.records, &checks, &warm, Some(&cache)).unwrap();
    assert_eq!(snapshot(&cold), snapshot(&plain));
    assert_eq!(snapshot(&warm), snapshot(&plain));
    // Append-only: a warm run adds nothing and rewrites nothing.
    assert_eq!(snapshot(cache.dir()), entries);
    // One entry per distinct cover that some check needed; beyond |signature| 2 none is.
    let needed = table.records.iter().filter(|r| r.cover.is_known() && r.signature.abs() <= 2).count();
    assert_eq!(entries.len(), needed);
}

#[test]
fn uc_two_rows_are_obstructed() {
    let rows = [
        ("8_3", "0^6,2,0,2"),
        ("8_4", "0^5,2,0,2^3"),
        ("8_6", "0^7,2,0,2^3"),
        ("8_12", "0^8,2,0,2^4,4"),
        ("9_8", "0^7,2,0,2^4,4,2,4"),
    ];
    let records: Vec<KnotRecord> = rows.iter().map(|(n, _)| record(n)).collect();
    let out = tempfile::tempdir().unwrap();
    let summary = run_report(&records, &[Check::Uc1], out.path(), None).unwrap();
    for ((name, seq), report) in rows.iter().zip(&summary.reports) {
        let v = report.verdict(Check::Uc1).unwrap();
        assert!(v.obstructed(), "{name}");
        let seqs: Vec<String> = v.sequences.iter().map(|s| s.compact()).collect();
        assert_eq!(seqs, vec![seq.to_string()], "{name}");
        let text = fs::read_to_string(out.path().join(format!("{name}.txt"))).unwrap();
        assert!(text.contains(seq), "{name}");
    }
}

#[test]
fn synthetic_surgery_record_is_never_obstructed() {
    let out = tempfile::tempdir().unwrap();
    let checks = Check::parse_list("u1,uc1,cstar1,cstar:2").unwrap();
    let summary = run_report(&[record("model_13")], &checks, out.path(), None).unwrap();
    for (c, v) in &summary.reports[0].verdicts {
        let v = v.as_ref().unwrap();
        assert!(!v.obstructed(), "{c}");
    }
}

#[test]
fn crossing_number_two_batch() {
    let out = tempfile::tempdir().unwrap();
    let summary = run_report(&[record("9_10"), record("9_49")], &[Check::CstarK(2)], out.path(), None).unwrap();
    for r in &summary.reports {
        let v = r.verdict(Check::CstarK(2)).unwrap();
        assert!(v.obstructed() && v.exhaustive, "{}", r.record.name);
    }
    assert!(summary.csv.contains("9_10,33,4,obstructed,\n"));
    assert!(summary.csv.contains("9_49,25,4,obstructed,\n"));
}

#[test]
fn record_failures_are_isolated() {
    let base = fixtures();
    let text = "name,determinant,signature,cover_kind,cover_args\n\
                gone,9,0,goeritz,forms/missing.form\n\
                blank,25,0,none,\n\
                far,25,4,none,\n\
                8_3,17,0,lens,\"17,4\"\n";
    let table = parse_table_str(text, &base).unwrap();
    let out = tempfile::tempdir().unwrap();
    let summary = run_report(&table.records, &[Check::U1, Check::CstarK(2)], out.path(), None).unwrap();
    assert!(summary.reports[0].verdicts.iter().all(|(_, v)| v.is_err()));
    // No cover: checks that need a profile fail, the rest still run.
    assert!(summary.reports[1].verdicts.iter().all(|(_, v)| v.is_err()));
    assert!(summary.reports[2].verdicts.iter().all(|(_, v)| v.as_ref().is_ok_and(|v| v.obstructed())));
    assert!(summary.reports[3].verdict(Check::U1).unwrap().obstructed());
    let gone = fs::read_to_string(out.path().join("gone.txt")).unwrap();
    assert!(gone.contains("[u1] error"));
    assert!(summary.csv.lines().nth(1).unwrap().contains("u1: "));
}

#[test]
fn cover_specs_round_trip_through_the_table() {
    let table = parse_table(&fixtures().join("knots.csv")).unwrap();
    for r in &table.records {
        let again = CoverSpec::parse(&r.cover.to_string(), &fixtures()).unwrap();
        assert_eq!(again, r.cover, "{}", r.name);
    }
}
