//! Knot tables, the profile cache and batch reports.

mod cache;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::obstruct::{analyze, resolve_profile, Check, KnotRecord, ObstructionReport};

pub use cache::ProfileCache;
pub use table::{parse_table, parse_table_str, KnotTable};

/// Outcome of [`run_report`].
#[derive(Clone, Debug)]
pub struct ReportSummary {
    pub reports: Vec<ObstructionReport>,
    /// Contents of `summary.csv`.
    pub csv: String,
    /// Every file written, in order.
    pub files: Vec<PathBuf>,
}

/// File name for a knot: ASCII letters, digits, `_`, `-`, `.` and `#` kept; `*` becomes
/// `_mirror`; anything else becomes `_`.
pub fn file_stem(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars() {
        match ch {
            c if c.is_ascii_alphanumeric() || "_-.#".contains(c) => out.push(c),
            '*' => out.push_str("_mirror"),
            _ => out.push('_'),
        }
    }
    out
}

/// Runs `checks` on every record, in parallel, and writes `<knot>.txt` per record plus
/// `summary.csv` to `out_dir`. Failures inside a record are reported in its file and in the
/// summary; they do not stop the batch.
pub fn run_report(
    records: &[KnotRecord],
    checks: &[Check],
    out_dir: &Path,
    cache: Option<&ProfileCache>,
) -> Result<ReportSummary> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let resolver = |rec: &KnotRecord| match cache {
        Some(c) => c.resolve(rec),
        None => resolve_profile(rec),
    };
    let reports: Vec<ObstructionReport> = records.par_iter().map(|rec| analyze(rec, checks, &resolver)).collect();
    let mut files = Vec::new();
    for r in &reports {
        let path = out_dir.join(format!("{}.txt", file_stem(&r.record.name)));
        fs::write(&path, r.to_text()).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    let csv = summary_csv(&reports, checks)?;
    let path = out_dir.join("summary.csv");
    fs::write(&path, &csv).map_err(|e| Error::io(&path, e))?;
    files.push(path);
    Ok(ReportSummary { reports, csv, files })
}

fn summary_csv(reports: &[ObstructionReport], checks: &[Check]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["name".into(), "det".into(), "signature".into()];
    header.extend(checks.iter().map(Check::to_string));
    header.push("flags".into());
    let csv_err = |e: csv::Error| Error::Invalid(format!("writing summary: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for r in reports {
        let mut row = vec![r.record.name.clone(), r.record.determinant.to_string(), r.record.signature.to_string()];
        row.extend(r.cells());
        let mut flags = Vec::new();
        for (c, v) in &r.verdicts {
            match v {
                Ok(v) if !v.exhaustive => flags.push(format!("{c}: not exhaustive")),
                Err(e) => flags.push(format!("{c}: {e}")),
                _ => {}
            }
        }
        row.push(flags.join("; "));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("writing summary: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}
