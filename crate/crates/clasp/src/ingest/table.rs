use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::obstruct::{CoverSpec, KnotRecord};

const REQUIRED: [&str; 5] = ["name", "determinant", "signature", "cover_kind", "cover_args"];
const OPTIONAL: [&str; 3] = ["u", "g4", "notes"];

/// Parsed knot table.
#[derive(Clone, Debug, Default)]
pub struct KnotTable {
    pub records: Vec<KnotRecord>,
    /// Non-fatal findings such as unknown columns.
    pub warnings: Vec<String>,
}

/// Reads a knot table. Cover files resolve relative to the table's directory.
pub fn parse_table(path: &Path) -> Result<KnotTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_table_str(&text, base)
}

/// [`parse_table`] on in-memory text.
pub fn parse_table_str(text: &str, base: &Path) -> Result<KnotTable> {
    let mut out = KnotTable::default();
    if text.trim().is_empty() {
        return Ok(out);
    }
    check_quotes(text)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let index = |col: &str| names.iter().position(|h| *h == col);
    let mut cols = Vec::new();
    for col in REQUIRED {
        let i = index(col).ok_or_else(|| Error::parse(1, 1, format!("missing required column {col:?}")))?;
        cols.push(i);
    }
    let opt: Vec<Option<usize>> = OPTIONAL.iter().map(|c| index(c)).collect();
    for (i, h) in names.iter().enumerate() {
        if !REQUIRED.contains(h) && !OPTIONAL.contains(h) {
            out.warnings.push(format!("line 1, column {}: unknown column {h:?} ignored", i + 1));
        }
        if names[..i].contains(h) {
            return Err(Error::parse(1, i + 1, format!("duplicate column {h:?}")));
        }
    }
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(&e, 0))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| row.get(i).unwrap_or("").trim();
        let at = |i: usize, msg: String| Error::parse(line, i + 1, msg);

        let name = field(cols[0]);
        if name.is_empty() {
            return Err(at(cols[0], "empty knot name".into()));
        }
        if !seen.insert(super::file_stem(name)) {
            return Err(at(cols[0], format!("duplicate knot name {name:?}")));
        }
        let det: u64 = field(cols[1])
            .parse()
            .map_err(|_| at(cols[1], format!("determinant {:?} is not a positive integer", field(cols[1]))))?;
        if det.is_multiple_of(2) {
            return Err(at(cols[1], format!("determinant {det} is not odd")));
        }
        let sig: i64 = field(cols[2])
            .parse()
            .map_err(|_| at(cols[2], format!("signature {:?} is not an integer", field(cols[2]))))?;
        if sig % 2 != 0 {
            return Err(at(cols[2], format!("signature {sig} is not even")));
        }
        if (det % 4 == 1) != (sig % 4 == 0) {
            return Err(at(cols[2], format!("signature {sig} is inconsistent with determinant {det} mod 4")));
        }
        let kind = field(cols[3]);
        let cover = CoverSpec::from_parts(kind, field(cols[4]), base).map_err(|e| {
            let col = if crate::obstruct::COVER_KINDS.contains(&kind) { cols[4] } else { cols[3] };
            at(col, e.to_string())
        })?;
        let mut rec = KnotRecord::new(name, det, sig, cover).map_err(|e| at(cols[1], e.to_string()))?;
        let optional = |k: usize| opt[k].map(field).filter(|s| !s.is_empty()).map(str::to_string);
        rec.unknotting = optional(0);
        rec.slice_genus = optional(1);
        rec.notes = optional(2).unwrap_or_default();
        out.records.push(rec);
    }
    Ok(out)
}

/// The csv reader accepts a quote left open until end of input; report it at the opening field.
fn check_quotes(text: &str) -> Result<()> {
    let (mut line, mut field) = (1, 1);
    let mut open = None;
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if open.is_some() => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                } else {
                    open = None;
                }
            }
            '"' => open = Some((line, field)),
            ',' if open.is_none() => field += 1,
            '\n' => {
                line += 1;
                if open.is_none() {
                    field = 1;
                }
            }
            _ => {}
        }
    }
    match open {
        Some((line, field)) => Err(Error::parse(line, field, "unterminated quoted field")),
        None => Ok(()),
    }
}

fn csv_error(e: &csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    let column = match e.kind() {
        csv::ErrorKind::UnequalLengths { len, .. } => *len as usize + 1,
        _ => 1,
    };
    Error::parse(line, column, e.to_string())
}
