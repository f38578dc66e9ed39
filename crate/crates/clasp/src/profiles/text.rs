use std::fmt::Write as _;

use super::DProfile;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Elem, FinAbGroup, Rational};

impl DProfile {
    /// Canonical text form: `group: d1,d2,...` then `a1,...,am : num/den` per element.
    pub fn to_text(&self) -> String {
        write_table(&self.group, &self.values)
    }

    /// Parses [`DProfile::to_text`] output. Element lines may come in any order but every
    /// element must appear exactly once.
    pub fn from_text(text: &str, label: impl Into<String>) -> Result<DProfile> {
        let (group, values) = read_table(text)?;
        DProfile::new(group, values, label)
    }
}

pub(crate) fn write_table(group: &FinAbGroup, values: &[Rational]) -> String {
    let factors: Vec<String> = group.factors().iter().map(u64::to_string).collect();
    let mut out = format!("group: {}\n", factors.join(","));
    for (e, v) in group.elements().zip(values) {
        let coords: Vec<String> = e.iter().map(u64::to_string).collect();
        writeln!(out, "{} : {}", coords.join(","), format_rational(v)).expect("writing to a String");
    }
    out
}

pub(crate) fn read_table(text: &str) -> Result<(FinAbGroup, Vec<Rational>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing `group:` header"))?;
    let rest =
        header.strip_prefix("group:").ok_or_else(|| Error::parse(hline + 1, 1, "expected `group: d1,d2,...`"))?;
    let factors = parse_list(rest, hline + 1, "group:".len() + 1)?;
    let group = FinAbGroup::new(factors).map_err(|e| Error::parse(hline + 1, 8, e.to_string()))?;
    let n = group.enumerable_order()?;
    let mut values: Vec<Option<Rational>> = vec![None; n];
    for (k, line) in lines {
        let line_no = k + 1;
        let (lhs, rhs) =
            line.split_once(':').ok_or_else(|| Error::parse(line_no, 1, "expected `a1,...,am : num/den`"))?;
        let elem: Elem = parse_list(lhs, line_no, 1)?;
        if !group.contains(&elem) {
            return Err(Error::parse(line_no, 1, format!("{elem:?} is not an element of {group}")));
        }
        let v = parse_rational(rhs).map_err(|e| Error::parse(line_no, lhs.len() + 2, e.to_string()))?;
        let slot = &mut values[group.index_of(&elem)];
        if slot.is_some() {
            return Err(Error::parse(line_no, 1, format!("element {elem:?} listed twice")));
        }
        *slot = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::parse(hline + 1, 1, format!("no value for element {:?}", group.elem_at(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((group, values))
}

fn parse_list(s: &str, line: usize, column: usize) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::parse(line, column, format!("not an integer: {t:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{lens_d, Orientation};

    #[test]
    fn round_trip_is_bit_exact() {
        let p = lens_d(33, 23, Orientation::Standard).unwrap();
        let text = p.to_text();
        let q = DProfile::from_text(&text, "copy").unwrap();
        assert_eq!(q, p);
        assert_eq!(q.to_text(), text);
    }

    #[test]
    fn trivial_group_format() {
        let s = DProfile::sphere().to_text();
        assert_eq!(s, "group: \n : 0/1\n");
        assert_eq!(DProfile::from_text(&s, "S3").unwrap(), DProfile::sphere());
    }

    #[test]
    fn located_errors() {
        let err = DProfile::from_text("group: 3\n0 : 0/1\n1 : 1/x\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = DProfile::from_text("group: 3\n0 : 0/1\n1 : 1/3\n1 : 1/3\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        assert!(DProfile::from_text("group: 3\n0 : 0/1\n", "bad").is_err());
        assert!(DProfile::from_text("grp: 3\n", "bad").is_err());
    }
}
