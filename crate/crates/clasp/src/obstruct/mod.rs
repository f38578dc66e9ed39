//! Knot-level verdicts: unknotting number one, concordance unknotting number one, four-ball
//! crossing number one and `c* <= k`, plus Levine-Tristram signatures.

mod checks;
mod cover;
mod signature;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::QuadForm;
use crate::matching::{MatchVerdict, NormalizedSeq};
use crate::profiles::DProfile;
use crate::sign::Sign;

pub use checks::{dispatch_signs, LazyProfile};
pub use cover::{CoverSpec, FileRef, COVER_KINDS};
pub use signature::{knot_determinant, levine_tristram, levine_tristram_matrix, torus_signature, LtValue, SeifertData};

/// A knot with the data the obstructions need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub determinant: u64,
    pub signature: i64,
    pub cover: CoverSpec,
    pub unknotting: Option<String>,
    pub slice_genus: Option<String>,
    pub notes: String,
}

impl KnotRecord {
    /// Checks that the determinant is odd, the signature even, and that `det = 1 mod 4`
    /// exactly when `signature = 0 mod 4`, as holds for every knot.
    pub fn new(name: impl Into<String>, determinant: u64, signature: i64, cover: CoverSpec) -> Result<KnotRecord> {
        if determinant.is_multiple_of(2) {
            return Err(Error::EvenOrder(determinant.to_string()));
        }
        if signature % 2 != 0 {
            return Err(Error::Invalid(format!("signature {signature} is odd")));
        }
        if (determinant % 4 == 1) != (signature % 4 == 0) {
            return Err(Error::Invalid(format!("determinant {determinant} and signature {signature} disagree mod 4")));
        }
        Ok(KnotRecord {
            name: name.into(),
            determinant,
            signature,
            cover,
            unknotting: None,
            slice_genus: None,
            notes: String::new(),
        })
    }

    /// The mirror image: reversed cover, negated signature.
    pub fn mirror(&self) -> KnotRecord {
        KnotRecord {
            name: format!("{}*", self.name),
            signature: -self.signature,
            cover: self.cover.mirror(),
            ..self.clone()
        }
    }
}

/// Resolves the cover and checks it against the determinant.
pub fn resolve_profile(rec: &KnotRecord) -> Result<DProfile> {
    if !rec.cover.is_known() {
        return Err(Error::Unsupported(format!("no cover data for {}", rec.name)));
    }
    let p = rec.cover.resolve()?;
    validate_profile(rec, &p)?;
    Ok(p)
}

pub(crate) fn validate_profile(rec: &KnotRecord, p: &DProfile) -> Result<()> {
    if p.order() as u64 != rec.determinant {
        return Err(Error::OrderMismatch { expected: rec.determinant.to_string(), found: p.order().to_string() });
    }
    if p.order().is_multiple_of(2) {
        return Err(Error::EvenOrder(p.order().to_string()));
    }
    Ok(())
}

/// A requested obstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// `u(K) = 1`.
    U1,
    /// `u_c(K) = 1`.
    Uc1,
    /// `c*(K) = 1`.
    Cstar1,
    /// `c*(K) <= k`.
    CstarK(usize),
}

impl Check {
    /// Parses a comma-separated list such as `u1,uc1,cstar1,cstar:2`.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out: Vec<Check> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let c: Check = part.parse()?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::U1 => f.write_str("u1"),
            Check::Uc1 => f.write_str("uc1"),
            Check::Cstar1 => f.write_str("cstar1"),
            Check::CstarK(k) => write!(f, "cstar:{k}"),
        }
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Check> {
        match s.trim() {
            "u1" => Ok(Check::U1),
            "uc1" => Ok(Check::Uc1),
            "cstar1" => Ok(Check::Cstar1),
            other => {
                let k = other
                    .strip_prefix("cstar:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::Invalid(format!("unknown check {other:?}")))?;
                Ok(Check::CstarK(k))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Obstructed,
    NotObstructed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Obstructed => "obstructed",
            Status::NotObstructed => "not_obstructed",
        })
    }
}

/// Forms of one determinant tried for one split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTrial {
    /// `(r+, r-)`.
    pub split: (i64, i64),
    /// Determinant of the forms, with `det K = det * s^2`.
    pub det: u64,
    pub s: u64,
    /// Number of forms enumerated.
    pub candidates: usize,
    /// Each tested form with its comparison.
    pub forms: Vec<(QuadForm, MatchVerdict)>,
    /// Forms exist but were not tested.
    pub skipped: bool,
    /// Pairs of forms whose congruence was left undecided; they are tested separately.
    pub undecided: usize,
}

/// What a verdict rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// The classical bound `|signature|/2`.
    Signature,
    /// An exhaustive engine search.
    Search(MatchVerdict),
    /// Enumerated forms and their comparisons.
    Forms(Vec<FormTrial>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: Check,
    pub status: Status,
    /// Orientations of the cover that were tested.
    pub signs: Vec<Sign>,
    /// False when part of the search space was skipped.
    pub exhaustive: bool,
    pub summary: String,
    pub evidence: Evidence,
    /// For failed sequence searches: normalized sequences of positive even matchings.
    pub sequences: Vec<NormalizedSeq>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn obstructed(&self) -> bool {
        self.status == Status::Obstructed
    }

    pub fn search(&self) -> Option<&MatchVerdict> {
        match &self.evidence {
            Evidence::Search(m) => Some(m),
            _ => None,
        }
    }

    /// Summary cell: the status, marked when not exhaustive.
    pub fn cell(&self) -> String {
        if self.exhaustive {
            self.status.to_string()
        } else {
            format!("{} (not exhaustive)", self.status)
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[{}] {}", self.check, self.cell());
        let _ = writeln!(out, "  reason: {}", self.summary);
        if !self.signs.is_empty() {
            let signs: Vec<String> = self.signs.iter().map(|s| format!("{s}Y")).collect();
            let _ = writeln!(out, "  orientations: {}", signs.join(", "));
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        if !self.sequences.is_empty() {
            let seqs: Vec<String> = self.sequences.iter().map(NormalizedSeq::compact).collect();
            let _ = writeln!(out, "  positive even sequences: {}", seqs.join(" | "));
        }
        match &self.evidence {
            Evidence::Signature => {}
            Evidence::Search(m) => indent(&mut out, &m.to_text()),
            Evidence::Forms(trials) => {
                for t in trials {
                    let _ = write!(
                        out,
                        "  split r+={} r-={}, det {} (s = {}): {} form(s)",
                        t.split.0, t.split.1, t.det, t.s, t.candidates
                    );
                    if t.skipped {
                        let _ = write!(out, ", skipped");
                    }
                    if t.undecided > 0 {
                        let _ = write!(out, ", {} congruence pair(s) undecided", t.undecided);
                    }
                    out.push('\n');
                    for (q, v) in &t.forms {
                        let rows: Vec<String> = q.matrix().to_string().lines().map(|l| l.trim().to_string()).collect();
                        let _ = writeln!(
                            out,
                            "    form [{}]: {}",
                            rows.join("; "),
                            if v.found() { "matches" } else { "fails" }
                        );
                    }
                }
            }
        }
        out
    }
}

fn indent(out: &mut String, text: &str) {
    for line in text.lines() {
        let _ = writeln!(out, "    {line}");
    }
}

/// All verdicts for one knot. Failed checks keep their error message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub record: KnotRecord,
    pub verdicts: Vec<(Check, std::result::Result<Verdict, String>)>,
}

impl ObstructionReport {
    pub fn verdict(&self, c: Check) -> Option<&Verdict> {
        self.verdicts.iter().find(|(k, _)| *k == c).and_then(|(_, v)| v.as_ref().ok())
    }

    pub fn to_text(&self) -> String {
        let r = &self.record;
        let mut out = String::new();
        let _ = writeln!(out, "knot: {}", r.name);
        let _ = writeln!(out, "determinant: {}", r.determinant);
        let _ = writeln!(out, "signature: {}", r.signature);
        let _ = writeln!(out, "cover: {}", r.cover);
        if let Some(u) = &r.unknotting {
            let _ = writeln!(out, "u: {u}");
        }
        if let Some(g) = &r.slice_genus {
            let _ = writeln!(out, "g4: {g}");
        }
        if !r.notes.is_empty() {
            let _ = writeln!(out, "notes: {}", r.notes);
        }
        for (c, v) in &self.verdicts {
            out.push('\n');
            match v {
                Ok(v) => out.push_str(&v.to_text()),
                Err(e) => {
                    let _ = writeln!(out, "[{c}] error\n  reason: {e}");
                }
            }
        }
        out
    }

    /// One CSV cell per check, in request order.
    pub fn cells(&self) -> Vec<String> {
        self.verdicts
            .iter()
            .map(|(_, v)| match v {
                Ok(v) => v.cell(),
                Err(_) => "error".to_string(),
            })
            .collect()
    }
}

/// Runs every check against a record, resolving the profile with `resolver` at most once.
pub fn analyze(
    rec: &KnotRecord,
    checks: &[Check],
    resolver: &(dyn Fn(&KnotRecord) -> Result<DProfile> + Sync),
) -> ObstructionReport {
    let mut lazy = LazyProfile::new(resolver);
    let verdicts =
        checks.iter().map(|&c| (c, checks::matching_check(c, rec, &mut lazy).map_err(|e| e.to_string()))).collect();
    ObstructionReport { record: rec.clone(), verdicts }
}

/// `u(K) = 1` via symmetric monotone matchings, with the signature dispatch.
pub fn check_u1(rec: &KnotRecord) -> Result<Verdict> {
    checks::matching_check(Check::U1, rec, &mut LazyProfile::new(&resolve_profile))
}

/// `u_c(K) = 1` via monotone subgroup matchings.
pub fn check_uc1(rec: &KnotRecord) -> Result<Verdict> {
    checks::matching_check(Check::Uc1, rec, &mut LazyProfile::new(&resolve_profile))
}

/// `c*(K) = 1` via positive even subgroup matchings.
pub fn check_cstar1(rec: &KnotRecord) -> Result<Verdict> {
    checks::matching_check(Check::Cstar1, rec, &mut LazyProfile::new(&resolve_profile))
}

/// `c*(K) <= k` via forms of half-integer surgery type. `splits` lists `(r+, r-)` pairs;
/// the default is `(k - |signature|/2, |signature|/2)`.
pub fn check_cstar_k(rec: &KnotRecord, k: usize, splits: Option<&[(i64, i64)]>) -> Result<Verdict> {
    checks::cstar_k(rec, k, splits, &mut LazyProfile::new(&resolve_profile))
}
