use super::{Check, Evidence, FormTrial, KnotRecord, Status, Verdict};
use crate::error::{Error, Result};
use crate::lattice::enumerate_half_integer_forms_detailed;
use crate::matching::{form_obstruction, run_engine, square_factorizations, Engine, NormalizedSeq};
use crate::profiles::DProfile;
use crate::sign::Sign;

/// Resolves a record's profile at most once, and only when a check needs it.
pub struct LazyProfile<'a> {
    resolver: &'a (dyn Fn(&KnotRecord) -> Result<DProfile> + Sync),
    value: Option<DProfile>,
}

impl<'a> LazyProfile<'a> {
    pub fn new(resolver: &'a (dyn Fn(&KnotRecord) -> Result<DProfile> + Sync)) -> Self {
        LazyProfile { resolver, value: None }
    }

    pub fn get(&mut self, rec: &KnotRecord) -> Result<&DProfile> {
        if self.value.is_none() {
            self.value = Some((self.resolver)(rec)?);
        }
        Ok(self.value.as_ref().expect("just resolved"))
    }
}

/// `+` for signature `>= 0`, `-` (the mirror) otherwise.
fn orientation(signature: i64) -> Sign {
    if signature >= 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Orientations tested for a knot of signature `0` or `+-2`.
pub fn dispatch_signs(signature: i64) -> Vec<Sign> {
    if signature == 0 {
        vec![Sign::Plus, Sign::Minus]
    } else {
        vec![orientation(signature)]
    }
}

fn signature_verdict(check: Check, rec: &KnotRecord, bound: i64) -> Verdict {
    Verdict {
        check,
        status: Status::Obstructed,
        signs: Vec::new(),
        exhaustive: true,
        summary: format!("|signature|/2 = {} exceeds {bound}", rec.signature.abs() / 2),
        evidence: Evidence::Signature,
        sequences: Vec::new(),
        notes: Vec::new(),
    }
}

/// Runs one of the three matching checks with the signature dispatch.
pub(crate) fn matching_check(check: Check, rec: &KnotRecord, lazy: &mut LazyProfile<'_>) -> Result<Verdict> {
    let engine = match check {
        Check::U1 => Engine::SymmetricMonotone,
        Check::Uc1 => Engine::MonotoneSubgroup,
        Check::Cstar1 => Engine::Subgroup,
        Check::CstarK(k) => return cstar_k(rec, k, None, lazy),
    };
    if rec.signature.abs() > 2 {
        return Ok(signature_verdict(check, rec, 1));
    }
    let signs = dispatch_signs(rec.signature);
    let p = lazy.get(rec)?;
    let search = run_engine(engine, p, &signs)?;
    let found = search.found();
    // For failed sequence engines, record what the weaker subgroup condition does find.
    let sequences = if !found && engine != Engine::Subgroup { near_misses(p, &signs)? } else { Vec::new() };
    let orient: Vec<String> = signs.iter().map(|s| format!("{s}Y")).collect();
    let summary = if found {
        format!("{} found on {}", engine.name(), orient.join(" and "))
    } else {
        format!("no {} on {}", engine.name(), orient.join(" or "))
    };
    Ok(Verdict {
        check,
        status: if found { Status::NotObstructed } else { Status::Obstructed },
        signs,
        exhaustive: true,
        summary,
        notes: search.notes.clone(),
        evidence: Evidence::Search(search),
        sequences,
    })
}

/// Normalized sequences of positive even matchings constant on fibers.
fn near_misses(p: &DProfile, signs: &[Sign]) -> Result<Vec<NormalizedSeq>> {
    let v = run_engine(Engine::Subgroup, p, signs)?;
    Ok(v.witness_sequences().into_iter().cloned().collect())
}

fn default_splits(k: usize, signature: i64) -> Option<Vec<(i64, i64)>> {
    let neg = signature.abs() / 2;
    let pos = k as i64 - neg;
    (pos >= 0).then(|| vec![(pos, neg)])
}

pub(crate) fn cstar_k(
    rec: &KnotRecord,
    k: usize,
    splits: Option<&[(i64, i64)]>,
    lazy: &mut LazyProfile<'_>,
) -> Result<Verdict> {
    let check = Check::CstarK(k);
    if k == 0 {
        return Err(Error::Invalid("c* >= k needs k >= 1".into()));
    }
    let splits: Vec<(i64, i64)> = match splits {
        Some(s) => s.to_vec(),
        None => match default_splits(k, rec.signature) {
            Some(s) => s,
            None => return Ok(signature_verdict(check, rec, k as i64)),
        },
    };
    let mut notes = Vec::new();
    for &(pos, neg) in &splits {
        if pos < 0 || neg < 0 {
            return Err(Error::Invalid(format!("split ({pos},{neg}) has a negative count")));
        }
        if (pos + neg) as usize != k {
            return Err(Error::Invalid(format!("split ({pos},{neg}) does not add up to k = {k}")));
        }
        if neg != rec.signature.abs() / 2 {
            notes.push(format!("split ({pos},{neg}) differs from r- = |signature|/2 = {}", rec.signature.abs() / 2));
        }
    }
    let sign = orientation(rec.signature);
    let mut trials = Vec::new();
    let mut witness_found = false;
    let mut skipped = false;
    for &(pos, neg) in &splits {
        for (det, s) in square_factorizations(rec.determinant) {
            let found = enumerate_half_integer_forms_detailed(k, det, pos as usize)?;
            let mut trial = FormTrial {
                split: (pos, neg),
                det,
                s,
                forms: Vec::new(),
                candidates: found.forms.len(),
                skipped: false,
                undecided: found.undecided.len(),
            };
            if !found.forms.is_empty() {
                if s > 1 {
                    trial.skipped = true;
                    skipped = true;
                } else {
                    let p = lazy.get(rec)?;
                    let oriented = if sign == Sign::Plus { p.clone() } else { p.negate() };
                    for q in found.forms {
                        let v = form_obstruction(&oriented, &q)?;
                        witness_found |= v.found();
                        trial.forms.push((q, v));
                    }
                }
            }
            trials.push(trial);
        }
    }
    if skipped {
        notes.push("forms with a square quotient s > 1 were not tested; not fully exhaustive".into());
    }
    let status = if witness_found || skipped { Status::NotObstructed } else { Status::Obstructed };
    let summary = match status {
        Status::Obstructed => format!("no form of rank {} matches {}Y", 2 * k, sign),
        Status::NotObstructed if witness_found => format!("some form of rank {} matches {}Y", 2 * k, sign),
        Status::NotObstructed => "undecided: untested forms remain".to_string(),
    };
    Ok(Verdict {
        check,
        status,
        signs: vec![sign],
        exhaustive: !skipped,
        summary,
        evidence: Evidence::Forms(trials),
        sequences: Vec::new(),
        notes,
    })
}
