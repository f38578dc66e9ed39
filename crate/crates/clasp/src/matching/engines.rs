use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use super::normalize::{normalize, Condition, NormalizedSeq};
use super::{Candidate, CheckedSpace, Engine, MatchVerdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{
    is_even_integer, isomorphisms, subgroup_epimorphisms, subgroups_of_order, FinAbGroup, GroupMap, Rational, Subgroup,
};
use crate::lattice::{min_square, MinTable, QuadForm};
use crate::profiles::{unknot_half_surgery_d, DProfile};
use crate::sign::Sign;

/// Searches for some order `rs` subgroup and epimorphism onto `Z/r` with every
/// difference a nonnegative even integer.
pub fn positive_even_subgroup_matching(p: &DProfile) -> Result<MatchVerdict> {
    run_engine(Engine::Subgroup, p, &[Sign::Plus])
}

/// An isomorphism onto `Z/r` satisfying positivity, evenness, symmetry, monotonicity and boundedness.
pub fn symmetric_monotone_matching(p: &DProfile) -> Result<MatchVerdict> {
    run_engine(Engine::SymmetricMonotone, p, &[Sign::Plus])
}

/// An epimorphism from an order `rs` subgroup onto `Z/r` whose fibers carry constant values,
/// with positive, even and monotone normalized sequence.
pub fn monotone_subgroup_matching(p: &DProfile) -> Result<MatchVerdict> {
    run_engine(Engine::MonotoneSubgroup, p, &[Sign::Plus])
}

/// Runs a fiber engine on `p` (for `Sign::Plus`) and on `-p` (for `Sign::Minus`).
pub fn run_engine(engine: Engine, p: &DProfile, signs: &[Sign]) -> Result<MatchVerdict> {
    if engine == Engine::Form {
        return Err(Error::Invalid("the form engine needs a quadratic form".into()));
    }
    let mut out: Option<MatchVerdict> = None;
    for &sign in signs {
        let oriented = orient(p, sign);
        let v = match engine {
            Engine::SymmetricMonotone => iso_search(&oriented, sign)?,
            _ => subgroup_search(engine, &oriented, sign)?,
        };
        out = Some(match out {
            Some(acc) => acc.merge(v),
            None => v,
        });
    }
    let mut v = out.ok_or_else(|| Error::Invalid("no orientation requested".into()))?;
    v.profile = p.label().to_string();
    Ok(v)
}

/// Compares `p` with the minimal squares of `q`. The determinant must match the group order.
pub fn form_obstruction(p: &DProfile, q: &QuadForm) -> Result<MatchVerdict> {
    let det = q.abs_det();
    if det != BigInt::from(p.order()) {
        return Err(Error::OrderMismatch { expected: p.order().to_string(), found: det.to_string() });
    }
    match_min_table(p, &min_square(q)?)
}

/// [`form_obstruction`] for a precomputed table. For a positive-definite form the condition is
/// `m_Q(j) - d(phi(j)) in 2Z_{>=0}`; for a negative-definite one, `d(phi(j)) - m_Q(j)`.
pub fn match_min_table(p: &DProfile, table: &MinTable) -> Result<MatchVerdict> {
    let n = p.order();
    if table.values().len() != n {
        return Err(Error::OrderMismatch { expected: n.to_string(), found: table.values().len().to_string() });
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n.to_string()));
    }
    let source = table.group();
    let isos = isomorphisms(source, p.group())?;
    let whole = Subgroup::whole(source)?;
    let sign = table.form().sign();
    let mut v = empty(Engine::Form, p, Sign::Plus);
    v.checked = CheckedSpace { factorizations: 1, subgroups: 1, maps: isos.len(), examined: 0 };
    if isos.is_empty() {
        v.notes.push(format!("coset group {source} is not isomorphic to {}", p.group()));
    }
    for (mi, phi) in isos.iter().enumerate() {
        if !is_canonical(phi) {
            continue;
        }
        v.checked.examined += 1;
        let differences = form_differences(p, table, phi, sign);
        let outcomes = vec![
            (Condition::Positivity, differences.iter().all(|d| !d.is_negative())),
            (Condition::Evenness, differences.iter().all(is_even_integer)),
        ];
        let cand = candidate(n as u64, 1, 0, mi, Sign::Plus, phi, outcomes);
        if cand.passed() {
            v.witnesses.push(Witness {
                r: n as u64,
                s: 1,
                sign: Sign::Plus,
                subgroup_index: 0,
                map_index: mi,
                subgroup: whole.clone(),
                map: phi.clone(),
                differences,
                sequence: None,
            });
        }
        v.candidates.push(cand);
    }
    Ok(v)
}

fn form_differences(p: &DProfile, table: &MinTable, phi: &GroupMap, sign: Sign) -> Vec<Rational> {
    let whole = Subgroup::whole(table.group()).expect("table group is enumerable");
    whole
        .members()
        .iter()
        .map(|(x, _)| {
            let diff = table.value(x) - p.value(&phi.apply(x));
            if sign == Sign::Plus {
                diff
            } else {
                -diff
            }
        })
        .collect()
}

fn orient(p: &DProfile, sign: Sign) -> DProfile {
    match sign {
        Sign::Plus => p.clone(),
        Sign::Minus => p.negate(),
    }
}

fn empty(engine: Engine, p: &DProfile, sign: Sign) -> MatchVerdict {
    MatchVerdict {
        engine,
        profile: p.label().to_string(),
        signs: vec![sign],
        witnesses: Vec::new(),
        candidates: Vec::new(),
        checked: CheckedSpace::default(),
        notes: Vec::new(),
    }
}

/// Keeps one of `phi` and `-phi`.
fn is_canonical(phi: &GroupMap) -> bool {
    phi.images() <= phi.negated().images()
}

fn candidate(
    r: u64,
    s: u64,
    subgroup: usize,
    map: usize,
    sign: Sign,
    phi: &GroupMap,
    outcomes: Vec<(Condition, bool)>,
) -> Candidate {
    Candidate { r, s, subgroup, map, sign, images: phi.images().to_vec(), outcomes }
}

/// Pairs `(r, s)` with `r s^2 = n`, by increasing `r`.
pub(crate) fn factorizations(n: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> =
        (1..).take_while(|s| s * s <= n).filter(|s| n.is_multiple_of(s * s)).map(|s| (n / (s * s), s)).collect();
    out.sort();
    out
}

fn subgroup_search(engine: Engine, p: &DProfile, sign: Sign) -> Result<MatchVerdict> {
    let n = p.order() as u64;
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n.to_string()));
    }
    let mut v = empty(engine, p, sign);
    let facts = factorizations(n);
    v.checked.factorizations = facts.len();
    let mut jobs = Vec::new();
    for &(r, s) in &facts {
        let subgroups = subgroups_of_order(p.group(), r * s)?;
        v.checked.subgroups += subgroups.len();
        jobs.extend(subgroups.into_iter().enumerate().map(|(hi, h)| (r, s, hi, h)));
    }
    let parts = jobs
        .par_iter()
        .map(|(r, s, hi, h)| examine_subgroup(engine, p, sign, *r, *s, *hi, h))
        .collect::<Result<Vec<_>>>()?;
    for part in parts {
        v.checked.maps += part.maps;
        v.checked.examined += part.examined;
        v.candidates.extend(part.candidates);
        v.witnesses.extend(part.witnesses);
    }
    Ok(v)
}

struct Part {
    maps: usize,
    examined: usize,
    candidates: Vec<Candidate>,
    witnesses: Vec<Witness>,
}

/// Differences `d(S^3_{r/2}(O), phi(t)) - d(t)` per member, and the fiber values if constant.
fn fiber_data(
    p: &DProfile,
    h: &Subgroup,
    phi: &GroupMap,
    model: &[Rational],
) -> (Vec<Rational>, Option<Vec<Rational>>) {
    let r = model.len();
    let mut fiber: Vec<Option<&Rational>> = vec![None; r];
    let mut constant = true;
    let mut differences = Vec::with_capacity(h.order());
    for (x, c) in h.members() {
        let i = phi.apply_cyclic(c) as usize;
        let d = p.value(x);
        differences.push(&model[i] - d);
        match fiber[i] {
            None => fiber[i] = Some(d),
            Some(f) if f != d => constant = false,
            Some(_) => {}
        }
    }
    let values = if constant { fiber.into_iter().map(|f| f.cloned()).collect::<Option<Vec<_>>>() } else { None };
    (differences, values)
}

fn examine_subgroup(engine: Engine, p: &DProfile, sign: Sign, r: u64, s: u64, hi: usize, h: &Subgroup) -> Result<Part> {
    let model = unknot_half_surgery_d(r)?;
    let maps = subgroup_epimorphisms(h, r);
    let mut part = Part { maps: maps.len(), examined: 0, candidates: Vec::new(), witnesses: Vec::new() };
    for (mi, phi) in maps.iter().enumerate() {
        if !is_canonical(phi) {
            continue;
        }
        part.examined += 1;
        let (differences, fiber_values) = fiber_data(p, h, phi, model.values());
        let sequence = fiber_values.map(|vals| normalize(&vals, r)).transpose()?;
        let outcomes = match engine {
            Engine::Subgroup => vec![
                (Condition::Positivity, differences.iter().all(|d| !d.is_negative())),
                (Condition::Evenness, differences.iter().all(is_even_integer)),
            ],
            _ => sequence_outcomes(engine, sequence.as_ref()),
        };
        let cand = candidate(r, s, hi, mi, sign, phi, outcomes);
        if cand.passed() {
            part.witnesses.push(Witness {
                r,
                s,
                sign,
                subgroup_index: hi,
                map_index: mi,
                subgroup: h.clone(),
                map: phi.clone(),
                differences,
                sequence,
            });
        }
        part.candidates.push(cand);
    }
    Ok(part)
}

fn sequence_outcomes(engine: Engine, seq: Option<&NormalizedSeq>) -> Vec<(Condition, bool)> {
    let mut out = Vec::new();
    for &c in engine.conditions() {
        match (c, seq) {
            (Condition::FiberConstancy, _) => out.push((c, seq.is_some())),
            (_, Some(seq)) => out.push((c, seq.holds(c))),
            (_, None) => break,
        }
    }
    out
}

fn iso_search(p: &DProfile, sign: Sign) -> Result<MatchVerdict> {
    let g = p.group();
    let n = p.order() as u64;
    let mut v = empty(Engine::SymmetricMonotone, p, sign);
    if n.is_multiple_of(2) || g.rank() > 1 {
        v.notes.push(format!("{g} is not cyclic of odd order"));
        return Ok(v);
    }
    let target = FinAbGroup::cyclic(n);
    let isos = isomorphisms(g, &target)?;
    let whole = Subgroup::whole(g)?;
    let model = unknot_half_surgery_d(n)?;
    v.checked = CheckedSpace { factorizations: 1, subgroups: 1, maps: isos.len(), examined: 0 };
    for (mi, phi) in isos.iter().enumerate() {
        if !is_canonical(phi) {
            continue;
        }
        v.checked.examined += 1;
        let (differences, seq) = cyclic_data(p, &whole, phi, model.values())?;
        let outcomes = sequence_outcomes(Engine::SymmetricMonotone, Some(&seq));
        let cand = candidate(n, 1, 0, mi, sign, phi, outcomes);
        if cand.passed() {
            v.witnesses.push(Witness {
                r: n,
                s: 1,
                sign,
                subgroup_index: 0,
                map_index: mi,
                subgroup: whole.clone(),
                map: phi.clone(),
                differences,
                sequence: Some(seq),
            });
        }
        v.candidates.push(cand);
    }
    Ok(v)
}

/// Values transported along an isomorphism `phi: G -> Z/r`, with per-member differences.
fn cyclic_data(
    p: &DProfile,
    whole: &Subgroup,
    phi: &GroupMap,
    model: &[Rational],
) -> Result<(Vec<Rational>, NormalizedSeq)> {
    let r = model.len();
    let mut vals: Vec<Option<Rational>> = vec![None; r];
    let mut differences = Vec::with_capacity(r);
    for (x, _) in whole.members() {
        let i = phi.apply_cyclic(x) as usize;
        differences.push(&model[i] - p.value(x));
        vals[i] = Some(p.value(x).clone());
    }
    let vals =
        vals.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Invalid("map is not bijective".into()))?;
    Ok((differences, normalize(&vals, r as u64)?))
}

impl Witness {
    /// Re-checks a fiber-engine witness against `p` from its subgroup and map alone.
    pub fn replay(&self, engine: Engine, p: &DProfile) -> Result<bool> {
        let oriented = orient(p, self.sign);
        let model = unknot_half_surgery_d(self.r)?;
        match engine {
            Engine::Subgroup => {
                let (diffs, _) = fiber_data(&oriented, &self.subgroup, &self.map, model.values());
                Ok(self.map.is_surjective()
                    && self.subgroup.order() as u64 == self.r * self.s
                    && diffs.iter().all(|d| !d.is_negative() && is_even_integer(d)))
            }
            Engine::MonotoneSubgroup => {
                let (_, vals) = fiber_data(&oriented, &self.subgroup, &self.map, model.values());
                let Some(vals) = vals else { return Ok(false) };
                let seq = normalize(&vals, self.r)?;
                Ok(self.map.is_surjective()
                    && self.subgroup.order() as u64 == self.r * self.s
                    && engine.conditions().iter().all(|&c| seq.holds(c)))
            }
            Engine::SymmetricMonotone => {
                let whole = Subgroup::whole(oriented.group())?;
                let (_, seq) = cyclic_data(&oriented, &whole, &self.map, model.values())?;
                Ok(engine.conditions().iter().all(|&c| seq.holds(c)))
            }
            Engine::Form => Err(Error::Invalid("form witnesses replay against a table".into())),
        }
    }

    /// Re-checks a form witness.
    pub fn replay_form(&self, p: &DProfile, table: &MinTable) -> bool {
        self.map.is_injective()
            && form_differences(p, table, &self.map, table.form().sign())
                .iter()
                .all(|d| !d.is_negative() && is_even_integer(d))
    }

    /// The multiplier `u` of a map `Z/n -> Z/r` with `phi(1) = u`.
    pub fn multiplier(&self) -> Option<u64> {
        match self.map.images() {
            [img] => img.first().copied().or(Some(0)),
            _ => None,
        }
    }
}
