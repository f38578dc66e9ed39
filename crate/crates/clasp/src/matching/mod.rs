//! Matching engines: searches for subgroups and maps that line the d-invariants of a
//! rational homology sphere up with those of half-integer surgery on the unknot, and the
//! comparison of a profile with the minimal squares of a definite form.

mod engines;
mod normalize;

use std::fmt::Write as _;

use crate::exact::{display_rational, Elem, GroupMap, Rational, Subgroup};
use crate::sign::Sign;

pub(crate) use engines::factorizations as square_factorizations;
pub use engines::{
    form_obstruction, match_min_table, monotone_subgroup_matching, positive_even_subgroup_matching, run_engine,
    symmetric_monotone_matching,
};
pub use normalize::{normalize, Condition, NormalizedSeq};

/// Which condition set a search enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Positivity and evenness on every element of an order `rs` subgroup.
    Subgroup,
    /// Positivity, evenness, symmetry, monotonicity and boundedness along an isomorphism to `Z/r`.
    SymmetricMonotone,
    /// Fiber constancy, positivity, evenness and monotonicity on an order `rs` subgroup.
    MonotoneSubgroup,
    /// `m_Q(j) - d(phi(j))` a nonnegative even integer for every coset `j`.
    Form,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Subgroup => "positive even subgroup matching",
            Engine::SymmetricMonotone => "positive even symmetric monotone matching",
            Engine::MonotoneSubgroup => "positive even monotone subgroup matching",
            Engine::Form => "form obstruction",
        }
    }

    /// Conditions checked on each candidate, in report order.
    pub fn conditions(self) -> &'static [Condition] {
        use Condition::*;
        match self {
            Engine::Subgroup | Engine::Form => &[Positivity, Evenness],
            Engine::SymmetricMonotone => &[Positivity, Evenness, Symmetry, Monotonicity, Boundedness],
            Engine::MonotoneSubgroup => &[FiberConstancy, Positivity, Evenness, Monotonicity],
        }
    }
}

/// One examined choice of factorization, subgroup, map and orientation.
///
/// `subgroup` indexes the sorted subgroups of order `r s`; `map` indexes the full list of
/// epimorphisms (or isomorphisms) before conjugation pruning, so both replay directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub r: u64,
    pub s: u64,
    pub subgroup: usize,
    pub map: usize,
    pub sign: Sign,
    pub images: Vec<Elem>,
    /// Conditions in evaluation order; a failed fiber-constancy check leaves the rest unevaluated.
    pub outcomes: Vec<(Condition, bool)>,
}

impl Candidate {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|&(_, ok)| ok)
    }

    pub fn outcome(&self, c: Condition) -> Option<bool> {
        self.outcomes.iter().find(|(k, _)| *k == c).map(|&(_, ok)| ok)
    }
}

/// A successful candidate with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub r: u64,
    pub s: u64,
    pub sign: Sign,
    pub subgroup_index: usize,
    pub map_index: usize,
    pub subgroup: Subgroup,
    /// From `subgroup.structure()` to `Z/r` for subgroup searches; otherwise defined on the
    /// whole group (the profile's group, or the coset group of a form).
    pub map: GroupMap,
    /// Differences per member of `subgroup`, in `members()` order.
    pub differences: Vec<Rational>,
    /// The normalized sequence, whenever the profile is constant on the fibers.
    pub sequence: Option<NormalizedSeq>,
}

/// Sizes of the enumerated search space, summed over orientations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckedSpace {
    pub factorizations: usize,
    pub subgroups: usize,
    /// Every epimorphism or isomorphism enumerated.
    pub maps: usize,
    /// Maps left after identifying `phi` with `-phi`.
    pub examined: usize,
}

impl CheckedSpace {
    fn absorb(&mut self, other: &CheckedSpace) {
        self.factorizations += other.factorizations;
        self.subgroups += other.subgroups;
        self.maps += other.maps;
        self.examined += other.examined;
    }
}

/// Outcome of one engine over one or both orientations of a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchVerdict {
    pub engine: Engine,
    pub profile: String,
    pub signs: Vec<Sign>,
    pub witnesses: Vec<Witness>,
    pub candidates: Vec<Candidate>,
    pub checked: CheckedSpace,
    /// Limitations of the search, such as a non-cyclic group for an isomorphism search.
    pub notes: Vec<String>,
}

impl MatchVerdict {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }

    /// Combines runs over separate orientations, keeping canonical order.
    pub fn merge(mut self, other: MatchVerdict) -> MatchVerdict {
        debug_assert_eq!(self.engine, other.engine);
        self.signs.extend(other.signs);
        self.witnesses.extend(other.witnesses);
        self.candidates.extend(other.candidates);
        self.checked.absorb(&other.checked);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
        self.witnesses.sort_by_key(|w| (w.r, w.subgroup_index, w.map_index, w.sign));
        self.candidates.sort_by_key(|c| (c.r, c.subgroup, c.map, c.sign));
        self
    }

    /// Distinct normalized sequences among the witnesses.
    pub fn witness_sequences(&self) -> Vec<&NormalizedSeq> {
        let mut out: Vec<&NormalizedSeq> = Vec::new();
        for s in self.witnesses.iter().filter_map(|w| w.sequence.as_ref()) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// Plain-text report: search space, one line per candidate, then the witnesses.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let signs: Vec<String> = self.signs.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "engine: {}", self.engine.name());
        let _ = writeln!(out, "profile: {}", self.profile);
        let _ = writeln!(out, "orientations: {}", signs.join(","));
        let c = &self.checked;
        let _ = writeln!(
            out,
            "searched: {} factorizations, {} subgroups, {} maps, {} up to sign",
            c.factorizations, c.subgroups, c.maps, c.examined
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "found: {}", if self.found() { "yes" } else { "no" });
        for cand in &self.candidates {
            let outcomes: Vec<String> =
                cand.outcomes.iter().map(|(k, ok)| format!("{k} {}", if *ok { "pass" } else { "fail" })).collect();
            let _ = writeln!(
                out,
                "candidate r={} s={} subgroup={} map={} sign={} images={}: {}",
                cand.r,
                cand.s,
                cand.subgroup,
                cand.map,
                cand.sign,
                format_elems(&cand.images),
                outcomes.join(", ")
            );
        }
        for w in &self.witnesses {
            let _ = write!(
                out,
                "witness r={} s={} sign={} subgroup={} generators={} map={} images={}",
                w.r,
                w.s,
                w.sign,
                w.subgroup_index,
                format_elems(w.subgroup.generators()),
                w.map_index,
                format_elems(w.map.images())
            );
            match &w.sequence {
                Some(seq) => {
                    let _ = writeln!(out, " normalized={}", seq.compact());
                }
                None => {
                    let diffs: Vec<String> = w.differences.iter().map(display_rational).collect();
                    let _ = writeln!(out, " differences={}", diffs.join(","));
                }
            }
        }
        out
    }
}

fn format_elems(elems: &[Elem]) -> String {
    let parts: Vec<String> =
        elems.iter().map(|e| format!("({})", e.iter().map(u64::to_string).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", parts.join(" "))
}
