//! d-invariant profiles: a finite abelian group (Spin^c structures, spin at the origin)
//! with an exact rational value per element.

mod lens;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Cokernel, Elem, FinAbGroup, IntMatrix, Rational, Subgroup};

pub use lens::{lens_d, unknot_half_surgery_d, Orientation, SurgeryProfile};
pub(crate) use text::write_table;

/// Correction terms of a rational homology sphere.
///
/// `values[i]` belongs to the element at lexicographic index `i` of `group`.
/// Equality ignores the label.
#[derive(Clone, Debug)]
pub struct DProfile {
    group: FinAbGroup,
    values: Vec<Rational>,
    label: String,
}

impl PartialEq for DProfile {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.values == other.values
    }
}

impl Eq for DProfile {}

impl DProfile {
    /// Checks the value count and conjugation symmetry `d(-t) = d(t)`.
    pub fn new(group: FinAbGroup, values: Vec<Rational>, label: impl Into<String>) -> Result<Self> {
        let n = group.enumerable_order()?;
        if values.len() != n {
            return Err(Error::OrderMismatch { expected: n.to_string(), found: values.len().to_string() });
        }
        let p = DProfile { group, values, label: label.into() };
        if let Some(t) = p.asymmetry() {
            return Err(Error::Asymmetric(format!("{t:?}")));
        }
        Ok(p)
    }

    /// Profile of `S^3`.
    pub fn sphere() -> Self {
        DProfile { group: FinAbGroup::trivial(), values: vec![Rational::zero()], label: "S^3".into() }
    }

    /// First element `t` with `d(-t) != d(t)`, if any.
    fn asymmetry(&self) -> Option<Elem> {
        self.group
            .elements()
            .enumerate()
            .find(|(i, t)| self.values[*i] != self.values[self.group.index_of(&self.group.neg(t))])
            .map(|(_, t)| t)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Values in lexicographic element order.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, t: &[u64]) -> &Rational {
        &self.values[self.group.index_of(t)]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Value at the spin structure.
    pub fn spin_value(&self) -> &Rational {
        &self.values[0]
    }

    /// Sorted values.
    pub fn multiset(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().expect("profiles are nonempty")
    }

    /// Profile of `-Y`.
    pub fn negate(&self) -> DProfile {
        DProfile {
            group: self.group.clone(),
            values: self.values.iter().map(|v| -v).collect(),
            label: negate_label(&self.label),
        }
    }

    /// Profile of `Y_1 # Y_2`, with the direct sum brought back to invariant-factor form.
    pub fn connected_sum(&self, other: &DProfile) -> Result<DProfile> {
        let orders: Vec<BigInt> =
            self.group.factors().iter().chain(other.group.factors()).map(|&d| BigInt::from(d)).collect();
        let cok = Cokernel::new(&IntMatrix::diagonal(&orders))?;
        let group = cok.group().clone();
        let n = group.enumerable_order()?;
        let mut values = vec![None; n];
        for (i, a) in self.group.elements().enumerate() {
            for (j, b) in other.group.elements().enumerate() {
                let x: Vec<BigInt> = a.iter().chain(&b).map(|&c| BigInt::from(c)).collect();
                let k = group.index_of(&cok.element_of(&x));
                values[k] = Some(&self.values[i] + &other.values[j]);
            }
        }
        let values = values.into_iter().map(|v| v.expect("direct sum map is bijective")).collect();
        DProfile::new(group, values, format!("{} # {}", self.label, other.label))
    }

    /// Profile on a subgroup, in the subgroup's own coordinates.
    pub fn restrict(&self, h: &Subgroup) -> Result<DProfile> {
        if h.parent() != &self.group {
            return Err(Error::Invalid(format!("subgroup of {} restricted from {}", h.parent(), self.group)));
        }
        let mut values = vec![Rational::zero(); h.order()];
        for (x, c) in h.members() {
            values[h.structure().index_of(c)] = self.value(x).clone();
        }
        DProfile::new(h.structure().clone(), values, format!("{} restricted to order {}", self.label, h.order()))
    }

    /// Transports the profile along an isomorphism `phi: self.group -> target`.
    pub fn relabel(&self, phi: &crate::exact::GroupMap) -> Result<DProfile> {
        let target = phi.target().clone();
        let mut values = vec![None; self.order()];
        for (i, t) in self.group.elements().enumerate() {
            let k = target.index_of(&phi.apply(&t));
            values[k] = Some(self.values[i].clone());
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("relabelling map is not bijective".into()))?;
        DProfile::new(target, values, self.label.clone())
    }
}

fn negate_label(label: &str) -> String {
    match label.strip_prefix('-') {
        Some(rest) if rest.starts_with('(') && rest.ends_with(')') => rest[1..rest.len() - 1].to_string(),
        _ => format!("-({label})"),
    }
}

impl fmt::Display for DProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
