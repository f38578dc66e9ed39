use num_integer::Integer;

use super::group::{Elem, FinAbGroup};
use super::subgroup::Subgroup;
use crate::error::Result;

/// Homomorphism out of a finite abelian group given by the images of its standard generators.
///
/// When the domain is a [`Subgroup`], `source` is its abstract structure and
/// `source_generators` its summand generators in parent coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupMap {
    source: FinAbGroup,
    source_generators: Vec<Elem>,
    target: FinAbGroup,
    images: Vec<Elem>,
}

impl GroupMap {
    /// Builds a map on a full group; `images[j]` is the image of the `j`-th standard generator.
    pub fn new(source: &FinAbGroup, target: &FinAbGroup, images: Vec<Elem>) -> Self {
        let source_generators = (0..source.rank())
            .map(|j| {
                let mut e = source.zero();
                e[j] = 1;
                e
            })
            .collect();
        GroupMap { source: source.clone(), source_generators, target: target.clone(), images }
    }

    fn on_subgroup(h: &Subgroup, target: &FinAbGroup, images: Vec<Elem>) -> Self {
        GroupMap {
            source: h.structure().clone(),
            source_generators: h.generators().to_vec(),
            target: target.clone(),
            images,
        }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn source_generators(&self) -> &[Elem] {
        &self.source_generators
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    /// Image of an element given in source coordinates.
    pub fn apply(&self, coords: &[u64]) -> Elem {
        let mut y = self.target.zero();
        for (&c, img) in coords.iter().zip(&self.images) {
            y = self.target.add(&y, &self.target.scale(c as i64, img));
        }
        y
    }

    /// Image in `Z/r` as a plain residue (0 for the trivial target).
    pub fn apply_cyclic(&self, coords: &[u64]) -> u64 {
        self.apply(coords).first().copied().unwrap_or(0)
    }

    /// Generator relations `d_j * image_j = 0` hold.
    pub fn is_well_defined(&self) -> bool {
        self.images.len() == self.source.rank()
            && self
                .images
                .iter()
                .zip(self.source.factors())
                .all(|(img, &d)| self.target.contains(img) && self.target.scale(d as i64, img) == self.target.zero())
    }

    /// Sorted image of the whole source.
    pub fn image(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.source.elements().map(|c| self.apply(&c)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.enumerable_order().unwrap_or(usize::MAX)
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.source.enumerable_order().unwrap_or(usize::MAX)
    }

    /// `-self`.
    pub fn negated(&self) -> Self {
        GroupMap { images: self.images.iter().map(|i| self.target.neg(i)).collect(), ..self.clone() }
    }

    /// `other . self`; `other` must be defined on the full group `self.target`.
    pub fn then(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            images: self.images.iter().map(|i| other.apply(i)).collect(),
            target: other.target.clone(),
            ..self.clone()
        }
    }
}

/// All surjections `g -> Z/r`, sorted by generator images.
pub fn epimorphisms(g: &FinAbGroup, r: u64) -> Vec<GroupMap> {
    let target = FinAbGroup::cyclic(r);
    epis_with(g.factors(), r).into_iter().map(|imgs| GroupMap::new(g, &target, to_elems(&imgs, r))).collect()
}

/// All surjections from a subgroup onto `Z/r`, in terms of the subgroup's own coordinates.
pub fn subgroup_epimorphisms(h: &Subgroup, r: u64) -> Vec<GroupMap> {
    let target = FinAbGroup::cyclic(r);
    epis_with(h.structure().factors(), r)
        .into_iter()
        .map(|imgs| GroupMap::on_subgroup(h, &target, to_elems(&imgs, r)))
        .collect()
}

fn to_elems(imgs: &[u64], r: u64) -> Vec<Elem> {
    imgs.iter().map(|&a| if r == 1 { Vec::new() } else { vec![a] }).collect()
}

/// Generator images `a_j` with `e_j a_j = 0 (mod r)` and `gcd(a_1, ..., a_k, r) = 1`.
fn epis_with(factors: &[u64], r: u64) -> Vec<Vec<u64>> {
    assert!(r >= 1, "target order must be positive");
    let choices: Vec<Vec<u64>> = factors
        .iter()
        .map(|&e| {
            let step = r / r.gcd(&e);
            (0..r).step_by(step as usize).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(factors.len());
    product(&choices, &mut cur, &mut |imgs| {
        let g = imgs.iter().fold(r, |acc, &a| acc.gcd(&a));
        if g == 1 {
            out.push(imgs.to_vec());
        }
    });
    out
}

fn product(choices: &[Vec<u64>], cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if cur.len() == choices.len() {
        f(cur);
        return;
    }
    for &c in &choices[cur.len()] {
        cur.push(c);
        product(choices, cur, f);
        cur.pop();
    }
}

/// All isomorphisms `g -> h`, sorted by generator images. Empty when the types differ.
pub fn isomorphisms(g: &FinAbGroup, h: &FinAbGroup) -> Result<Vec<GroupMap>> {
    if g.factors() != h.factors() {
        return Ok(Vec::new());
    }
    let n = g.enumerable_order()?;
    if g.is_cyclic() {
        let order = g.exponent();
        return Ok((0..order)
            .filter(|u| u.gcd(&order) == 1)
            .map(|u| GroupMap::new(g, h, if g.is_trivial() { Vec::new() } else { vec![vec![u]] }))
            .collect());
    }
    let candidates: Vec<Vec<Elem>> =
        g.factors().iter().map(|&d| h.elements().filter(|x| d % h.element_order(x) == 0).collect()).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Elem> = Vec::new();
    iso_search(g, h, n, &candidates, &mut cur, &mut out);
    Ok(out)
}

fn iso_search(
    g: &FinAbGroup,
    h: &FinAbGroup,
    n: usize,
    candidates: &[Vec<Elem>],
    cur: &mut Vec<Elem>,
    out: &mut Vec<GroupMap>,
) {
    let k = cur.len();
    if k == candidates.len() {
        let map = GroupMap::new(g, h, cur.clone());
        if map.image().len() == n {
            out.push(map);
        }
        return;
    }
    // The image of the first k+1 generators must have order d_1 * ... * d_{k+1}.
    let partial: u64 = g.factors()[..=k].iter().product();
    for c in &candidates[k] {
        if h.element_order(c) != g.factors()[k] {
            continue;
        }
        cur.push(c.clone());
        let span = Subgroup::generated_by(h, cur).map(|s| s.order() as u64).unwrap_or(0);
        if span == partial {
            iso_search(g, h, n, candidates, cur, out);
        }
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(f: &[u64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn epimorphism_counts() {
        assert_eq!(epimorphisms(&group(&[9]), 3).len(), 2);
        assert_eq!(epimorphisms(&group(&[3, 3]), 3).len(), 8);
        assert!(epimorphisms(&group(&[3, 9]), 2).is_empty());
        assert_eq!(epimorphisms(&group(&[3, 9]), 1).len(), 1);
        for m in epimorphisms(&group(&[3, 9]), 9) {
            assert!(m.is_well_defined());
            assert!(m.is_surjective());
        }
    }

    #[test]
    fn isomorphism_counts() {
        assert_eq!(isomorphisms(&group(&[17]), &group(&[17])).unwrap().len(), 16);
        assert_eq!(isomorphisms(&group(&[33]), &group(&[33])).unwrap().len(), 20);
        assert!(isomorphisms(&group(&[3, 9]), &group(&[27])).unwrap().is_empty());
        // |Aut(Z/3 + Z/9)| = 108.
        assert_eq!(isomorphisms(&group(&[3, 9]), &group(&[3, 9])).unwrap().len(), 108);
        assert_eq!(isomorphisms(&FinAbGroup::trivial(), &FinAbGroup::trivial()).unwrap().len(), 1);
    }

    #[test]
    fn automorphisms_compose() {
        let g = group(&[3, 9]);
        let auts = isomorphisms(&g, &g).unwrap();
        for a in auts.iter().step_by(7) {
            for b in auts.iter().step_by(11) {
                assert!(auts.contains(&a.then(b)));
            }
        }
    }
}
