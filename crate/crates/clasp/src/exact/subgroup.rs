use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::group::{Elem, FinAbGroup};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::Result;

/// A subgroup of a finite abelian group, stored with its full sorted element list and an
/// explicit decomposition into cyclic summands.
///
/// `generators[j]` has order `structure.factors()[j]` and the subgroup is the internal direct
/// sum of the cyclic groups they generate. `coordinates` maps a member to its tuple in
/// `structure`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FinAbGroup,
    generators: Vec<Elem>,
    structure: FinAbGroup,
    /// Sorted members with their coordinates.
    members: Vec<(Elem, Elem)>,
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn generated_by(parent: &FinAbGroup, gens: &[Elem]) -> Result<Self> {
        parent.enumerable_order()?;
        let closure = closure(parent, gens);
        Ok(Self::from_closure(parent, closure))
    }

    pub fn whole(parent: &FinAbGroup) -> Result<Self> {
        let gens: Vec<Elem> = (0..parent.rank())
            .map(|i| {
                let mut e = parent.zero();
                e[i] = 1;
                e
            })
            .collect();
        Self::generated_by(parent, &gens)
    }

    pub fn trivial(parent: &FinAbGroup) -> Self {
        Self::from_closure(parent, vec![parent.zero()])
    }

    /// Builds the canonical decomposition from a sorted, closed element list.
    fn from_closure(parent: &FinAbGroup, elements: Vec<Elem>) -> Self {
        // Canonical generating set: greedily keep the lexicographically first elements
        // not already in the span of the previous ones.
        let mut span = vec![parent.zero()];
        let mut spanning = Vec::new();
        for e in &elements {
            if span.len() == elements.len() {
                break;
            }
            if span.binary_search(e).is_err() {
                spanning.push(e.clone());
                span = closure(parent, &spanning);
            }
        }
        let (structure, generators) = decompose(parent, &spanning);
        let mut members: Vec<(Elem, Elem)> = structure
            .elements()
            .map(|c| {
                let mut x = parent.zero();
                for (k, g) in c.iter().zip(&generators) {
                    x = parent.add(&x, &parent.scale(*k as i64, g));
                }
                (x, c)
            })
            .collect();
        members.sort();
        debug_assert!(members.iter().map(|(e, _)| e).eq(elements.iter()));
        Subgroup { parent: parent.clone(), generators, structure, members }
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    /// Generators of the cyclic summands, in parent coordinates.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Abstract isomorphism type, with coordinates matching [`Self::generators`].
    pub fn structure(&self) -> &FinAbGroup {
        &self.structure
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Members in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = &Elem> + '_ {
        self.members.iter().map(|(e, _)| e)
    }

    /// Members paired with their coordinates in [`Self::structure`].
    pub fn members(&self) -> &[(Elem, Elem)] {
        &self.members
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.coordinates(e).is_some()
    }

    pub fn coordinates(&self, e: &Elem) -> Option<&Elem> {
        self.members.binary_search_by(|(m, _)| m.cmp(e)).ok().map(|i| &self.members[i].1)
    }

    /// Parent element with the given coordinates.
    pub fn element_at(&self, coords: &Elem) -> Elem {
        let mut x = self.parent.zero();
        for (k, g) in coords.iter().zip(&self.generators) {
            x = self.parent.add(&x, &self.parent.scale(*k as i64, g));
        }
        x
    }
}

/// Sorted closure of `gens` under addition.
fn closure(parent: &FinAbGroup, gens: &[Elem]) -> Vec<Elem> {
    let n = parent.enumerable_order().expect("checked by caller");
    let mut seen = vec![false; n];
    let mut out = vec![parent.zero()];
    seen[parent.index_of(&parent.zero())] = true;
    let mut frontier = 0;
    while frontier < out.len() {
        let x = out[frontier].clone();
        frontier += 1;
        for g in gens {
            let y = parent.add(&x, g);
            let i = parent.index_of(&y);
            if !seen[i] {
                seen[i] = true;
                out.push(y);
            }
        }
    }
    out.sort();
    out
}

/// Invariant-factor decomposition of the subgroup generated by `gens`.
///
/// With `D = diag(d)` the subgroup is `L / D Z^m` for the lattice `L` spanned by the
/// generators and `D`. If `B` is a basis of `L` then `L / D Z^m = Z^m / (B^-1 D) Z^m`, and the
/// Smith form of `B^-1 D` gives the summands.
fn decompose(parent: &FinAbGroup, gens: &[Elem]) -> (FinAbGroup, Vec<Elem>) {
    let m = parent.rank();
    if m == 0 || gens.is_empty() {
        return (FinAbGroup::trivial(), Vec::new());
    }
    let d = parent.factors();
    let k = gens.len();
    let mut a = IntMatrix::zeros(m, k + m);
    for (j, g) in gens.iter().enumerate() {
        for i in 0..m {
            a[(i, j)] = BigInt::from(g[i]);
        }
    }
    for i in 0..m {
        a[(i, k + i)] = BigInt::from(d[i]);
    }
    let s = smith_normal_form(&a);
    let sdiag = s.diagonal();
    // B = U^-1 diag(s); B^-1 D = diag(1/s) U D.
    let mut basis = s.u_inv.clone();
    for j in 0..m {
        for i in 0..m {
            basis[(i, j)] = &basis[(i, j)] * &sdiag[j];
        }
    }
    let mut rel = IntMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let num = &s.u[(i, j)] * BigInt::from(d[j]);
            debug_assert!((&num % &sdiag[i]).is_zero());
            rel[(i, j)] = num / &sdiag[i];
        }
    }
    let t = smith_normal_form(&rel);
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for j in 0..m {
        let e = &t.d[(j, j)];
        if *e == BigInt::from(1) {
            continue;
        }
        factors.push(e.to_u64().expect("subgroup factor fits"));
        // y = U2^-1 e_j, x = B y mod d.
        let y: Vec<BigInt> = (0..m).map(|i| t.u_inv[(i, j)].clone()).collect();
        let x = basis.mul_vec(&y);
        generators
            .push(x.iter().zip(d).map(|(v, &di)| v.mod_floor(&BigInt::from(di)).to_u64().expect("residue")).collect());
    }
    (FinAbGroup::new(factors).expect("Smith form gives a divisibility chain"), generators)
}

/// All subgroups of order `n`, sorted by their element lists.
///
/// Subgroups correspond to lattices `D Z^m <= L <= Z^m`; each `L` has a unique upper
/// triangular Hermite basis, which is enumerated directly.
pub fn subgroups_of_order(g: &FinAbGroup, n: u64) -> Result<Vec<Subgroup>> {
    let total = g.enumerable_order()? as u64;
    if n == 0 || !total.is_multiple_of(n) {
        return Ok(Vec::new());
    }
    let index = total / n;
    let m = g.rank();
    let d: Vec<i128> = g.factors().iter().map(|&x| i128::from(x)).collect();
    let mut out = Vec::new();
    let mut diag = vec![0i128; m];
    enumerate_diagonals(index as i128, &d, 0, &mut diag, &mut |diag| {
        let mut b = vec![vec![0i128; m]; m];
        for i in 0..m {
            b[i][i] = diag[i];
        }
        let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        fill_offdiagonal(&mut b, &slots, 0, &mut |b| {
            if contains_relations(b, &d) {
                let gens: Vec<Elem> =
                    (0..m).map(|j| (0..m).map(|i| b[i][j].rem_euclid(d[i]) as u64).collect()).collect();
                out.push(Subgroup::from_closure(g, closure(g, &gens)));
            }
        });
    });
    out.sort_by(|a, b| a.members.iter().map(|x| &x.0).cmp(b.members.iter().map(|x| &x.0)));
    Ok(out)
}

/// Diagonals with product `rest`; `diag[i]` divides `d[i]` since `L` contains `d_i e_i`.
fn enumerate_diagonals(rest: i128, d: &[i128], i: usize, diag: &mut Vec<i128>, f: &mut dyn FnMut(&[i128])) {
    if i == diag.len() {
        if rest == 1 {
            f(diag);
        }
        return;
    }
    for a in 1..=rest.min(d[i]) {
        if rest % a == 0 && d[i] % a == 0 {
            diag[i] = a;
            enumerate_diagonals(rest / a, d, i + 1, diag, f);
        }
    }
}

fn fill_offdiagonal(b: &mut Vec<Vec<i128>>, slots: &[(usize, usize)], k: usize, f: &mut dyn FnMut(&Vec<Vec<i128>>)) {
    if k == slots.len() {
        f(b);
        return;
    }
    let (i, j) = slots[k];
    for v in 0..b[i][i] {
        b[i][j] = v;
        fill_offdiagonal(b, slots, k + 1, f);
    }
    b[i][j] = 0;
}

/// Does the lattice with upper triangular column basis `b` contain every `d_j e_j`?
fn contains_relations(b: &[Vec<i128>], d: &[i128]) -> bool {
    let m = d.len();
    (0..m).all(|j| {
        let mut x = vec![0i128; m];
        for k in (0..m).rev() {
            let rhs = if k == j { d[j] } else { 0 };
            let acc: i128 = rhs - (k + 1..m).map(|l| b[k][l] * x[l]).sum::<i128>();
            if acc % b[k][k] != 0 {
                return false;
            }
            x[k] = acc / b[k][k];
        }
        true
    })
}
