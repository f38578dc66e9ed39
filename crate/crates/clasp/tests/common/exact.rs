//! Group-theoretic routines against brute force on every abelian group of order at most 81.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use clasp::exact::IntMatrix;
use clasp::exact::{cokernel, epimorphisms, smith_normal_form, subgroup_epimorphisms, subgroups_of_order, FinAbGroup};

pub const LIMIT: u64 = 81;

/// Every invariant-factor chain `d_1 | d_2 | ...` with product at most `LIMIT`.
pub fn all_groups() -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, product: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = last.max(2);
        while product * d <= LIMIT {
            if d % last == 0 {
                prefix.push(d);
                extend(prefix, product * d, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, &mut out);
    out
}

pub struct Brute {
    pub factors: Vec<u64>,
    pub elems: Vec<Vec<u64>>,
    pub table: Vec<Vec<usize>>,
}

impl Brute {
    pub fn new(factors: &[u64]) -> Brute {
        let mut elems = vec![Vec::new()];
        for &f in factors {
            elems = elems.into_iter().flat_map(|e| (0..f).map(move |x| [e.clone(), vec![x]].concat())).collect();
        }
        let mut b = Brute { factors: factors.to_vec(), elems, table: Vec::new() };
        b.table = (0..b.elems.len())
            .map(|x| {
                (0..b.elems.len())
                    .map(|y| {
                        let s: Vec<u64> =
                            b.elems[x].iter().zip(&b.elems[y]).zip(&b.factors).map(|((p, q), f)| (p + q) % f).collect();
                        b.index(&s)
                    })
                    .collect()
            })
            .collect();
        b
    }

    pub fn index(&self, e: &[u64]) -> usize {
        e.iter().zip(&self.factors).fold(0, |acc, (&x, &f)| acc * f as usize + x as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Every subgroup, as a bitmask over element indices.
    pub fn subgroups(&self) -> HashSet<u128> {
        let mut seen: HashSet<u128> = HashSet::from([1]);
        let mut todo = vec![1u128];
        while let Some(s) = todo.pop() {
            for g in 0..self.elems.len() {
                if s >> g & 1 == 1 {
                    continue;
                }
                // S + <g>: translate S by multiples of g until it closes up.
                let mut t = s;
                let mut k = g;
                while t >> k & 1 == 0 {
                    for x in 0..self.elems.len() {
                        if s >> x & 1 == 1 {
                            t |= 1 << self.add(x, k);
                        }
                    }
                    k = self.add(k, g);
                }
                if seen.insert(t) {
                    todo.push(t);
                }
            }
        }
        seen
    }
}

/// Surjections onto `Z/r` counted through their kernels: `phi(r)` per `K` with `H/K` cyclic of order `r`.
pub fn epis_via_kernels(brute: &Brute, all: &HashSet<u128>, h: u128, r: u64) -> usize {
    let units = (1..=r).filter(|k| k.gcd(&r) == 1).count();
    let order = h.count_ones() as u64;
    if !order.is_multiple_of(r) {
        return 0;
    }
    let cyclic_quotient = |k: u128| {
        (0..brute.elems.len()).filter(|&x| h >> x & 1 == 1).any(|x| {
            let mut y = x;
            for step in 1..=r {
                if k >> y & 1 == 1 {
                    return step == r;
                }
                y = brute.add(y, x);
            }
            false
        })
    };
    let kernels =
        all.iter().filter(|&&k| k & h == k && k.count_ones() as u64 * r == order && cyclic_quotient(k)).count();
    kernels * units
}

pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_(k-1)` with `D_k` the gcd of all `k x k` minors.
pub fn determinantal_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=n {
        let mut g = 0i128;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<i128>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn square(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-6i64..=6, n), n))
}

/// Subgroups of every order, ours against the fixpoint closure.
pub fn subgroups_match_brute_force(groups: &[Vec<u64>]) {
    for f in groups {
        let g = FinAbGroup::new(f.clone()).unwrap();
        let brute = Brute::new(f);
        let mut by_order: BTreeMap<u32, BTreeSet<u128>> = BTreeMap::new();
        for s in brute.subgroups() {
            by_order.entry(s.count_ones()).or_default().insert(s);
        }
        let n = brute.elems.len() as u64;
        for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
            let ours: BTreeSet<u128> = subgroups_of_order(&g, d)
                .unwrap()
                .iter()
                .map(|h| h.elements().fold(0u128, |m, e| m | 1 << brute.index(e)))
                .collect();
            let expect = by_order.get(&(d as u32)).cloned().unwrap_or_default();
            assert_eq!(ours, expect, "order {d} subgroups of {f:?}");
        }
    }
}

/// Epimorphism counts onto every cyclic quotient, on the group and on a few subgroups.
pub fn epimorphisms_match_brute_force(groups: &[Vec<u64>]) {
    for f in groups {
        let g = FinAbGroup::new(f.clone()).unwrap();
        let brute = Brute::new(f);
        let all = brute.subgroups();
        let n = brute.elems.len() as u64;
        let whole = (1u128 << n) - 1;
        for r in (1..=n).filter(|r| n.is_multiple_of(*r)) {
            let maps = epimorphisms(&g, r);
            assert_eq!(maps.len(), epis_via_kernels(&brute, &all, whole, r), "{f:?} onto Z/{r}");
            assert!(maps.iter().all(|m| m.is_well_defined() && m.is_surjective()));
            for h in subgroups_of_order(&g, n / r.max(1)).unwrap().iter().take(3) {
                let mask = h.elements().fold(0u128, |m, e| m | 1 << brute.index(e));
                for s in (1..=h.order() as u64).filter(|s| (h.order() as u64).is_multiple_of(*s)) {
                    assert_eq!(
                        subgroup_epimorphisms(h, s).len(),
                        epis_via_kernels(&brute, &all, mask, s),
                        "{f:?}, subgroup of order {}, onto Z/{s}",
                        h.order()
                    );
                }
            }
        }
    }
}

fn abs(d: BigInt) -> BigInt {
    if d < BigInt::from(0) {
        -d
    } else {
        d
    }
}

pub fn smith_form_matches(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = IntMatrix::from_rows(rows).unwrap();
    let s = smith_normal_form(&m);
    prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
    let n = rows.len();
    prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(n));
    prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(n));
    let ours: Vec<BigInt> = s.diagonal().into_iter().filter(|d| d != &BigInt::from(0)).map(abs).collect();
    let expect: Vec<BigInt> = determinantal_factors(rows).into_iter().map(|d| BigInt::from(d.abs())).collect();
    prop_assert_eq!(ours, expect);
    Ok(())
}

pub fn cokernel_matches(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = IntMatrix::from_rows(rows).unwrap();
    let d = m.det().unwrap();
    match cokernel(&m) {
        Ok(g) => {
            prop_assert_eq!(BigInt::from(g.order()), abs(d));
            let expect: Vec<u64> =
                determinantal_factors(rows).into_iter().map(|x| x.unsigned_abs() as u64).filter(|&x| x > 1).collect();
            prop_assert_eq!(g.factors(), expect.as_slice());
        }
        Err(_) => prop_assert_eq!(d, BigInt::from(0)),
    }
    Ok(())
}
