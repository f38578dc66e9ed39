//! Positive-definite forms `[[A, I], [I, 2I]]` up to integral congruence.
//!
//! Such a form is determined by `M = 2A - I`, a positive-definite matrix congruent to the
//! identity mod 2 with `det M` equal to the determinant of the full form. Replacing `M` by
//! `T^T M T` with `T = I + 2S` is realised on the full form by `(u, v) -> (T u, v - S u)`, so
//! it suffices to list `M` up to this action of `Gamma(2)`. Every `M` is `R^T M' R` for a
//! Minkowski-reduced `M'` and some `R`, and the class depends only on `R mod 2`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::cvp::Enumerator;
use super::{min_square, QuadForm};
use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Rational};

/// Largest `k` handled; the reduction constants below are known through dimension 4.
pub const MAX_FORM_RANK: usize = 4;

/// Bound on `prod m_ii / det` for Minkowski-reduced forms, as `(num, den)`.
const HERMITE_PRODUCT: [(i128, i128); MAX_FORM_RANK + 1] = [(1, 1), (1, 1), (4, 3), (2, 1), (4, 1)];

/// Node budget for one congruence search.
const CONGRUENCE_BUDGET: usize = 2_000_000;

type Small = Vec<Vec<i64>>;

/// Result of [`enumerate_half_integer_forms_detailed`].
#[derive(Clone, Debug)]
pub struct FormEnumeration {
    /// One form per congruence class, in canonical order.
    pub forms: Vec<QuadForm>,
    /// The block `A` of each form.
    pub blocks: Vec<IntMatrix>,
    /// Minkowski-reduced matrices of the right determinant.
    pub reduced_candidates: usize,
    /// Distinct `Gamma(2)`-reduced lifts before congruence testing.
    pub lifted_candidates: usize,
    /// Pairs of output indices whose congruence could not be decided within budget.
    pub undecided: Vec<(usize, usize)>,
}

/// Forms `[[A, I], [I, 2I]]` with `A` of size `k`, determinant `det` and exactly `odd_count`
/// odd entries on the diagonal of `A`, one per congruence class.
pub fn enumerate_half_integer_forms(k: usize, det: u64, odd_count: usize) -> Result<Vec<QuadForm>> {
    Ok(enumerate_half_integer_forms_detailed(k, det, odd_count)?.forms)
}

pub fn enumerate_half_integer_forms_detailed(k: usize, det: u64, odd_count: usize) -> Result<FormEnumeration> {
    if k == 0 {
        return Err(Error::Invalid("forms of half-integer surgery type need k >= 1".into()));
    }
    if k > MAX_FORM_RANK {
        return Err(Error::Unsupported(format!("form enumeration is implemented for k <= {MAX_FORM_RANK}, got {k}")));
    }
    let mut out = FormEnumeration {
        forms: Vec::new(),
        blocks: Vec::new(),
        reduced_candidates: 0,
        lifted_candidates: 0,
        undecided: Vec::new(),
    };
    if det == 0 || det.is_multiple_of(2) || odd_count > k {
        return Ok(out);
    }
    let reduced = minkowski_candidates(k, det as i128);
    out.reduced_candidates = reduced.len();
    let lifts = mod2_lifts(k);

    // Canonical Gamma(2)-reduced representatives, keyed by the block A.
    let mut blocks: BTreeMap<BlockKey, Small> = BTreeMap::new();
    for m0 in &reduced {
        for r in lifts.values() {
            if !is_identity_mod2(&congruent(m0, r)) {
                continue;
            }
            let m = canonical(&gamma2_reduce(congruent(m0, r)));
            let a = block_of(&m);
            if (0..k).filter(|&i| a[i][i] % 2 != 0).count() != odd_count {
                continue;
            }
            blocks.entry(block_key(&a)).or_insert(a);
        }
    }
    out.lifted_candidates = blocks.len();

    // Group by fingerprint and keep the first representative of each congruence class.
    let mut classes: Vec<(Fingerprint, QuadForm, Small)> = Vec::new();
    for a in blocks.into_values() {
        let form = QuadForm::half_integer(&to_matrix(&a))?;
        let fp = fingerprint(&form)?;
        let mut merged = false;
        for (i, (other_fp, other, _)) in classes.iter().enumerate() {
            if *other_fp != fp {
                continue;
            }
            match are_congruent(&form, other) {
                Some(true) => {
                    merged = true;
                    break;
                }
                Some(false) => {}
                None => out.undecided.push((i, classes.len())),
            }
        }
        if !merged {
            classes.push((fp, form, a));
        }
    }
    for (_, form, a) in classes {
        out.forms.push(form);
        out.blocks.push(to_matrix(&a));
    }
    Ok(out)
}

/// Ordering used to pick representatives: fewer nonzero off-diagonal entries, smaller
/// off-diagonal mass, smaller trace, then lexicographically larger entries.
type BlockKey = (usize, i64, i64, Reverse<Small>);

fn block_key(a: &Small) -> BlockKey {
    let k = a.len();
    let mut nnz = 0;
    let mut mass = 0;
    for i in 0..k {
        for j in 0..k {
            if i != j && a[i][j] != 0 {
                nnz += 1;
                mass += a[i][j].abs();
            }
        }
    }
    let trace = (0..k).map(|i| a[i][i]).sum();
    (nnz, mass, trace, Reverse(a.clone()))
}

fn block_of(m: &Small) -> Small {
    m.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| if i == j { (x + 1) / 2 } else { x / 2 }).collect())
        .collect()
}

fn to_matrix(a: &Small) -> IntMatrix {
    let rows: Vec<Vec<i64>> = a.clone();
    IntMatrix::from_rows(&rows).expect("square block")
}

fn det_small(m: &Small) -> i128 {
    let rows: Vec<Vec<i64>> = m.clone();
    IntMatrix::from_rows(&rows).expect("square").det().expect("square").to_i128().expect("small determinant")
}

/// Positive-definite `k x k` matrices of determinant `det` satisfying the Minkowski bounds
/// `m_11 <= ... <= m_kk`, `2|m_ij| <= m_ii` for `i < j`, and `prod m_ii <= c_k det`.
fn minkowski_candidates(k: usize, det: i128) -> Vec<Small> {
    let (num, den) = HERMITE_PRODUCT[k];
    let mut out = Vec::new();
    let mut m = vec![vec![0i64; k]; k];
    fill_row(k, 0, det, num * det, den, 1, &mut m, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    k: usize,
    i: usize,
    det: i128,
    bound_num: i128,
    bound_den: i128,
    prod: i128,
    m: &mut Small,
    out: &mut Vec<Small>,
) {
    if i == k {
        if det_small(m) == det {
            out.push(m.clone());
        }
        return;
    }
    let lo = if i == 0 { 1 } else { m[i - 1][i - 1] };
    let mut d = lo;
    loop {
        // Remaining diagonal entries are at least d.
        let mut p = prod;
        for _ in i..k {
            p *= d as i128;
        }
        if p * bound_den > bound_num {
            break;
        }
        m[i][i] = d;
        fill_offdiag(k, i, 0, det, bound_num, bound_den, prod * d as i128, m, out);
        d += 1;
    }
    m[i][i] = 0;
}

#[allow(clippy::too_many_arguments)]
fn fill_offdiag(
    k: usize,
    i: usize,
    j: usize,
    det: i128,
    bound_num: i128,
    bound_den: i128,
    prod: i128,
    m: &mut Small,
    out: &mut Vec<Small>,
) {
    if j == i {
        let lead: Small = m[..=i].iter().map(|r| r[..=i].to_vec()).collect();
        if det_small(&lead) > 0 {
            fill_row(k, i + 1, det, bound_num, bound_den, prod, m, out);
        }
        return;
    }
    let half = m[j][j] / 2;
    for x in -half..=half {
        m[i][j] = x;
        m[j][i] = x;
        fill_offdiag(k, i, j + 1, det, bound_num, bound_den, prod, m, out);
    }
    m[i][j] = 0;
    m[j][i] = 0;
}

/// Integer lifts of every element of `GL_k(F_2)`, keyed by the mod-2 matrix as a bitmask.
fn mod2_lifts(k: usize) -> BTreeMap<u32, Small> {
    let identity: Small = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashMap<u32, Small> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(mask(&identity), identity.clone());
    queue.push_back(identity);
    while let Some(r) = queue.pop_front() {
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                // Column operation: col b += col a.
                let mut next = r.clone();
                for row in next.iter_mut() {
                    row[b] += row[a];
                }
                let key = mask(&next);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                    e.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn mask(r: &Small) -> u32 {
    let k = r.len();
    let mut bits = 0u32;
    for i in 0..k {
        for j in 0..k {
            if r[i][j].rem_euclid(2) == 1 {
                bits |= 1 << (i * k + j);
            }
        }
    }
    bits
}

/// `R^T M R`.
fn congruent(m: &Small, r: &Small) -> Small {
    let k = m.len();
    let mut mr = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            mr[i][j] = (0..k).map(|l| m[i][l] * r[l][j]).sum();
        }
    }
    let mut out = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            out[i][j] = (0..k).map(|l| r[l][i] * mr[l][j]).sum();
        }
    }
    out
}

fn is_identity_mod2(m: &Small) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x.rem_euclid(2) == i64::from(i == j)))
}

/// Greedy descent with moves `e_i -> e_i + 2t e_j`, each strictly lowering some `m_ii`.
fn gamma2_reduce(mut m: Small) -> Small {
    let k = m.len();
    loop {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                // m_ii + 4t m_ij + 4t^2 m_jj is minimised at t = -m_ij / (2 m_jj).
                let t = nearest(-m[i][j], 2 * m[j][j]);
                if t == 0 {
                    continue;
                }
                let new_ii = m[i][i] + 4 * t * m[i][j] + 4 * t * t * m[j][j];
                if new_ii >= m[i][i] {
                    continue;
                }
                for l in 0..k {
                    if l != i {
                        let v = m[i][l] + 2 * t * m[j][l];
                        m[i][l] = v;
                        m[l][i] = v;
                    }
                }
                m[i][i] = new_ii;
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

fn nearest(a: i64, b: i64) -> i64 {
    // round(a / b) for b > 0, ties toward zero
    let q = (2 * a + b).div_euclid(2 * b);
    if (2 * a + b).rem_euclid(2 * b) == 0 && a < 0 {
        q
    } else if (2 * a + b).rem_euclid(2 * b) == 0 && a > 0 {
        q - 1
    } else {
        q
    }
}

/// Best of all permutations and sign changes of the basis under [`block_key`].
fn canonical(m: &Small) -> Small {
    let k = m.len();
    let mut best: Option<(BlockKey, Small)> = None;
    for perm in permutations(k) {
        for signs in 0u32..(1 << k) {
            let s = |i: usize| if signs >> i & 1 == 1 { -1 } else { 1 };
            let c: Small = (0..k).map(|i| (0..k).map(|j| s(i) * s(j) * m[perm[i]][perm[j]]).collect()).collect();
            let key = block_key(&block_of(&c));
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, c));
            }
        }
    }
    best.expect("at least one permutation").1
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Congruence invariants of a definite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub det: BigInt,
    /// Number of vectors of norm `1, 2, ..., 8`.
    pub theta: Vec<usize>,
    /// Sorted coset minima; empty for even determinant.
    pub min_table: Vec<Rational>,
}

pub fn fingerprint(form: &QuadForm) -> Result<Fingerprint> {
    let p = form.positive_matrix();
    let e = Enumerator::new(&p);
    let mut theta = vec![0usize; 8];
    for (_, norm) in e.short_vectors(&Rational::from_integer(BigInt::from(8))) {
        let n = norm.to_integer().to_usize().expect("norm at most 8");
        theta[n - 1] += 1;
    }
    let det = form.abs_det();
    let min_table = if det.bit(0) { min_square(form)?.multiset() } else { Vec::new() };
    Ok(Fingerprint { det, theta, min_table })
}

/// Whether two definite forms are integrally congruent. `None` when the search budget runs out.
pub fn are_congruent(a: &QuadForm, b: &QuadForm) -> Option<bool> {
    if a.rank() != b.rank() || a.sign() != b.sign() || a.abs_det() != b.abs_det() {
        return Some(false);
    }
    let source = size_reduce(a.positive_matrix());
    let target = b.positive_matrix();
    let n = source.rows();
    let max_norm = (0..n).map(|i| source[(i, i)].clone()).max().unwrap_or_default();
    let enumerator = Enumerator::new(&target);
    let mut by_norm: HashMap<BigInt, Vec<Vec<BigInt>>> = HashMap::new();
    for (v, norm) in enumerator.short_vectors(&Rational::from_integer(max_norm)) {
        by_norm.entry(norm.to_integer()).or_default().push(v);
    }
    let candidates: Vec<&[Vec<BigInt>]> =
        (0..n).map(|i| by_norm.get(&source[(i, i)]).map_or(&[][..], Vec::as_slice)).collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Some(false);
    }
    let target_times: Vec<Vec<Vec<BigInt>>> =
        candidates.iter().map(|c| c.iter().map(|v| target.mul_vec(v)).collect()).collect();
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut budget = CONGRUENCE_BUDGET;
    search_isometry(&source, &candidates, &target_times, &mut chosen, &mut budget)
}

fn search_isometry(
    source: &IntMatrix,
    candidates: &[&[Vec<BigInt>]],
    target_times: &[Vec<Vec<BigInt>>],
    chosen: &mut Vec<(usize, usize)>,
    budget: &mut usize,
) -> Option<bool> {
    let i = chosen.len();
    if i == source.rows() {
        // Equal Gram matrices and equal determinants force a unimodular change of basis.
        return Some(true);
    }
    let mut exhausted = false;
    for (c, v) in candidates[i].iter().enumerate() {
        if *budget == 0 {
            exhausted = true;
            break;
        }
        *budget -= 1;
        let fits = chosen.iter().enumerate().all(|(j, &(row, idx))| {
            let pv = &target_times[row][idx];
            let dot: BigInt = pv.iter().zip(v).map(|(x, y)| x * y).sum();
            dot == source[(i, j)]
        });
        if !fits {
            continue;
        }
        chosen.push((i, c));
        match search_isometry(source, candidates, target_times, chosen, budget) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => exhausted = true,
        }
        chosen.pop();
        if exhausted {
            break;
        }
    }
    if exhausted {
        None
    } else {
        Some(false)
    }
}

/// Pairwise size reduction followed by sorting the diagonal; the result is congruent.
fn size_reduce(mut p: IntMatrix) -> IntMatrix {
    let n = p.rows();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let two_pij = BigInt::from(2) * &p[(i, j)];
                if two_pij.abs() <= p[(j, j)] {
                    continue;
                }
                // e_i -> e_i - t e_j with t = round(p_ij / p_jj)
                let t = round_div(&p[(i, j)], &p[(j, j)]);
                let neg_t = -t;
                p.add_col(i, j, &neg_t);
                p.add_row(i, j, &neg_t);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p[(a, a)].cmp(&p[(b, b)]));
    let rows: Vec<Vec<BigInt>> = order.iter().map(|&a| order.iter().map(|&b| p[(a, b)].clone()).collect()).collect();
    IntMatrix::from_rows(&rows).expect("square")
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    num_integer::Integer::div_floor(&(&two * a + b), &(&two * b))
}
