//! Brute-force oracles for coset minimization and form enumeration.

use std::collections::BTreeMap;

use clasp::exact::{IntMatrix, Rational};
use clasp::lattice::{are_congruent, enumerate_half_integer_forms, min_square, CosetSpace, QuadForm};
use clasp::Sign;
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn box_minima(form: &QuadForm, radius: i64) -> BTreeMap<Vec<u64>, Rational> {
    let space = CosetSpace::new(form).unwrap();
    let n = form.rank();
    let p = form.positive_matrix();
    let mut best: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
    let mut xi = vec![0i64; n];
    fn rec(
        i: usize,
        xi: &mut Vec<i64>,
        p: &IntMatrix,
        radius: i64,
        space: &CosetSpace,
        sign: Sign,
        best: &mut BTreeMap<Vec<u64>, Rational>,
    ) {
        if i == xi.len() {
            let v: Vec<BigInt> = xi.iter().map(|&x| BigInt::from(x)).collect();
            let g = space.coset_of(&v).unwrap();
            let value = space.normalized_square(&v);
            let better = |old: &Rational| match sign {
                Sign::Plus => value < *old,
                Sign::Minus => value > *old,
            };
            if best.get(&g).is_none_or(better) {
                best.insert(g, value);
            }
            return;
        }
        let parity = i64::try_from(&p[(i, i)]).unwrap().rem_euclid(2);
        let mut x = -radius;
        if (x - parity).rem_euclid(2) != 0 {
            x += 1;
        }
        while x <= radius {
            xi[i] = x;
            rec(i + 1, xi, p, radius, space, sign, best);
            x += 2;
        }
    }
    rec(0, &mut xi, &p, radius, &space, form.sign(), &mut best);
    best
}

pub fn small_form() -> impl Strategy<Value = QuadForm> {
    (1usize..=3, prop::collection::vec(-3i64..=3, 6), prop::collection::vec(1i64..=7, 3), any::<bool>())
        .prop_filter_map("positive definite with small determinant", |(n, off, diag, negative)| {
            let mut rows = vec![vec![0i64; n]; n];
            let mut k = 0;
            for i in 0..n {
                rows[i][i] = diag[i];
                for j in i + 1..n {
                    rows[i][j] = off[k];
                    rows[j][i] = off[k];
                    k += 1;
                }
            }
            let m = IntMatrix::from_rows(&rows).unwrap();
            let m = if negative { m.neg() } else { m };
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            let form = QuadForm::new(m, sign).ok()?;
            (form.abs_det() <= BigInt::from(50)).then_some(form)
        })
}

/// Every positive-definite `[[A, I], [I, 2I]]` with entries of `A` in `[-bound, bound]`.
pub fn brute_force_forms(k: usize, det: u64, odd_count: usize, bound: i64) -> Vec<QuadForm> {
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut values = vec![-bound; slots.len()];
    loop {
        let mut a = vec![vec![0i64; k]; k];
        for (&(i, j), &v) in slots.iter().zip(&values) {
            a[i][j] = v;
            a[j][i] = v;
        }
        let odd = (0..k).filter(|&i| a[i][i].rem_euclid(2) == 1).count();
        if odd == odd_count && (0..k).all(|i| a[i][i] > 0) {
            if let Ok(f) = QuadForm::half_integer(&IntMatrix::from_rows(&a).unwrap()) {
                if f.abs_det() == BigInt::from(det) {
                    out.push(f);
                }
            }
        }
        let mut idx = 0;
        loop {
            if idx == values.len() {
                return out;
            }
            values[idx] += 1;
            if values[idx] > bound {
                values[idx] = -bound;
                idx += 1;
            } else {
                break;
            }
        }
    }
}

/// The box always contains the enumerated representatives, so every enumerated class is also
/// seen by the brute force; the converse is the completeness check.
pub fn check_against_brute_force(k: usize, det: u64, odd_count: usize, min_bound: i64) {
    let found = enumerate_half_integer_forms(k, det, odd_count).unwrap();
    let mut bound = min_bound;
    for (i, a) in found.iter().enumerate() {
        for b in &found[..i] {
            assert_eq!(are_congruent(a, b), Some(false), "duplicate class for k={k} det={det} odd={odd_count}");
        }
        let block = a.half_integer_block().unwrap();
        bound = block.to_i64_rows().unwrap().iter().flatten().fold(bound, |m, x| m.max(x.abs()));
    }
    for f in brute_force_forms(k, det, odd_count, bound) {
        assert!(
            found.iter().any(|g| are_congruent(&f, g) == Some(true)),
            "missed class of\n{f}for k={k} det={det} odd={odd_count}"
        );
    }
}

pub fn coset_minima_match_a_box(form: &QuadForm) -> Result<(), TestCaseError> {
    let table = min_square(form).unwrap();
    table.certify().unwrap();
    let p = form.positive_matrix();
    let radius = (0..form.rank()).map(|i| i64::try_from(&p[(i, i)]).unwrap()).max().unwrap() * 3 + 2;
    let oracle = box_minima(form, radius);
    prop_assert_eq!(oracle.len(), table.values().len());
    for (g, v) in oracle {
        prop_assert_eq!(table.value(&g), &v);
    }
    Ok(())
}

pub fn rank_two_enumeration_is_complete() {
    for det in (1..=25).step_by(2) {
        for odd in 0..=2 {
            check_against_brute_force(2, det, odd, 9);
        }
    }
}

pub fn rank_three_enumeration_is_complete() {
    for det in (1..=9).step_by(2) {
        for odd in 0..=3 {
            check_against_brute_force(3, det, odd, 3);
        }
    }
}
