//! Matching engines against a naive search over every subgroup and every homomorphism.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use clasp::exact::{rat, Rational};
use clasp::lattice::{d_from_sharp, QuadForm};
use clasp::matching::{run_engine, Engine};
use clasp::profiles::{lens_d, DProfile, Orientation};
use clasp::{exact::IntMatrix, Sign};

pub type E = Vec<u64>;

pub fn elements(f: &[u64]) -> Vec<E> {
    let mut out = vec![vec![]];
    for &d in f {
        out = out.into_iter().flat_map(|e| (0..d).map(move |a| [e.clone(), vec![a]].concat())).collect();
    }
    out
}

pub fn add(f: &[u64], a: &[u64], b: &[u64]) -> E {
    a.iter().zip(b).zip(f).map(|((x, y), d)| (x + y) % d).collect()
}

pub fn closure(f: &[u64], gens: &[E]) -> BTreeSet<E> {
    let mut set = BTreeSet::from([vec![0; f.len()]]);
    let mut frontier: Vec<E> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add(f, &x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every subgroup, as the closure of every set of at most `rank` elements.
pub fn all_subgroups(f: &[u64]) -> Vec<BTreeSet<E>> {
    let els = elements(f);
    let mut seen = BTreeSet::new();
    let mut tuples: Vec<Vec<E>> = vec![vec![]];
    for _ in 0..f.len() {
        tuples =
            tuples.into_iter().flat_map(|t| els.iter().map(move |e| [t.clone(), vec![e.clone()]].concat())).collect();
    }
    for t in tuples {
        seen.insert(closure(f, &t));
    }
    seen.into_iter().collect()
}

/// Every surjective homomorphism `H -> Z/r` as a full table.
pub fn all_epis(f: &[u64], h: &BTreeSet<E>, r: u64) -> Vec<HashMap<E, u64>> {
    // Any generating set will do: grow greedily.
    let mut gens: Vec<E> = Vec::new();
    let mut span = closure(f, &gens);
    for x in h {
        if !span.contains(x) {
            gens.push(x.clone());
            span = closure(f, &gens);
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0u64; gens.len()];
    loop {
        let mut table: HashMap<E, u64> = HashMap::from([(vec![0; f.len()], 0)]);
        let mut frontier = vec![vec![0; f.len()]];
        let mut ok = true;
        while let Some(x) = frontier.pop() {
            for (g, &c) in gens.iter().zip(&choice) {
                let y = add(f, &x, g);
                let v = (table[&x] + c) % r;
                match table.get(&y) {
                    Some(&w) if w != v => ok = false,
                    Some(_) => {}
                    None => {
                        table.insert(y.clone(), v);
                        frontier.push(y);
                    }
                }
            }
        }
        if ok && table.values().collect::<BTreeSet<_>>().len() as u64 == r {
            out.push(table);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < r {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `i^2/2r`, less `1/2` unless `i = (r-1)/2 (mod 2)`, for the representative `i <= (r-1)/2`.
pub fn model(r: u64, i: u64) -> Rational {
    let j = i.min(r - i) as i64;
    let base = rat(j * j, 2 * r as i64);
    if (j as u64) % 2 == ((r - 1) / 2) % 2 {
        base
    } else {
        base - rat(1, 2)
    }
}

pub fn nonneg_even(x: &Rational) -> bool {
    x.is_integer() && !x.is_negative() && (x.numer() % BigInt::from(2)).is_zero()
}

/// Number of successful `(H, phi)` pairs with `phi` and `-phi` counted separately, and the
/// total number of epimorphisms enumerated.
pub fn naive(engine: Engine, p: &DProfile) -> (usize, usize, usize) {
    let f = p.group().factors().to_vec();
    let n = p.order() as u64;
    let subgroups = all_subgroups(&f);
    let value = |x: &E| p.value(x).clone();
    let mut hits = 0;
    let mut maps = 0;
    let mut subs = 0;
    let factorizations: Vec<(u64, u64)> = match engine {
        Engine::SymmetricMonotone => vec![(n, 1)],
        _ => (1..=n).filter(|s| n.is_multiple_of(s * s)).map(|s| (n / (s * s), s)).collect(),
    };
    for (r, s) in factorizations {
        for h in subgroups.iter().filter(|h| h.len() as u64 == r * s) {
            subs += 1;
            for phi in all_epis(&f, h, r) {
                maps += 1;
                let ok = match engine {
                    Engine::Subgroup => h.iter().all(|x| nonneg_even(&(model(r, phi[x]) - value(x)))),
                    _ => {
                        let mut fiber: HashMap<u64, Rational> = HashMap::new();
                        let constant = h.iter().all(|x| fiber.entry(phi[x]).or_insert_with(|| value(x)) == &value(x));
                        if !constant {
                            false
                        } else {
                            let t: Vec<Rational> = (0..=(r - 1) / 2).map(|i| model(r, i) - &fiber[&i]).collect();
                            let two = rat(2, 1);
                            let pos_even = t.iter().all(nonneg_even);
                            let mono = t.windows(2).all(|w| w[0] <= w[1]);
                            let bounded = t.windows(2).all(|w| w[1] <= &w[0] + &two);
                            let r = r as usize;
                            let sym = if r % 4 == 1 {
                                (0..).take_while(|j| 4 * j + 5 <= r).all(|j| t[2 * j] == t[2 * j + 1])
                            } else {
                                (1..).take_while(|j| 4 * j + 3 <= r).all(|j| t[2 * j - 1] == t[2 * j])
                            };
                            match engine {
                                Engine::MonotoneSubgroup => pos_even && mono,
                                _ => pos_even && mono && bounded && sym,
                            }
                        }
                    }
                };
                if ok {
                    hits += 1;
                }
            }
        }
    }
    (hits, maps, subs)
}

pub fn check(p: &DProfile) {
    for engine in [Engine::Subgroup, Engine::MonotoneSubgroup, Engine::SymmetricMonotone] {
        for sign in [Sign::Plus, Sign::Minus] {
            let oriented = if sign == Sign::Plus { p.clone() } else { p.negate() };
            let v = run_engine(engine, p, &[sign]).unwrap();
            let (hits, maps, subs) = naive(engine, &oriented);
            let cyclic_ok = p.group().rank() <= 1;
            if engine == Engine::SymmetricMonotone && !cyclic_ok {
                assert!(!v.found());
                continue;
            }
            assert_eq!(v.checked.maps, maps, "{engine:?} {} {sign}", p.label());
            assert_eq!(v.checked.subgroups, subs, "{engine:?} {} {sign}", p.label());
            let doubled: usize = v.witnesses.iter().map(|w| if w.r == 1 { 1 } else { 2 }).sum();
            assert_eq!(doubled, hits, "{engine:?} {} {sign}", p.label());
            for w in &v.witnesses {
                assert!(w.replay(engine, p).unwrap());
            }
        }
    }
}

pub fn lens(p: u64, q: i64) -> DProfile {
    lens_d(p, q, Orientation::Standard).unwrap()
}

/// Every `L(p,q)` with `p` odd and at most `max_p`, against the naive search.
pub fn lens_spaces_match(max_p: u64) {
    for p in (1..=max_p).step_by(2) {
        for q in 1..p.max(2) as i64 {
            if num_integer::gcd(p as i64, q) == 1 {
                check(&lens(p, q));
            }
        }
    }
}

/// Noncyclic groups: connected sums and two Goeritz profiles.
pub fn connected_sums_and_goeritz_profiles_match() {
    let l31 = lens(3, 1);
    let cases = vec![
        l31.connected_sum(&l31).unwrap(),
        l31.connected_sum(&l31.negate()).unwrap(),
        l31.connected_sum(&lens(9, 2)).unwrap(),
        lens(5, 1).connected_sum(&lens(5, 2)).unwrap(),
        lens(5, 1).connected_sum(&lens(5, 1).negate()).unwrap(),
        l31.connected_sum(&lens(3, 2)).unwrap().connected_sum(&l31).unwrap(),
        clasp::profiles::unknot_half_surgery_d(3)
            .unwrap()
            .to_profile()
            .connected_sum(&l31)
            .unwrap()
            .connected_sum(&l31.negate())
            .unwrap(),
        d_from_sharp(&QuadForm::new(IntMatrix::from_i64(&[&[6, -3], &[-3, 6]]), Sign::Plus).unwrap()).unwrap(),
        d_from_sharp(&QuadForm::new(IntMatrix::from_i64(&[&[3, 0], &[0, 9]]), Sign::Plus).unwrap()).unwrap(),
    ];
    for p in &cases {
        check(p);
    }
    // The diagonal copy of Z/3 in L(3,1) # -L(3,1) carries d = 0, so r = 1, s = 3 matches.
    let v = run_engine(Engine::Subgroup, &cases[1], &[Sign::Plus]).unwrap();
    assert!(v.witnesses.iter().any(|w| w.r == 1 && w.s == 3));
}

/// Odd `r` below 35, even bumps per fiber, and a relabelling unit.
pub fn perturbed_model_inputs() -> impl Strategy<Value = (u64, Vec<i64>, u64)> {
    ((0u64..17).prop_map(|k| 2 * k + 1), prop::collection::vec(0i64..2, 18), 1u64..35)
        .prop_filter("unit", |(r, _, u)| num_integer::gcd(*u, *r) == 1 || *r == 1)
}

/// The model of `S^3_{r/2}(O)` lowered by even bumps and relabelled by `u` still matches.
pub fn perturbed_model_matches(r: u64, bumps: &[i64], u: u64) -> Result<(), TestCaseError> {
    let values: Vec<Rational> = (0..r)
        .map(|g| {
            let i = (u * g) % r;
            let j = i.min(r - i) as usize;
            model(r, i) - rat(2 * bumps[j], 1)
        })
        .collect();
    let group = clasp::exact::FinAbGroup::cyclic(r);
    let p = DProfile::new(group, values, "perturbed model").unwrap();
    check(&p);
    prop_assert!(run_engine(Engine::Subgroup, &p, &[Sign::Plus]).unwrap().found());
    Ok(())
}
