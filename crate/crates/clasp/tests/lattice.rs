use clasp::exact::{rat, IntMatrix, Rational};
use clasp::lattice::{
    are_congruent, char_cosets, d_from_sharp, enumerate_half_integer_forms, enumerate_half_integer_forms_detailed,
    lens_chain, lens_plumbing, min_square, torus_cover_plumbing, QuadForm,
};
use clasp::profiles::{lens_d, Orientation};
use clasp::Sign;

fn positive(rows: &[&[i64]]) -> QuadForm {
    QuadForm::new(IntMatrix::from_i64(rows), Sign::Plus).unwrap()
}

fn times(values: &[Rational], k: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = values.iter().map(|x| x * Rational::from_integer(k.into())).collect();
    v.sort();
    v
}

#[test]
fn goeritz_form_of_pretzel_333() {
    let q = positive(&[&[6, -3], &[-3, 6]]);
    let p = d_from_sharp(&q).unwrap();
    assert_eq!(p.group().factors(), &[3, 9]);
    assert_eq!(p.spin_value(), &rat(-1, 2));
    let printed = [-9, 19, -5, 27, 7, 7, 27, -5, 19, 3, -5, 7, 3, 19, 19, 3, 7, -5, 3, -5, 7, 3, 19, 19, 3, 7, -5];
    let mut expect: Vec<Rational> = printed.iter().map(|&x| Rational::from_integer(x.into())).collect();
    expect.sort();
    assert_eq!(times(p.values(), 18), expect);
}

#[test]
fn determinant_33_forms() {
    let printed = [
        positive(&[&[6, 0, 1, 0], &[0, 2, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, 2]]),
        positive(&[&[4, 2, 1, 0], &[2, 4, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, 2]]),
    ];
    let found = enumerate_half_integer_forms_detailed(2, 33, 0).unwrap();
    println!("{} reduced, {} lifted", found.reduced_candidates, found.lifted_candidates);
    assert!(found.undecided.is_empty());
    assert_eq!(found.forms.len(), 2);
    for (f, p) in found.forms.iter().zip(&printed) {
        assert_eq!(f, p);
        assert_eq!(are_congruent(f, p), Some(true));
    }
    assert_eq!(char_cosets(&printed[0]).unwrap().len(), 33);
    for (q, v) in printed.iter().zip([rat(-9, 11), rat(-7, 11)]) {
        let t = min_square(q).unwrap();
        t.certify().unwrap();
        assert_eq!(t.group().factors(), &[33]);
        assert!(t.values().contains(&v));
    }
}

#[test]
fn no_forms_for_9_49() {
    assert!(enumerate_half_integer_forms(2, 1, 0).unwrap().is_empty());
    assert!(enumerate_half_integer_forms(2, 25, 0).unwrap().is_empty());
}

#[test]
fn determinant_15_forms() {
    let printed = [
        positive(&[&[3, 0, 1, 0], &[0, 2, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, 2]]),
        positive(&[&[8, 0, 1, 0], &[0, 1, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, 2]]),
    ];
    let found = enumerate_half_integer_forms(2, 15, 1).unwrap();
    assert_eq!(found, printed);
}

#[test]
fn torus_knot_covers() {
    let a = d_from_sharp(&torus_cover_plumbing(3, 10).unwrap()).unwrap();
    let b = d_from_sharp(&torus_cover_plumbing(5, 6).unwrap()).unwrap();
    let y = a.connected_sum(&b.negate()).unwrap();
    assert_eq!(y.order(), 15);
    assert_eq!(y.max_value(), &rat(11, 10));
}

#[test]
fn lens_chains_match_the_recursion() {
    for p in (3..=25u64).step_by(2) {
        for q in 1..p as i64 {
            if num_integer::gcd(p as i64, q) != 1 {
                continue;
            }
            let from_recursion = lens_d(p, q, Orientation::Standard).unwrap().multiset();
            let from_form = d_from_sharp(&lens_plumbing(p, q).unwrap()).unwrap();
            assert_eq!(from_form.multiset(), from_recursion, "L({p},{q})");
            for sign in [Sign::Plus, Sign::Minus] {
                let chain = lens_chain(p, q, sign).unwrap();
                if chain.rank() <= 10 {
                    assert_eq!(d_from_sharp(&chain).unwrap().multiset(), from_recursion, "L({p},{q}) {sign}");
                }
            }
        }
    }
}
