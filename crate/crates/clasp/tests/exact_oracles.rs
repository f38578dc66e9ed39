//! Group-theoretic routines against brute force on every abelian group of order at most 81.

use proptest::prelude::*;

mod common;

use common::exact::*;

#[test]
fn subgroup_enumeration_matches_brute_force() {
    subgroups_match_brute_force(&all_groups());
}

#[test]
fn epimorphism_counts_match_brute_force() {
    epimorphisms_match_brute_force(&all_groups());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smith_form_matches_determinantal_divisors(rows in square(4)) {
        smith_form_matches(&rows)?;
    }

    #[test]
    fn cokernel_order_is_the_determinant(rows in square(4)) {
        cokernel_matches(&rows)?;
    }
}
