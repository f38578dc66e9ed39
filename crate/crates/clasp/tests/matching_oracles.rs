//! Matching engines against a naive search over every subgroup and every homomorphism.

use proptest::prelude::*;

mod common;

use common::matching::*;

#[test]
fn lens_spaces_up_to_35() {
    lens_spaces_match(35);
}

#[test]
fn connected_sums_and_goeritz_profiles() {
    connected_sums_and_goeritz_profiles_match();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perturbed_models((r, bumps, u) in perturbed_model_inputs()) {
        perturbed_model_matches(r, &bumps, u)?;
    }
}
