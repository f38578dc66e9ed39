//! Exact arithmetic: rationals, polynomials, integer matrices, Smith normal form and finite
//! abelian groups.

mod group;
mod hom;
mod matrix;
mod poly;
mod rational;
mod snf;
mod subgroup;

pub use group::{Elem, FinAbGroup, ENUMERATION_LIMIT};
pub use hom::{epimorphisms, isomorphisms, subgroup_epimorphisms, GroupMap};
pub use matrix::IntMatrix;
pub(crate) use poly::{CosElt, CosRing};
pub use poly::{Poly, RealRoot};
pub use rational::{
    display_rational, format_rational, is_even_integer, is_nonneg_even, parse_rational, rat, rat_int, Rational,
};
pub use snf::{cokernel, smith_normal_form, Cokernel, Smith};
pub use subgroup::{subgroups_of_order, Subgroup};
