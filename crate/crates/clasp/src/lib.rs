//! Exact Heegaard Floer correction terms of double branched covers, and the lattice and
//! matching obstructions they feed: unknotting number one, concordance unknotting number one
//! and bounds on the four-ball crossing number.

pub mod error;
pub mod exact;
pub mod ingest;
pub mod lattice;
pub mod matching;
pub mod obstruct;
pub mod profiles;
mod sign;

pub use error::{Error, Result};
pub use sign::Sign;
