//! Brute-force oracles shared by the oracle suites and the acceptance run.

#![allow(dead_code, unused_imports)]

pub mod exact;
pub mod lattice;
pub mod matching;
