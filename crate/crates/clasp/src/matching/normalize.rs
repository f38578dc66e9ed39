use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{display_rational, is_even_integer, Rational};
use crate::profiles::unknot_half_surgery_d;

/// A condition on normalized d-invariants, or on the fibers of a matching map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    FiberConstancy,
    Positivity,
    Evenness,
    Symmetry,
    Monotonicity,
    Boundedness,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::FiberConstancy => "fiber-constancy",
            Condition::Positivity => "positivity",
            Condition::Evenness => "evenness",
            Condition::Symmetry => "symmetry",
            Condition::Monotonicity => "monotonicity",
            Condition::Boundedness => "boundedness",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `d~_i = d(S^3_{r/2}(O), i) - d_i` for `i = 0..=(r-1)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedSeq {
    r: u64,
    values: Vec<Rational>,
}

/// Normalizes values on `Z/r` against `r/2` surgery on the unknot.
pub fn normalize(values: &[Rational], r: u64) -> Result<NormalizedSeq> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenOrder(r.to_string()));
    }
    if values.len() as u64 != r {
        return Err(Error::OrderMismatch { expected: r.to_string(), found: values.len().to_string() });
    }
    if let Some(i) = (1..r as usize).find(|&i| values[i] != values[r as usize - i]) {
        return Err(Error::Asymmetric(format!("index {i} of Z/{r}")));
    }
    let model = unknot_half_surgery_d(r)?;
    let half = ((r - 1) / 2) as usize;
    let values = (0..=half).map(|i| &model.values()[i] - &values[i]).collect();
    Ok(NormalizedSeq { r, values })
}

impl NormalizedSeq {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn positivity(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn evenness(&self) -> bool {
        self.values.iter().all(is_even_integer)
    }

    /// Pairing pattern of `r mod 4`: `d~_{2j} = d~_{2j+1}` for `r = 1`, `d~_{2j-1} = d~_{2j}` for `r = 3`.
    pub fn symmetry(&self) -> bool {
        let r = self.r as usize;
        let v = &self.values;
        if r % 4 == 1 {
            (0..).take_while(|&j| 4 * j + 5 <= r).all(|j| v[2 * j] == v[2 * j + 1])
        } else {
            (1..=(r.saturating_sub(3)) / 4).all(|j| v[2 * j - 1] == v[2 * j])
        }
    }

    pub fn monotonicity(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn boundedness(&self) -> bool {
        let two = Rational::from_integer(2.into());
        self.values.windows(2).all(|w| w[1] <= &w[0] + &two)
    }

    pub fn holds(&self, c: Condition) -> bool {
        match c {
            Condition::FiberConstancy => true,
            Condition::Positivity => self.positivity(),
            Condition::Evenness => self.evenness(),
            Condition::Symmetry => self.symmetry(),
            Condition::Monotonicity => self.monotonicity(),
            Condition::Boundedness => self.boundedness(),
        }
    }

    /// Comma-separated entries, with runs written as `v^n`.
    pub fn compact(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.values.len() {
            let mut j = i;
            while j + 1 < self.values.len() && self.values[j + 1] == self.values[i] {
                j += 1;
            }
            let v = display_rational(&self.values[i]);
            parts.push(if j > i { format!("{v}^{}", j - i + 1) } else { v });
            i = j + 1;
        }
        parts.join(",")
    }
}

impl fmt::Display for NormalizedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.values.iter().map(display_rational).collect();
        write!(f, "[{}]", list.join(","))
    }
}
