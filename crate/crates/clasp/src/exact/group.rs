use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::IntMatrix;
use super::snf::Cokernel;
use crate::error::{Error, Result};

/// Group element as a tuple of residues `a_i in [0, d_i)`.
pub type Elem = Vec<u64>;

/// Largest group order the combinatorial routines will enumerate.
pub const ENUMERATION_LIMIT: usize = 1 << 22;

/// Finite abelian group `Z/d_1 + ... + Z/d_m` in invariant-factor form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

impl FinAbGroup {
    /// Validates `d_i >= 2` and `d_i | d_{i+1}`.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::Invalid(format!("invariant factor {d} < 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid(format!("invariant factors {} does not divide {}", w[0], w[1])));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    /// `Z/n`, or the trivial group for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: vec![n] }
        }
    }

    /// Direct sum of cyclic groups of arbitrary orders, brought into invariant-factor form.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Singular);
        }
        Ok(Cokernel::new(&IntMatrix::diagonal(&orders.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>()))?
            .group()
            .clone())
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().map(|&d| BigUint::from(d)).product()
    }

    /// Order as a `usize`, or an error when the group is too large to enumerate.
    pub fn enumerable_order(&self) -> Result<usize> {
        self.order()
            .to_usize()
            .filter(|&n| n <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::TooLarge(self.order().to_string()))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.factors.len()]
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        g.len() == self.factors.len() && g.iter().zip(&self.factors).all(|(a, d)| a < d)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Elem {
        a.iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        self.add(a, &self.neg(b))
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, k: i64, a: &[u64]) -> Elem {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| {
                let m = (i128::from(k) * i128::from(x)).rem_euclid(i128::from(d));
                m as u64
            })
            .collect()
    }

    /// Order of an element: lcm of `d_i / gcd(a_i, d_i)`.
    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.factors).fold(1u64, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// Position of `a` in lexicographic order.
    pub fn index_of(&self, a: &[u64]) -> usize {
        a.iter().zip(&self.factors).fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    /// Element at lexicographic position `idx`.
    pub fn elem_at(&self, mut idx: usize) -> Elem {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        out
    }

    /// All elements in lexicographic order.
    ///
    /// # Panics
    /// Panics when the order exceeds [`ENUMERATION_LIMIT`].
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let n = self.enumerable_order().expect("group too large to enumerate");
        (0..n).map(move |i| self.elem_at(i))
    }

    /// Exponent (largest invariant factor).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn order_is_odd(&self) -> bool {
        self.factors.iter().all(|d| d % 2 == 1)
    }

    /// Multiplicative inverse of 2 modulo the exponent, for odd groups.
    pub fn half(&self, a: &[u64]) -> Option<Elem> {
        if !self.order_is_odd() {
            return None;
        }
        let e = self.exponent();
        let inv2 = e.div_ceil(2);
        Some(self.scale(inv2 as i64, a))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FinAbGroup::new(vec![3, 9]).is_ok());
        assert!(FinAbGroup::new(vec![9, 3]).is_err());
        assert!(FinAbGroup::new(vec![1, 3]).is_err());
        assert_eq!(FinAbGroup::from_orders(&[3, 5]).unwrap().factors(), &[15]);
        assert_eq!(FinAbGroup::from_orders(&[9, 3, 1]).unwrap().factors(), &[3, 9]);
        assert!(FinAbGroup::from_orders(&[1]).unwrap().is_trivial());
    }

    #[test]
    fn indexing_is_lexicographic() {
        let g = FinAbGroup::new(vec![3, 9]).unwrap();
        let all: Vec<Elem> = g.elements().collect();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, e) in all.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
    }

    #[test]
    fn arithmetic() {
        let g = FinAbGroup::new(vec![3, 9]).unwrap();
        let a = vec![1, 5];
        assert_eq!(g.add(&a, &g.neg(&a)), g.zero());
        assert_eq!(g.element_order(&a), 9);
        assert_eq!(g.element_order(&[1, 3]), 3);
        assert_eq!(g.scale(-1, &a), g.neg(&a));
        let h = g.half(&a).unwrap();
        assert_eq!(g.add(&h, &h), a);
        assert_eq!(g.order(), BigUint::from(27u32));
        assert_eq!(g.to_string(), "Z/3 + Z/9");
    }
}
