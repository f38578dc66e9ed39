use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::DProfile;
use crate::error::{Error, Result};
use crate::exact::{rat, FinAbGroup, Rational};

/// Which of `L(p,q)` and `-L(p,q)` a lens-space profile describes.
///
/// `Standard` is `L(p,q)` as the boundary of the negative-definite linear plumbing on the
/// continued fraction of `p/q`; equivalently `-p/q` surgery on the unknot. `Reversed` is
/// `-L(p,q) = S^3_{p/q}(O)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Standard,
    Reversed,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Standard => Orientation::Reversed,
            Orientation::Reversed => Orientation::Standard,
        }
    }
}

/// Correction terms of a lens space, re-indexed so that the spin structure is the origin.
///
/// Element `g` of `Z/p` carries label `i0 + g` of the recursion, where `i0` is the fixed
/// point of the conjugation `i -> q - 1 - i (mod p)`.
pub fn lens_d(p: u64, q: i64, orientation: Orientation) -> Result<DProfile> {
    if p == 0 {
        return Err(Error::Invalid("lens space L(0, q) is not a rational homology sphere".into()));
    }
    let q = q.rem_euclid(p as i64) as u64;
    let g = p.gcd(&q);
    if g != 1 {
        return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: g as i64 });
    }
    let mut memo = HashMap::new();
    let d = surgery_recursion(p, q, &mut memo);
    let i0 = spin_label(p, q);
    let values: Vec<Rational> = (0..p)
        .map(|g| {
            let v = d[((i0 + g) % p) as usize].clone();
            match orientation {
                Orientation::Reversed => v,
                Orientation::Standard => -v,
            }
        })
        .collect();
    let label = match orientation {
        Orientation::Standard => format!("L({p},{q})"),
        Orientation::Reversed => format!("-L({p},{q})"),
    };
    DProfile::new(FinAbGroup::cyclic(p), values, label)
}

/// A solution of `2 i = q - 1 (mod p)`; the smaller one when `p` is even.
fn spin_label(p: u64, q: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    let t = (q + p - 1) % p;
    (0..p).find(|i| (2 * i) % p == t).expect("q is odd whenever p is even")
}

/// `d(S^3_{p/q}(O), i)` for `i = 0..p` in the labelling of the recursion.
fn surgery_recursion(p: u64, q: u64, memo: &mut HashMap<(u64, u64), Vec<Rational>>) -> Vec<Rational> {
    if p == 1 {
        return vec![Rational::zero()];
    }
    if let Some(v) = memo.get(&(p, q)) {
        return v.clone();
    }
    let sub = surgery_recursion(q, p % q, memo);
    let (pb, qb) = (BigInt::from(p), BigInt::from(q));
    let den = BigInt::from(4) * &pb * &qb;
    let out: Vec<Rational> = (0..p)
        .map(|i| {
            let t = BigInt::from(2 * i + 1) - &pb - &qb;
            let num = &t * &t - &pb * &qb;
            Rational::new(num, den.clone()) - &sub[(i % q) as usize]
        })
        .collect();
    memo.insert((p, q), out.clone());
    out
}

/// Correction terms of `r/2` surgery on the unknot, indexed so that `i = 0` is spin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryProfile {
    r: u64,
    values: Vec<Rational>,
}

impl SurgeryProfile {
    pub fn r(&self) -> u64 {
        self.r
    }

    /// `values[i]` for `i = 0..r`, with `values[i] = values[r - i]`.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The same values on `Z/r`.
    pub fn to_profile(&self) -> DProfile {
        DProfile::new(FinAbGroup::cyclic(self.r), self.values.clone(), format!("S^3_{{{}/2}}(O)", self.r))
            .expect("closed form is conjugation symmetric")
    }
}

/// Closed form for `d(S^3_{r/2}(O), i)`: `i^2/2r`, minus `1/2` when `i` and `(r - 1)/2` have
/// different parities, for the representative `0 <= i <= (r - 1)/2`.
pub fn unknot_half_surgery_d(r: u64) -> Result<SurgeryProfile> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenOrder(r.to_string()));
    }
    let half = (r - 1) / 2;
    let values = (0..r)
        .map(|i| {
            let j = i.min(r - i);
            let base = rat((j * j) as i64, (2 * r) as i64);
            if j % 2 == half % 2 {
                base
            } else {
                base - rat(1, 2)
            }
        })
        .collect();
    Ok(SurgeryProfile { r, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_list(s: &str) -> Vec<Rational> {
        s.split(',').map(|t| crate::exact::parse_rational(t).unwrap()).collect()
    }

    #[test]
    fn sphere() {
        let p = lens_d(1, 0, Orientation::Standard).unwrap();
        assert_eq!(p.values(), &[Rational::zero()]);
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(matches!(lens_d(9, 6, Orientation::Standard), Err(Error::NotCoprime { .. })));
        assert!(unknot_half_surgery_d(4).is_err());
    }

    #[test]
    fn small_surgeries() {
        assert_eq!(unknot_half_surgery_d(3).unwrap().values(), parse_list("-1/2,1/6,1/6").as_slice());
        assert_eq!(unknot_half_surgery_d(5).unwrap().values(), parse_list("0,-2/5,2/5,2/5,-2/5").as_slice());
        assert_eq!(unknot_half_surgery_d(1).unwrap().values(), &[Rational::zero()]);
    }

    #[test]
    fn orientations_are_opposite() {
        let a = lens_d(17, 4, Orientation::Standard).unwrap();
        let b = lens_d(17, 4, Orientation::Reversed).unwrap();
        assert_eq!(a.negate(), b);
    }

    #[test]
    fn reducing_q_modulo_p() {
        assert_eq!(lens_d(17, 4 + 17, Orientation::Standard).unwrap(), lens_d(17, 4, Orientation::Standard).unwrap());
    }

    #[test]
    fn even_order_lens_space_is_symmetric() {
        assert!(lens_d(8, 3, Orientation::Standard).is_ok());
    }
}
