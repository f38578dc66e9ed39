use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{CosElt, CosRing, IntMatrix, Rational, RealRoot};

/// Input for a Levine-Tristram computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeifertData {
    Matrix(IntMatrix),
    /// The positive torus knot `T(p,q)`.
    Torus {
        p: u64,
        q: u64,
    },
}

/// Signature and nullity of `(1 - z) V + (1 - conj z) V^T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LtValue {
    pub signature: i64,
    pub nullity: usize,
}

impl SeifertData {
    pub fn torus(p: u64, q: u64) -> Result<SeifertData> {
        if p < 2 || q < 2 || p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: p.gcd(&q) as i64 });
        }
        Ok(SeifertData::Torus { p, q })
    }

    pub fn matrix(v: IntMatrix) -> Result<SeifertData> {
        if !v.is_square() {
            return Err(Error::Dimension(format!("Seifert matrix is {}x{}", v.rows(), v.cols())));
        }
        Ok(SeifertData::Matrix(v))
    }

    /// A Seifert matrix; for `T(p,q)` this is `-(G_p (x) G_q)` with `G_n` the
    /// `(n-1) x (n-1)` upper bidiagonal matrix with `1` on the diagonal and `-1` above it.
    pub fn seifert_matrix(&self) -> IntMatrix {
        match self {
            SeifertData::Matrix(v) => v.clone(),
            SeifertData::Torus { p, q } => {
                let (a, b) = ((*p - 1) as usize, (*q - 1) as usize);
                let g = |i: usize, j: usize| -> i64 {
                    if i == j {
                        1
                    } else if j == i + 1 {
                        -1
                    } else {
                        0
                    }
                };
                let mut v = IntMatrix::zeros(a * b, a * b);
                for i in 0..a {
                    for j in 0..a {
                        for k in 0..b {
                            for l in 0..b {
                                let x = g(i, j) * g(k, l);
                                if x != 0 {
                                    v[(i * b + k, j * b + l)] = BigInt::from(-x);
                                }
                            }
                        }
                    }
                }
                v
            }
        }
    }
}

/// Levine-Tristram signature and nullity at `z = exp(2 pi i angle)`.
///
/// Torus knots use the lattice-point count; Seifert matrices use [`levine_tristram_matrix`].
pub fn levine_tristram(s: &SeifertData, angle: &Rational) -> Result<LtValue> {
    match s {
        SeifertData::Torus { p, q } => torus_signature(*p, *q, angle),
        SeifertData::Matrix(v) => levine_tristram_matrix(v, angle),
    }
}

/// Splits `angle` into `(a, b)` with `0 < a < b` coprime.
fn reduce_angle(angle: &Rational) -> Result<(i64, u64)> {
    let frac = angle - angle.floor();
    if frac.is_zero() {
        return Err(Error::Invalid("z = 1: the Levine-Tristram form vanishes".into()));
    }
    let a = frac.numer().to_i64().ok_or_else(|| Error::TooLarge(angle.to_string()))?;
    let b = frac.denom().to_u64().ok_or_else(|| Error::TooLarge(angle.to_string()))?;
    Ok((a, b))
}

/// For `x = a/b` in `(0,1)`, with `S = {i/p + j/q}`: the signature is
/// `#{s < x} + #{s > x + 1} - #{x < s < x + 1}` and the nullity counts `s` in `{x, x + 1}`.
pub fn torus_signature(p: u64, q: u64, angle: &Rational) -> Result<LtValue> {
    SeifertData::torus(p, q)?;
    let (a, b) = reduce_angle(angle)?;
    let (p, q, a, b) = (p as i128, q as i128, a as i128, b as i128);
    let (x, one) = (a * p * q, b * p * q);
    let mut signature = 0i64;
    let mut nullity = 0usize;
    for i in 1..p {
        for j in 1..q {
            let s = b * (i * q + j * p);
            if s == x || s == x + one {
                nullity += 1;
            } else if s > x && s < x + one {
                signature -= 1;
            } else {
                signature += 1;
            }
        }
    }
    Ok(LtValue { signature, nullity })
}

/// Exact signature and nullity for an arbitrary Seifert matrix.
///
/// With `c = cos(2 pi angle)` and `j = i sin(2 pi angle)`, the form is `(1 - c)(V + V^T) + j (V^T - V)`,
/// computed at twice its size over `Z[2c]`.
/// Its characteristic polynomial has coefficients in `Q(c)`; their signs are decided by Sturm
/// sequences, and Descartes' rule is exact for a polynomial with only real roots.
pub fn levine_tristram_matrix(v: &IntMatrix, angle: &Rational) -> Result<LtValue> {
    if !v.is_square() {
        return Err(Error::Dimension(format!("Seifert matrix is {}x{}", v.rows(), v.cols())));
    }
    let (a, b) = reduce_angle(angle)?;
    let n = v.rows();
    if n == 0 {
        return Ok(LtValue { signature: 0, nullity: 0 });
    }
    let root = RealRoot::cos_two_pi(a, b);
    let ring = CosRing::for_root(&root);
    // Twice the form, in y = 2c and k = 2j: (2 - y)(V + V^T) + k (V^T - V).
    let small = |x: BigInt| x.to_i64().ok_or_else(|| Error::Invalid("Seifert matrix entry too large".into()));
    let mut h: Vec<Vec<CosElt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let sym = small(&v[(i, k)] + &v[(k, i)])?;
            let anti = small(&v[(k, i)] - &v[(i, k)])?;
            row.push(ring.add(&ring.real(&[2 * sym, -sym]), &ring.imag(anti)));
        }
        h.push(row);
    }
    let chi = ring.charpoly(&h);
    let signs: Vec<Ordering> = chi
        .iter()
        .map(|c| {
            debug_assert!(c.b.is_empty(), "characteristic polynomial of a Hermitian matrix is real");
            root.sign_of(&ring.real_part_in_cos(c))
        })
        .collect();
    // chi[i] is the coefficient of t^(n - i).
    let nullity = signs.iter().rev().take_while(|s| **s == Ordering::Equal).count();
    let changes = |flip_odd: bool| -> usize {
        let seq: Vec<Ordering> = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != Ordering::Equal)
            .map(|(i, s)| if flip_odd && (n - i) % 2 == 1 { s.reverse() } else { *s })
            .collect();
        seq.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let positive = changes(false) as i64;
    let negative = changes(true) as i64;
    Ok(LtValue { signature: positive - negative, nullity })
}

/// Determinant of the Levine-Tristram form at `z = -1`, that is `det(V + V^T)`, in absolute value.
pub fn knot_determinant(v: &IntMatrix) -> Result<BigInt> {
    let mut sym = v.clone();
    for i in 0..v.rows() {
        for k in 0..v.cols() {
            sym[(i, k)] = &v[(i, k)] + &v[(k, i)];
        }
    }
    Ok(sym.det()?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn trefoil() {
        let v = IntMatrix::from_i64(&[&[-1, 1], &[0, -1]]);
        assert_eq!(levine_tristram_matrix(&v, &rat(1, 2)).unwrap(), LtValue { signature: -2, nullity: 0 });
        assert_eq!(knot_determinant(&v).unwrap(), BigInt::from(3));
        // Roots of t^2 - t + 1 sit at angle 1/6.
        assert_eq!(levine_tristram_matrix(&v, &rat(1, 6)).unwrap(), LtValue { signature: -1, nullity: 1 });
        assert_eq!(levine_tristram_matrix(&v, &rat(1, 7)).unwrap(), LtValue { signature: 0, nullity: 0 });
        assert_eq!(torus_signature(2, 3, &rat(1, 6)).unwrap(), LtValue { signature: -1, nullity: 1 });
    }

    #[test]
    fn torus_matrix_is_a_seifert_matrix_of_the_right_knot() {
        let s = SeifertData::torus(2, 3).unwrap();
        assert_eq!(s.seifert_matrix(), IntMatrix::from_i64(&[&[-1, 1], &[0, -1]]));
        let v = SeifertData::torus(3, 4).unwrap().seifert_matrix();
        assert_eq!(v.rows(), 6);
        assert_eq!(knot_determinant(&v).unwrap(), BigInt::from(3));
        let v = SeifertData::torus(3, 5).unwrap().seifert_matrix();
        assert_eq!(knot_determinant(&v).unwrap(), BigInt::from(1));
    }

    #[test]
    fn degenerate_angle_is_rejected() {
        let v = IntMatrix::from_i64(&[&[-1, 1], &[0, -1]]);
        assert!(levine_tristram_matrix(&v, &rat(0, 1)).is_err());
        assert!(levine_tristram_matrix(&v, &rat(3, 1)).is_err());
        assert!(torus_signature(2, 3, &rat(1, 1)).is_err());
        assert!(SeifertData::torus(4, 6).is_err());
    }
}
