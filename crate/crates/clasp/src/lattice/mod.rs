//! Definite integral quadratic forms: characteristic cosets, certified minima of
//! `xi^T Q^-1 xi`, boundary d-invariants of sharp fillings, enumeration of forms of
//! half-integer surgery type, and plumbing matrices.

mod cosets;
mod cvp;
mod forms;
mod plumbing;

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::sign::Sign;

pub use cosets::{char_cosets, d_from_sharp, min_square, CharCoset, CosetSpace, MinTable};
pub use forms::{
    are_congruent, enumerate_half_integer_forms, enumerate_half_integer_forms_detailed, fingerprint, Fingerprint,
    FormEnumeration, MAX_FORM_RANK,
};
pub use plumbing::{
    brieskorn_plumbing, continued_fraction, lens_chain, lens_plumbing, linear_plumbing, seifert_plumbing,
    star_plumbing, torus_cover_plumbing, SeifertInvariants,
};

/// Symmetric integer matrix whose product with `sign` is positive definite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    matrix: IntMatrix,
    sign: Sign,
}

impl QuadForm {
    pub fn new(matrix: IntMatrix, sign: Sign) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::Invalid("form matrix is not symmetric".into()));
        }
        let definite = if sign == Sign::Plus { matrix.clone() } else { matrix.neg() };
        if !definite.is_positive_definite() {
            return Err(Error::Invalid(format!(
                "form is not {} definite",
                if sign == Sign::Plus { "positive" } else { "negative" }
            )));
        }
        Ok(QuadForm { matrix, sign })
    }

    /// Infers the sign from the matrix.
    pub fn definite(matrix: IntMatrix) -> Result<Self> {
        let sign = if matrix.rows() > 0 && matrix[(0, 0)].is_negative() { Sign::Minus } else { Sign::Plus };
        Self::new(matrix, sign)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det().expect("square")
    }

    pub fn abs_det(&self) -> BigInt {
        self.det().abs()
    }

    /// `sign * matrix`, positive definite.
    pub fn positive_matrix(&self) -> IntMatrix {
        match self.sign {
            Sign::Plus => self.matrix.clone(),
            Sign::Minus => self.matrix.neg(),
        }
    }

    /// The form of `-X`.
    pub fn negated(&self) -> QuadForm {
        QuadForm { matrix: self.matrix.neg(), sign: -self.sign }
    }

    /// Orthogonal sum; both summands must have the same sign.
    pub fn block_sum(&self, other: &QuadForm) -> Result<QuadForm> {
        if self.sign != other.sign {
            return Err(Error::Invalid("orthogonal sum of forms of opposite definiteness".into()));
        }
        Ok(QuadForm { matrix: self.matrix.block_sum(&other.matrix), sign: self.sign })
    }

    /// Even means every diagonal entry is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.matrix[(i, i)].is_even())
    }

    /// The block `A` when the matrix literally has the shape `[[A, I], [I, 2I]]`.
    pub fn half_integer_block(&self) -> Option<IntMatrix> {
        let n = self.rank();
        if !n.is_multiple_of(2) || self.sign != Sign::Plus {
            return None;
        }
        let k = n / 2;
        for i in 0..k {
            for j in 0..k {
                let id = if i == j { BigInt::one() } else { BigInt::zero() };
                if self.matrix[(i, k + j)] != id || self.matrix[(k + i, j)] != id {
                    return None;
                }
                if self.matrix[(k + i, k + j)] != BigInt::from(2) * &id {
                    return None;
                }
            }
        }
        let mut a = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                a[(i, j)] = self.matrix[(i, j)].clone();
            }
        }
        Some(a)
    }

    /// `[[A, I], [I, 2I]]`.
    pub fn half_integer(a: &IntMatrix) -> Result<QuadForm> {
        let k = a.rows();
        let mut m = IntMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = a[(i, j)].clone();
            }
            m[(i, k + i)] = BigInt::one();
            m[(k + i, i)] = BigInt::one();
            m[(k + i, k + i)] = BigInt::from(2);
        }
        QuadForm::new(m, Sign::Plus)
    }

    /// Text form: `sign: +|-` then the matrix rows.
    pub fn to_text(&self) -> String {
        format!("sign: {}\n{}", self.sign, self.matrix)
    }

    /// Parses [`QuadForm::to_text`]; lines starting with `#` are comments.
    pub fn from_text(text: &str) -> Result<QuadForm> {
        let mut header = None;
        let mut body = String::new();
        let mut body_start = 0;
        for (k, line) in text.lines().enumerate() {
            let t = line.trim();
            if header.is_none() {
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let rest = t
                    .strip_prefix("sign:")
                    .ok_or_else(|| Error::parse(k + 1, 1, "expected header `sign: +` or `sign: -`"))?;
                header = Some(rest.parse::<Sign>().map_err(|e| Error::parse(k + 1, 7, e.to_string()))?);
                body_start = k + 2;
                continue;
            }
            if t.starts_with('#') {
                body.push('\n');
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let sign = header.ok_or_else(|| Error::parse(1, 1, "missing `sign:` header"))?;
        let matrix = IntMatrix::parse(&body, body_start)?;
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::parse(body_start, 1, "form matrix must be square and nonempty"));
        }
        QuadForm::new(matrix, sign).map_err(|e| Error::parse(body_start, 1, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<QuadForm> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text).map_err(|e| match e {
            Error::Parse { line, column, message } => {
                Error::Invalid(format!("{}:{line}:{column}: {message}", path.display()))
            }
            other => other,
        })
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(QuadForm::new(IntMatrix::from_i64(&[&[6, -3], &[-3, 6]]), Sign::Plus).is_ok());
        assert!(QuadForm::new(IntMatrix::from_i64(&[&[6, -3], &[-3, 6]]), Sign::Minus).is_err());
        assert!(QuadForm::new(IntMatrix::from_i64(&[&[1, 2], &[0, 1]]), Sign::Plus).is_err());
        assert_eq!(QuadForm::definite(IntMatrix::from_i64(&[&[-2]])).unwrap().sign(), Sign::Minus);
    }

    #[test]
    fn text_round_trip() {
        let q = QuadForm::new(IntMatrix::from_i64(&[&[6, -3], &[-3, 6]]), Sign::Plus).unwrap();
        let text = q.to_text();
        assert_eq!(text, "sign: +\n 6 -3\n-3  6\n");
        assert_eq!(QuadForm::from_text(&text).unwrap(), q);
        let commented = "# Goeritz matrix\nsign: +\n# row one\n6 -3\n-3 6\n";
        assert_eq!(QuadForm::from_text(commented).unwrap(), q);
    }

    #[test]
    fn parse_errors_are_located() {
        let err = QuadForm::from_text("sign: +\n1 0\n0 y\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
        assert!(QuadForm::from_text("1 0\n0 1\n").is_err());
        assert!(QuadForm::from_text("sign: *\n1\n").is_err());
    }

    #[test]
    fn half_integer_shape() {
        let a = IntMatrix::from_i64(&[&[6, 0], &[0, 2]]);
        let q = QuadForm::half_integer(&a).unwrap();
        assert_eq!(q.half_integer_block(), Some(a));
        assert_eq!(q.det(), BigInt::from(33));
        assert!(q.is_even());
    }
}
