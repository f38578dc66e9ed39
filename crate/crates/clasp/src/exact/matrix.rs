use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    /// Convenience constructor for literals in tests and fixtures.
    ///
    /// # Panics
    /// Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&v).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        Ok(bareiss_det(self.clone()))
    }

    /// Leading principal minors `det M[..k, ..k]` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Result<Vec<BigInt>> {
        if !self.is_square() {
            return Err(Error::Dimension("leading minors of a non-square matrix".into()));
        }
        Ok(leading_minors(self.clone()))
    }

    /// `true` iff the matrix is symmetric and every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().is_ok_and(|m| m.iter().all(|d| d.is_positive()))
    }

    /// Exact rational inverse; `None` when singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<Rational>>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = self.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..2 * n {
                        let t = &a[c][j] * &f;
                        a[r][j] -= t;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn block_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = &self[(src, j)] * k;
            self[(dst, j)] += t;
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = &self[(i, src)] * k;
            self[(i, dst)] += t;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| i64::try_from(x).ok()).collect()).collect()
    }

    /// Parses whitespace-separated integer rows, skipping blank lines.
    /// `first_line` is the 1-based line number of `text`'s first line, for error messages.
    pub fn parse(text: &str, first_line: usize) -> Result<Self> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line_no = first_line + k;
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            let mut col = 1;
            for tok in line.split_whitespace() {
                col = line.find(tok).map_or(col, |c| c + 1);
                let v: BigInt =
                    tok.parse().map_err(|_| Error::parse(line_no, col, format!("not an integer: {tok:?}")))?;
                row.push(v);
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("row has {} entries, expected {}", row.len(), first.len()),
                    ));
                }
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// Determinant by Bareiss elimination with row pivoting.
fn bareiss_det(mut a: IntMatrix) -> BigInt {
    let n = a.rows;
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Leading principal minors. Without pivoting the k-th Bareiss pivot is exactly the k-th
/// leading minor; after a vanishing pivot the remaining minors are computed directly.
fn leading_minors(mut a: IntMatrix) -> Vec<BigInt> {
    let n = a.rows;
    let orig = a.clone();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            minors.push(BigInt::zero());
            for m in k + 2..=n {
                let mut sub = IntMatrix::zeros(m, m);
                for i in 0..m {
                    for j in 0..m {
                        sub[(i, j)] = orig[(i, j)].clone();
                    }
                }
                minors.push(bareiss_det(sub));
            }
            return minors;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        minors.push(a[(k, k)].clone());
        prev = a[(k, k)].clone();
    }
    minors
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Whitespace-separated rows, right-aligned columns.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
