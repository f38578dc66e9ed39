use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{Elem, FinAbGroup};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Smith normal form `U * M * V = D` together with the inverses of the transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
        self.u_inv.add_col(src, dst, &-k);
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
        self.v_inv.add_row(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the nonzero entry of least absolute value in the trailing block.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = &self.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form of an arbitrary integer matrix.
///
/// Returns unimodular `U`, `V` with `U * M * V = D`, `D` diagonal, nonnegative and
/// `d_i | d_{i+1}`.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    for t in 0..r.min(c) {
        let Some((pi, pj)) = w.smallest(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if w.m[(i, t)].is_zero() {
                    continue;
                }
                let q = w.m[(i, t)].div_floor(&w.m[(t, t)]);
                w.add_row(i, t, &-q);
                if !w.m[(i, t)].is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if w.m[(t, j)].is_zero() {
                    continue;
                }
                let q = w.m[(t, j)].div_floor(&w.m[(t, t)]);
                w.add_col(j, t, &-q);
                if !w.m[(t, j)].is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the trailing block.
            let p = w.m[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.m[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.m[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    Smith { u: w.u, d: w.m, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv }
}

/// The finite cokernel `Z^n / M Z^n` of a nonsingular square matrix, with explicit
/// coordinates: a vector `x` maps to `(U x)_i mod d_i` over the nontrivial factors.
#[derive(Clone, Debug)]
pub struct Cokernel {
    group: FinAbGroup,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Index of the first diagonal entry that is not 1.
    offset: usize,
}

impl Cokernel {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("cokernel of {}x{} matrix", m.rows(), m.cols())));
        }
        let s = smith_normal_form(m);
        let diag = s.diagonal();
        if diag.iter().any(Zero::is_zero) {
            return Err(Error::Singular);
        }
        let offset = diag.iter().take_while(|d| d.is_one()).count();
        let factors = diag[offset..]
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::TooLarge(d.to_string())))
            .collect::<Result<Vec<u64>>>()?;
        Ok(Cokernel { group: FinAbGroup::new(factors)?, u: s.u, u_inv: s.u_inv, offset })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Class of an integer vector.
    pub fn element_of(&self, x: &[BigInt]) -> Elem {
        let y = self.u.mul_vec(x);
        self.group
            .factors()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let r = y[self.offset + k].mod_floor(&BigInt::from(d));
                r.to_u64().expect("residue fits")
            })
            .collect()
    }

    /// An integer vector in the class of `g`.
    pub fn lift(&self, g: &Elem) -> Vec<BigInt> {
        let n = self.u.rows();
        let mut y = vec![BigInt::zero(); n];
        for (k, &a) in g.iter().enumerate() {
            y[self.offset + k] = BigInt::from(a);
        }
        self.u_inv.mul_vec(&y)
    }
}

/// Cokernel of a matrix given as a list of integers, for diagonal presentations.
pub fn cokernel(m: &IntMatrix) -> Result<FinAbGroup> {
    Ok(Cokernel::new(m)?.group().clone())
}
