//! Exact Fincke-Pohst enumeration for a positive-definite integer Gram matrix.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{IntMatrix, Rational};

/// `q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2` for the Gram matrix `P`.
#[derive(Clone, Debug)]
pub(crate) struct Enumerator {
    n: usize,
    mu: Vec<Vec<Rational>>,
    d: Vec<Rational>,
}

/// Nearest integer to `x`, ties toward negative infinity.
fn round(x: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let y = x + half;
    let f = y.floor().to_integer();
    if Rational::from_integer(f.clone()) == y {
        f - 1
    } else {
        f
    }
}

impl Enumerator {
    /// Square-root free Cholesky decomposition of a positive-definite `p`.
    pub(crate) fn new(p: &IntMatrix) -> Self {
        let n = p.rows();
        let a = |i: usize, j: usize| Rational::from_integer(p[(i, j)].clone());
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut d = vec![Rational::zero(); n];
        for i in 0..n {
            let mut di = a(i, i);
            for k in 0..i {
                di -= &mu[k][i] * &mu[k][i] * &d[k];
            }
            assert!(di.is_positive(), "Gram matrix is not positive definite");
            for j in i + 1..n {
                let mut s = a(i, j);
                for k in 0..i {
                    s -= &mu[k][i] * &mu[k][j] * &d[k];
                }
                mu[i][j] = s / &di;
            }
            d[i] = di;
        }
        Enumerator { n, mu, d }
    }

    /// Calls `visit(w, q(w - t))` for every integer `w` with `q(w - t) <= bound` (or `<` when
    /// `strict`), where the bound may be lowered by `visit` returning `Some(new_bound)`.
    /// Candidates at each level are tried in order of distance from the projected center.
    pub(crate) fn enumerate(
        &self,
        t: &[Rational],
        bound: Rational,
        strict: bool,
        visit: &mut dyn FnMut(&[BigInt], &Rational) -> Option<Rational>,
    ) {
        let mut w = vec![BigInt::zero(); self.n];
        let mut bound = bound;
        if self.n == 0 {
            visit(&w, &Rational::zero());
            return;
        }
        self.level(self.n - 1, t, &Rational::zero(), strict, &mut w, &mut bound, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn level(
        &self,
        i: usize,
        t: &[Rational],
        partial: &Rational,
        strict: bool,
        w: &mut Vec<BigInt>,
        bound: &mut Rational,
        visit: &mut dyn FnMut(&[BigInt], &Rational) -> Option<Rational>,
    ) {
        let mut c = t[i].clone();
        for j in i + 1..self.n {
            let y = Rational::from_integer(w[j].clone()) - &t[j];
            c -= &self.mu[i][j] * y;
        }
        let k0 = round(&c);
        let contribution = |k: &BigInt| {
            let y = Rational::from_integer(k.clone()) - &c;
            &self.d[i] * &y * &y
        };
        // Zig-zag outward from k0; each side stops once its contribution exceeds the bound.
        let mut up = k0.clone();
        let mut down: BigInt = &k0 - 1;
        let mut up_alive = true;
        let mut down_alive = true;
        while up_alive || down_alive {
            let take_up = match (up_alive, down_alive) {
                (true, false) => true,
                (false, true) => false,
                _ => {
                    let du = (Rational::from_integer(up.clone()) - &c).abs();
                    let dd = (Rational::from_integer(down.clone()) - &c).abs();
                    du <= dd
                }
            };
            let k = if take_up { up.clone() } else { down.clone() };
            let total = partial + contribution(&k);
            if total > *bound || (strict && total == *bound) {
                if take_up {
                    up_alive = false;
                } else {
                    down_alive = false;
                }
                continue;
            }
            w[i] = k;
            if i == 0 {
                if let Some(b) = visit(w, &total) {
                    *bound = b;
                }
            } else {
                self.level(i - 1, t, &total, strict, w, bound, visit);
            }
            if take_up {
                up += 1;
            } else {
                down -= 1;
            }
        }
    }

    /// Babai nearest-plane point and its value, an upper bound for the closest vector.
    fn babai(&self, t: &[Rational]) -> (Vec<BigInt>, Rational) {
        let mut w = vec![BigInt::zero(); self.n];
        let mut total = Rational::zero();
        for i in (0..self.n).rev() {
            let mut c = t[i].clone();
            for j in i + 1..self.n {
                c -= &self.mu[i][j] * (Rational::from_integer(w[j].clone()) - &t[j]);
            }
            w[i] = round(&c);
            let y = Rational::from_integer(w[i].clone()) - &c;
            total += &self.d[i] * &y * &y;
        }
        (w, total)
    }

    /// An integer vector minimizing `q(w - t)`, with the minimum. Ties go to the first
    /// minimizer met in enumeration order, so the result is deterministic.
    pub(crate) fn closest(&self, t: &[Rational]) -> (Vec<BigInt>, Rational) {
        let (mut best_w, mut best) = self.babai(t);
        let start = best.clone();
        self.enumerate(t, start, true, &mut |w, v| {
            if *v < best {
                best = v.clone();
                best_w = w.to_vec();
                Some(best.clone())
            } else {
                None
            }
        });
        (best_w, best)
    }

    /// All nonzero `w` with `q(w) <= bound`, with their norms.
    pub(crate) fn short_vectors(&self, bound: &Rational) -> Vec<(Vec<BigInt>, Rational)> {
        let t = vec![Rational::zero(); self.n];
        let mut out = Vec::new();
        self.enumerate(&t, bound.clone(), false, &mut |w, v| {
            if !v.is_zero() {
                out.push((w.to_vec(), v.clone()));
            }
            None
        });
        out
    }
}
