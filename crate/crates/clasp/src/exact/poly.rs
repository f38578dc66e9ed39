use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, rat_int, Rational};

/// Dense univariate polynomial over `Q`, constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Poly {
        Poly::new(vec![rat_int(0), rat_int(1)])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = rat_int(0);
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![rat_int(0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    ///
    /// # Panics
    /// Panics when `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![rat_int(0); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat_int(i as i64)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, each simple.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(rat_int(0), |acc, c| acc * x + c)
    }

    /// Chebyshev polynomial `T_n`, with `T_n(cos t) = cos(n t)`.
    pub fn chebyshev(n: usize) -> Poly {
        let (mut a, mut b) = (Poly::from_i64(&[1]), Poly::x());
        if n == 0 {
            return a;
        }
        let two_x = Poly::from_i64(&[0, 2]);
        for _ in 1..n {
            let c = two_x.mul(&b).sub(&a);
            a = b;
            b = c;
        }
        b
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm();
        let changes = |x: &Rational| -> usize {
            let signs: Vec<Ordering> =
                seq.iter().map(|p| p.eval(x).cmp(&rat_int(0))).filter(|s| *s != Ordering::Equal).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(lo).saturating_sub(changes(hi))
    }
}

/// A real root of a squarefree polynomial, held by an isolating interval `(lo, hi]`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: Poly,
    lo: Rational,
    hi: Rational,
}

impl RealRoot {
    /// `cos(2 pi a / b)` as a root of the squarefree part of `T_b(x) - 1`.
    ///
    /// # Panics
    /// Panics when `b == 0`.
    pub fn cos_two_pi(a: i64, b: u64) -> RealRoot {
        assert!(b > 0, "denominator must be positive");
        let a = a.rem_euclid(b as i64) as u64;
        let k = a.min(b - a) as usize;
        let poly = Poly::chebyshev(b as usize).sub(&Poly::from_i64(&[1])).squarefree();
        // The roots are cos(2 pi j / b) for j = 0..=b/2, in decreasing order; ours has k above it.
        let above = |x: &Rational| poly.count_roots(x, &rat_int(2));
        let (mut lo, mut hi) = (rat_int(-2), rat_int(2));
        while poly.count_roots(&lo, &hi) > 1 {
            let mid = (&lo + &hi) / rat_int(2);
            if above(&mid) > k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        RealRoot { poly, lo, hi }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Sign of `g` at the root.
    pub fn sign_of(&self, g: &Poly) -> Ordering {
        let g = g.rem(&self.poly);
        if g.is_zero() {
            return Ordering::Equal;
        }
        let common = g.gcd(&self.poly);
        if common.degree().unwrap_or(0) > 0 && common.count_roots(&self.lo, &self.hi) > 0 {
            return Ordering::Equal;
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        while g.count_roots(&lo, &hi) > 0 {
            let mid = (&lo + &hi) / rat(2, 1);
            if self.poly.count_roots(&lo, &mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let v = g.eval(&hi);
        debug_assert!(!v.is_zero());
        if v.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Rational approximation, for display.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Z[y]/(m)` for monic integer `m`, extended by `k` with `k^2 = y^2 - 4`.
///
/// With `y = 2 cos(t)` this is a ring containing `2 i sin(t)` as `k`. Only ring operations
/// are needed, so `m` need not be irreducible. Integer coefficients keep the arithmetic cheap.
#[derive(Clone, Debug)]
pub(crate) struct CosRing {
    modulus: Vec<BigInt>,
}

/// `a + b k` in a [`CosRing`], coefficients constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CosElt {
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zadd(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(out)
}

fn zmul(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(out)
}

impl CosRing {
    /// Ring for the root `y = 2 cos(2 pi a / b)` of `root`'s polynomial.
    pub fn for_root(root: &RealRoot) -> CosRing {
        // x = y / 2 turns a monic p(x) of degree d into 2^d p(y / 2), monic with integer coefficients
        // because 2 cos(2 pi a / b) is an algebraic integer.
        let p = root.poly().monic();
        let d = p.degree().unwrap_or(0);
        let modulus = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c * Rational::from_integer(BigInt::from(2).pow((d - i) as u32));
                assert!(c.is_integer(), "2 cos(2 pi a / b) is an algebraic integer");
                c.to_integer()
            })
            .collect();
        CosRing { modulus }
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.modulus.len() - 1;
        while v.len() > d {
            let top = v.pop().unwrap_or_default();
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                v[shift + i] -= &top * m;
            }
        }
        trim(v)
    }

    pub fn zero(&self) -> CosElt {
        CosElt { a: Vec::new(), b: Vec::new() }
    }

    pub fn one(&self) -> CosElt {
        self.real(&[1])
    }

    /// Real element from small integer coefficients in `y`.
    pub fn real(&self, a: &[i64]) -> CosElt {
        CosElt { a: self.reduce(trim(a.iter().map(|&c| BigInt::from(c)).collect())), b: Vec::new() }
    }

    /// `c k` for an integer `c`.
    pub fn imag(&self, c: i64) -> CosElt {
        CosElt { a: Vec::new(), b: trim(vec![BigInt::from(c)]) }
    }

    pub fn add(&self, x: &CosElt, y: &CosElt) -> CosElt {
        CosElt { a: zadd(&x.a, &y.a), b: zadd(&x.b, &y.b) }
    }

    pub fn neg(&self, x: &CosElt) -> CosElt {
        CosElt { a: x.a.iter().map(|c| -c).collect(), b: x.b.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, x: &CosElt, y: &CosElt) -> CosElt {
        if (x.a.is_empty() && x.b.is_empty()) || (y.a.is_empty() && y.b.is_empty()) {
            return self.zero();
        }
        // k^2 = y^2 - 4
        let bb = self.reduce(zmul(&x.b, &y.b));
        let k_square = zmul(&bb, &[BigInt::from(-4), BigInt::zero(), BigInt::one()]);
        let a = self.reduce(zadd(&zmul(&x.a, &y.a), &k_square));
        let b = self.reduce(zadd(&zmul(&x.a, &y.b), &zmul(&x.b, &y.a)));
        CosElt { a, b }
    }

    /// The real part of `x` as a polynomial in `x = cos`, for sign tests against a [`RealRoot`].
    pub fn real_part_in_cos(&self, x: &CosElt) -> Poly {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(x.a.len());
        for c in &x.a {
            out.push(Rational::from_integer(c * &pow));
            pow *= 2;
        }
        Poly::new(out)
    }

    /// Coefficients of `det(t I - M)`, leading coefficient first, by Berkowitz's division-free method.
    pub fn charpoly(&self, m: &[Vec<CosElt>]) -> Vec<CosElt> {
        let n = m.len();
        let mut v = vec![self.one()];
        for k in 0..n {
            // Toeplitz column: 1, -a_kk, -R C, -R M C, ..., -R M^(k-1) C.
            let mut t = vec![self.one(), self.neg(&m[k][k])];
            let mut col: Vec<CosElt> = (0..k).map(|i| m[i][k].clone()).collect();
            for _ in 0..k {
                let rc = (0..k).fold(self.zero(), |acc, i| self.add(&acc, &self.mul(&m[k][i], &col[i])));
                t.push(self.neg(&rc));
                col = (0..k)
                    .map(|i| (0..k).fold(self.zero(), |acc, l| self.add(&acc, &self.mul(&m[i][l], &col[l]))))
                    .collect();
            }
            v = (0..k + 2)
                .map(|i| (0..=i.min(k)).fold(self.zero(), |acc, j| self.add(&acc, &self.mul(&t[i - j], &v[j]))))
                .collect();
        }
        v
    }
}
