use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::cvp::Enumerator;
use super::QuadForm;
use crate::error::{Error, Result};
use crate::exact::{Cokernel, Elem, FinAbGroup, IntMatrix, Rational};
use crate::profiles::DProfile;
use crate::sign::Sign;

/// A coset of `Char(Q) / 2Q Z^n` with one representative covector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCoset {
    pub element: Elem,
    pub representative: Vec<BigInt>,
}

/// The affine group `Char(Q) / 2Q Z^n`, identified with `Z^n / Q Z^n` by `xi -> (xi - origin) / 2`.
///
/// For odd determinant the origin is the unique coset fixed by `xi -> -xi`; otherwise it is
/// the covector `diag(Q) mod 2`.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    form: QuadForm,
    positive: IntMatrix,
    inverse: Vec<Vec<Rational>>,
    cokernel: Cokernel,
    origin: Vec<BigInt>,
    centered: bool,
}

impl CosetSpace {
    pub fn new(form: &QuadForm) -> Result<Self> {
        let positive = form.positive_matrix();
        let n = positive.rows();
        let inverse = positive.inverse_rational().ok_or(Error::Singular)?;
        let cokernel = Cokernel::new(&positive)?;
        let det = positive.det()?;
        let parity: Vec<BigInt> = (0..n).map(|i| positive[(i, i)].mod_floor(&BigInt::from(2))).collect();
        let (origin, centered) = if det.is_odd() {
            // adj(P) c solves P s = c (mod 2) because P adj(P) = det I.
            let s: Vec<BigInt> = (0..n)
                .map(|i| {
                    let mut acc = Rational::zero();
                    for j in 0..n {
                        acc += &inverse[i][j] * Rational::from_integer(parity[j].clone());
                    }
                    (acc * Rational::from_integer(det.clone())).to_integer().mod_floor(&BigInt::from(2))
                })
                .collect();
            (positive.mul_vec(&s), true)
        } else {
            (parity, false)
        };
        Ok(CosetSpace { form: form.clone(), positive, inverse, cokernel, origin, centered })
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn group(&self) -> &FinAbGroup {
        self.cokernel.group()
    }

    /// Covector of the coset labelled zero.
    pub fn origin(&self) -> &[BigInt] {
        &self.origin
    }

    /// Whether the origin is the conjugation-fixed coset.
    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn is_characteristic(&self, xi: &[BigInt]) -> bool {
        xi.len() == self.positive.rows() && xi.iter().enumerate().all(|(i, x)| (x - &self.positive[(i, i)]).is_even())
    }

    /// Group label of the coset containing `xi`.
    pub fn coset_of(&self, xi: &[BigInt]) -> Result<Elem> {
        if !self.is_characteristic(xi) {
            return Err(Error::Invalid(format!("{xi:?} is not a characteristic covector")));
        }
        let w: Vec<BigInt> = xi.iter().zip(&self.origin).map(|(x, o)| (x - o) / 2).collect();
        Ok(self.cokernel.element_of(&w))
    }

    /// Some covector in the coset labelled `g`.
    pub fn representative(&self, g: &Elem) -> Vec<BigInt> {
        let w = self.cokernel.lift(g);
        self.origin.iter().zip(&w).map(|(o, x)| o + BigInt::from(2) * x).collect()
    }

    /// `xi^T Q^-1 xi` for the signed form `Q`.
    pub fn square(&self, xi: &[BigInt]) -> Rational {
        let s = self.positive_square(xi);
        match self.form.sign() {
            Sign::Plus => s,
            Sign::Minus => -s,
        }
    }

    fn positive_square(&self, xi: &[BigInt]) -> Rational {
        let n = xi.len();
        let mut s = Rational::zero();
        for i in 0..n {
            let mut row = Rational::zero();
            for j in 0..n {
                row += &self.inverse[i][j] * Rational::from_integer(xi[j].clone());
            }
            s += row * Rational::from_integer(xi[i].clone());
        }
        s
    }

    /// `(xi^T Q^-1 xi - n)/4` for positive forms and `(xi^T Q^-1 xi + n)/4` for negative ones.
    pub fn normalized_square(&self, xi: &[BigInt]) -> Rational {
        let n = Rational::from_integer(BigInt::from(self.positive.rows()));
        let four = Rational::from_integer(BigInt::from(4));
        match self.form.sign() {
            Sign::Plus => (self.square(xi) - n) / four,
            Sign::Minus => (self.square(xi) + n) / four,
        }
    }

    /// The covector of least `xi^T P^-1 xi` in the coset of `xi0`, for `P` the positive matrix.
    fn minimize(&self, enumerator: &Enumerator, xi0: &[BigInt]) -> Vec<BigInt> {
        let n = xi0.len();
        // xi = xi0 + 2 P v gives xi^T P^-1 xi = 4 q(v + t) with t = P^-1 xi0 / 2.
        let target: Vec<Rational> = (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..n {
                    acc += &self.inverse[i][j] * Rational::from_integer(xi0[j].clone());
                }
                -acc / Rational::from_integer(BigInt::from(2))
            })
            .collect();
        let (v, _) = enumerator.closest(&target);
        let pv = self.positive.mul_vec(&v);
        xi0.iter().zip(&pv).map(|(x, y)| x + BigInt::from(2) * y).collect()
    }
}

/// Every coset of characteristic covectors with a representative, in group order.
pub fn char_cosets(form: &QuadForm) -> Result<Vec<CharCoset>> {
    let space = CosetSpace::new(form)?;
    space.group().enumerable_order()?;
    Ok(space.group().elements().map(|g| CharCoset { representative: space.representative(&g), element: g }).collect())
}

/// Extremal values of `(xi^T Q^-1 xi -+ n)/4` per coset of characteristic covectors.
///
/// For a positive form `values` holds the minimum of `(xi^T Q^-1 xi - n)/4`; for a negative
/// form, the maximum of `(xi^T Q^-1 xi + n)/4`. Either way this is the d-invariant of the
/// boundary when the filling is sharp.
#[derive(Clone, Debug)]
pub struct MinTable {
    space: CosetSpace,
    values: Vec<Rational>,
    minimizers: Vec<Vec<BigInt>>,
}

impl MinTable {
    pub fn form(&self) -> &QuadForm {
        self.space.form()
    }

    pub fn group(&self) -> &FinAbGroup {
        self.space.group()
    }

    pub fn space(&self) -> &CosetSpace {
        &self.space
    }

    /// Values in lexicographic group order.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, g: &Elem) -> &Rational {
        &self.values[self.group().index_of(g)]
    }

    /// An optimal covector for each coset, in group order.
    pub fn minimizers(&self) -> &[Vec<BigInt>] {
        &self.minimizers
    }

    /// Sorted values.
    pub fn multiset(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }

    /// Re-checks every entry: the optimizer lies in its coset, reproduces the stored value,
    /// and no move `xi -> xi +- 2 Q e_i` improves it.
    pub fn certify(&self) -> Result<()> {
        let p = &self.space.positive;
        for (idx, (xi, value)) in self.minimizers.iter().zip(&self.values).enumerate() {
            let g = self.group().elem_at(idx);
            if self.space.coset_of(xi)? != g {
                return Err(Error::Invalid(format!("optimizer {xi:?} is not in coset {g:?}")));
            }
            if self.space.normalized_square(xi) != *value {
                return Err(Error::Invalid(format!("value of coset {g:?} does not match its optimizer")));
            }
            for (i, x) in xi.iter().enumerate() {
                if x.abs() > p[(i, i)] {
                    return Err(Error::Invalid(format!("optimizer {xi:?} of coset {g:?} is not locally optimal")));
                }
            }
        }
        Ok(())
    }

    /// Same format as profiles: `group:` header then `coords : value` lines.
    pub fn to_text(&self) -> String {
        crate::profiles::write_table(self.group(), &self.values)
    }
}

/// Certified coset optimization by exact enumeration, one coset per task.
pub fn min_square(form: &QuadForm) -> Result<MinTable> {
    let space = CosetSpace::new(form)?;
    let order = space.group().enumerable_order()?;
    let enumerator = Enumerator::new(&space.positive);
    let minimizers: Vec<Vec<BigInt>> = (0..order)
        .into_par_iter()
        .map(|idx| {
            let g = space.group().elem_at(idx);
            space.minimize(&enumerator, &space.representative(&g))
        })
        .collect();
    let values = minimizers.iter().map(|xi| space.normalized_square(xi)).collect();
    Ok(MinTable { space, values, minimizers })
}

/// d-invariants of the boundary of a sharp definite filling with intersection form `form`.
pub fn d_from_sharp(form: &QuadForm) -> Result<DProfile> {
    let det = form.abs_det();
    if det.is_even() {
        return Err(Error::EvenOrder(det.to_string()));
    }
    let table = min_square(form)?;
    let rank = form.rank();
    let label = format!(
        "boundary of rank {rank} {} form of determinant {}",
        form.sign(),
        det.to_u64().map_or_else(|| det.to_string(), |d| d.to_string())
    );
    DProfile::new(table.group().clone(), table.values, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn form(rows: &[&[i64]], sign: Sign) -> QuadForm {
        QuadForm::new(IntMatrix::from_i64(rows), sign).unwrap()
    }

    #[test]
    fn unit_form() {
        let q = form(&[&[1]], Sign::Plus);
        let cosets = char_cosets(&q).unwrap();
        assert_eq!(cosets.len(), 1);
        assert_eq!(cosets[0].representative[0].abs(), BigInt::from(1));
        let t = min_square(&q).unwrap();
        assert_eq!(t.values(), &[Rational::zero()]);
        t.certify().unwrap();
    }

    #[test]
    fn coset_count_is_determinant() {
        let q = form(&[&[3, 1], &[1, 2]], Sign::Plus);
        let cosets = char_cosets(&q).unwrap();
        assert_eq!(cosets.len(), 5);
        let space = CosetSpace::new(&q).unwrap();
        for c in &cosets {
            assert!(space.is_characteristic(&c.representative));
            assert_eq!(space.coset_of(&c.representative).unwrap(), c.element);
        }
    }

    #[test]
    fn origin_is_conjugation_fixed() {
        let q = form(&[&[6, -3], &[-3, 6]], Sign::Plus);
        let space = CosetSpace::new(&q).unwrap();
        assert!(space.is_centered());
        let minus: Vec<BigInt> = space.origin().iter().map(|x| -x).collect();
        assert_eq!(space.coset_of(&minus).unwrap(), space.group().zero());
    }

    #[test]
    fn poincare_sphere_from_e8() {
        let e8 = form(
            &[
                &[-2, 1, 0, 0, 0, 0, 0, 0],
                &[1, -2, 1, 0, 0, 0, 0, 0],
                &[0, 1, -2, 1, 0, 0, 0, 0],
                &[0, 0, 1, -2, 1, 0, 0, 0],
                &[0, 0, 0, 1, -2, 1, 0, 1],
                &[0, 0, 0, 0, 1, -2, 1, 0],
                &[0, 0, 0, 0, 0, 1, -2, 0],
                &[0, 0, 0, 0, 1, 0, 0, -2],
            ],
            Sign::Minus,
        );
        let p = d_from_sharp(&e8).unwrap();
        assert_eq!(p.values(), &[rat(2, 1)]);
        assert_eq!(d_from_sharp(&e8.negated()).unwrap().values(), &[rat(-2, 1)]);
    }

    #[test]
    fn even_determinant_has_cosets_but_no_profile() {
        let q = form(&[&[2, 0], &[0, 1]], Sign::Plus);
        assert_eq!(char_cosets(&q).unwrap().len(), 2);
        assert!(!CosetSpace::new(&q).unwrap().is_centered());
        min_square(&q).unwrap().certify().unwrap();
        assert!(matches!(d_from_sharp(&q), Err(Error::EvenOrder(_))));
    }
}
