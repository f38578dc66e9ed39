use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;

use super::QuadForm;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::sign::Sign;

/// Hirzebruch-Jung expansion `p/q = a_1 - 1/(a_2 - ...)` with every `a_i >= 2`.
pub fn continued_fraction(p: u64, q: u64) -> Result<Vec<i64>> {
    if q == 0 || q >= p || p.gcd(&q) != 1 {
        return Err(Error::Invalid(format!("expected coprime 0 < q < p, got p = {p}, q = {q}")));
    }
    let (mut p, mut q) = (p as i64, q as i64);
    let mut out = Vec::new();
    while q != 0 {
        let a = Integer::div_ceil(&p, &q);
        out.push(a);
        (p, q) = (q, a * q - p);
    }
    Ok(out)
}

/// Chain with the given diagonal and 1 between neighbours.
pub fn linear_plumbing(weights: &[i64]) -> Result<QuadForm> {
    star_plumbing_matrix(weights.first().copied().unwrap_or(0), &[weights.get(1..).unwrap_or(&[]).to_vec()])
        .and_then(QuadForm::definite)
}

/// A linear plumbing bounded by `L(p,q)`: the negative-definite chain of `-a_i` for
/// `p/q = [a_1, ..., a_k]`, or the positive-definite chain of `b_i` for `p/(p-q) = [b_1, ..., b_l]`,
/// whichever is shorter.
pub fn lens_plumbing(p: u64, q: i64) -> Result<QuadForm> {
    let negative = lens_chain(p, q, Sign::Minus)?;
    let positive = lens_chain(p, q, Sign::Plus)?;
    Ok(if positive.rank() < negative.rank() { positive } else { negative })
}

/// The chain bounded by `L(p,q)` of the given definiteness.
pub fn lens_chain(p: u64, q: i64, sign: Sign) -> Result<QuadForm> {
    if p < 2 {
        return Err(Error::Invalid(format!("L({p},{q}) has no nonempty plumbing")));
    }
    let q = q.rem_euclid(p as i64) as u64;
    let weights: Vec<i64> = match sign {
        Sign::Minus => continued_fraction(p, q)?.into_iter().map(|a| -a).collect(),
        Sign::Plus => continued_fraction(p, p - q)?,
    };
    linear_plumbing(&weights)
}

/// Star-shaped tree: a central vertex with weight `center`, and each arm a chain hanging off it.
pub fn star_plumbing(center: i64, arms: &[Vec<i64>]) -> Result<QuadForm> {
    QuadForm::definite(star_plumbing_matrix(center, arms)?)
}

fn star_plumbing_matrix(center: i64, arms: &[Vec<i64>]) -> Result<IntMatrix> {
    let n = 1 + arms.iter().map(Vec::len).sum::<usize>();
    let mut m = IntMatrix::zeros(n, n);
    m[(0, 0)] = BigInt::from(center);
    let mut idx = 1;
    for arm in arms {
        let mut prev = 0;
        for &w in arm {
            m[(idx, idx)] = BigInt::from(w);
            m[(idx, prev)] = BigInt::from(1);
            m[(prev, idx)] = BigInt::from(1);
            prev = idx;
            idx += 1;
        }
    }
    Ok(m)
}

/// Unnormalized Seifert invariants over `S^2`: central weight `-center` and fibers `(alpha, beta)`
/// with `0 < beta < alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertInvariants {
    pub center: i64,
    pub fibers: Vec<(u64, u64)>,
}

impl SeifertInvariants {
    /// `e = -center + sum beta_i / alpha_i`.
    pub fn euler_number(&self) -> Ratio<i64> {
        self.fibers.iter().fold(Ratio::from_integer(-self.center), |acc, &(a, b)| acc + Ratio::new(b as i64, a as i64))
    }
}

/// Star plumbing with center `-center` and arms `-[a_1, ..., a_k]` for `alpha/beta`.
/// Negative definite exactly when the Euler number is negative.
pub fn seifert_plumbing(s: &SeifertInvariants) -> Result<QuadForm> {
    let arms = s
        .fibers
        .iter()
        .map(|&(a, b)| Ok(continued_fraction(a, b)?.into_iter().map(|x| -x).collect()))
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let form = star_plumbing(-s.center, &arms)?;
    if form.sign() != Sign::Minus {
        return Err(Error::Invalid(format!("Seifert invariants {s:?} do not give a negative-definite plumbing")));
    }
    Ok(form)
}

/// Seifert invariants of the Brieskorn manifold `M(a_1, a_2, a_3)` oriented as a singularity link.
///
/// Orbit data follows Neumann-Raymond: with `a = lcm`, the factor `i` contributes
/// `a_1 a_2 a_3 / (a_i lcm(a_j, a_k))` fibers of multiplicity `a / lcm(a_j, a_k)`, and
/// `e = -a_1 a_2 a_3 / a^2`. Fibers in one orbit share `beta`, which together with `e` pins the
/// invariants; the search insists on a unique solution.
fn brieskorn_seifert(a: [u64; 3]) -> Result<SeifertInvariants> {
    let prod = a[0] * a[1] * a[2];
    let l = a[0].lcm(&a[1]).lcm(&a[2]);
    let mut orbits = Vec::new();
    let mut fiber_count = 0;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let ljk = a[j].lcm(&a[k]);
        let count = prod / (a[i] * ljk);
        let alpha = l / ljk;
        fiber_count += count;
        if alpha > 1 {
            orbits.push((alpha, count));
        }
    }
    if 2 + prod / l != fiber_count {
        return Err(Error::Unsupported(format!("M({},{},{}) does not fiber over the sphere", a[0], a[1], a[2])));
    }
    let e = Ratio::new(-(prod as i64), (l * l) as i64);
    let mut solutions = Vec::new();
    let mut betas = vec![0u64; orbits.len()];
    search_betas(&orbits, 0, &mut betas, &e, &mut solutions);
    match solutions.len() {
        1 => Ok(solutions.pop().expect("one solution")),
        0 => Err(Error::Unsupported(format!("no Seifert invariants for M({},{},{})", a[0], a[1], a[2]))),
        _ => Err(Error::Unsupported(format!("ambiguous Seifert invariants for M({},{},{})", a[0], a[1], a[2]))),
    }
}

fn search_betas(
    orbits: &[(u64, u64)],
    i: usize,
    betas: &mut Vec<u64>,
    e: &Ratio<i64>,
    out: &mut Vec<SeifertInvariants>,
) {
    if i == orbits.len() {
        let sum = orbits
            .iter()
            .zip(betas.iter())
            .fold(Ratio::from_integer(0), |acc, (&(a, c), &b)| acc + Ratio::new((c * b) as i64, a as i64));
        let center = sum - e;
        if center.is_integer() && *center.numer() >= 1 {
            let fibers = orbits
                .iter()
                .zip(betas.iter())
                .flat_map(|(&(a, c), &b)| std::iter::repeat_n((a, b), c as usize))
                .collect();
            out.push(SeifertInvariants { center: center.to_integer(), fibers });
        }
        return;
    }
    let alpha = orbits[i].0;
    for b in 1..alpha {
        if b.gcd(&alpha) == 1 {
            betas[i] = b;
            search_betas(orbits, i + 1, betas, e, out);
        }
    }
}

/// Negative-definite plumbing bounded by the Brieskorn sphere `Sigma(2,p,q)`, `p, q` odd and coprime.
pub fn brieskorn_plumbing(p: u64, q: u64) -> Result<QuadForm> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: p.gcd(&q) as i64 });
    }
    if p.is_multiple_of(2) || q.is_multiple_of(2) {
        return Err(Error::Invalid(format!("Sigma(2,{p},{q}) needs p and q odd")));
    }
    seifert_plumbing(&brieskorn_seifert([2, p, q])?)
}

/// Negative-definite plumbing bounded by `M(2,p,q)`, the double branched cover of `T(p,q)`.
/// One of `p, q` may be even.
pub fn torus_cover_plumbing(p: u64, q: u64) -> Result<QuadForm> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: p.gcd(&q) as i64 });
    }
    seifert_plumbing(&brieskorn_seifert([2, p, q])?)
}
