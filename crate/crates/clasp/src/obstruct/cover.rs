use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lattice::{d_from_sharp, torus_cover_plumbing, QuadForm};
use crate::profiles::{lens_d, unknot_half_surgery_d, DProfile, Orientation};
use crate::sign::Sign;

/// A file named in a cover spec: the path as written and the path it resolves to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileRef {
    pub written: String,
    pub path: PathBuf,
}

impl FileRef {
    pub fn new(written: &str, base: &Path) -> FileRef {
        FileRef { written: written.to_string(), path: base.join(written) }
    }

    fn read(&self) -> Result<String> {
        std::fs::read_to_string(&self.path).map_err(|e| Error::io(&self.path, e))
    }
}

/// Where the d-invariants of the double branched cover come from.
///
/// Text syntax is `kind(args)`: `lens(p,q)`, `dlens(r)`, `torus(p,q)`, `goeritz(FILE)`,
/// `plumbing(FILE)`, `explicit(FILE)`, `sum(+SPEC,-SPEC,...)` and `none`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSpec {
    /// `L(p,q)` with the orientation of [`Orientation::Standard`].
    Lens { p: u64, q: i64 },
    /// Half-integer surgery `S^3_{r/2}(O)`.
    Dlens { r: u64 },
    /// `M(2,p,q)`, the boundary of the negative-definite plumbing for `T(p,q)`.
    Torus { p: u64, q: u64 },
    /// A definite Goeritz matrix in form-file format.
    Goeritz(FileRef),
    /// A definite plumbing matrix in form-file format.
    Plumbing(FileRef),
    /// A profile in the canonical profile text format.
    Explicit(FileRef),
    /// Signed connected sum.
    Sum(Vec<(Sign, CoverSpec)>),
    /// No cover data; checks that need the profile report an error.
    Unknown,
}

pub const COVER_KINDS: [&str; 8] = ["lens", "dlens", "torus", "goeritz", "plumbing", "explicit", "sum", "none"];

impl CoverSpec {
    /// Parses `kind(args)`. File paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<CoverSpec> {
        let t = text.trim();
        if t == "none" {
            return Ok(CoverSpec::Unknown);
        }
        let open = t.find('(').ok_or_else(|| Error::Invalid(format!("expected `kind(args)`, got {t:?}")))?;
        if !t.ends_with(')') {
            return Err(Error::Invalid(format!("unbalanced parentheses in {t:?}")));
        }
        CoverSpec::from_parts(&t[..open], &t[open + 1..t.len() - 1], base)
    }

    /// Builds a spec from a kind and its argument string, as in a knot table.
    pub fn from_parts(kind: &str, args: &str, base: &Path) -> Result<CoverSpec> {
        let args = args.trim();
        match kind.trim() {
            "lens" => {
                let [p, q] = ints::<2>(args)?;
                Ok(CoverSpec::Lens { p: positive(p, "p")?, q })
            }
            "dlens" => {
                let [r] = ints::<1>(args)?;
                Ok(CoverSpec::Dlens { r: positive(r, "r")? })
            }
            "torus" => {
                let [p, q] = ints::<2>(args)?;
                Ok(CoverSpec::Torus { p: positive(p, "p")?, q: positive(q, "q")? })
            }
            "goeritz" => Ok(CoverSpec::Goeritz(file_arg(args, base)?)),
            "plumbing" => Ok(CoverSpec::Plumbing(file_arg(args, base)?)),
            "explicit" => Ok(CoverSpec::Explicit(file_arg(args, base)?)),
            "sum" => {
                let mut terms = Vec::new();
                for term in split_top_level(args)? {
                    let term = term.trim();
                    let (sign, rest) = match term.chars().next() {
                        Some('+') => (Sign::Plus, &term[1..]),
                        Some('-') => (Sign::Minus, &term[1..]),
                        _ => (Sign::Plus, term),
                    };
                    terms.push((sign, CoverSpec::parse(rest, base)?));
                }
                if terms.is_empty() {
                    return Err(Error::Invalid("empty sum".into()));
                }
                Ok(CoverSpec::Sum(terms))
            }
            "none" if args.is_empty() => Ok(CoverSpec::Unknown),
            other => {
                Err(Error::Invalid(format!("unknown cover kind {other:?}; expected one of {}", COVER_KINDS.join(", "))))
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoverSpec::Lens { .. } => "lens",
            CoverSpec::Dlens { .. } => "dlens",
            CoverSpec::Torus { .. } => "torus",
            CoverSpec::Goeritz(_) => "goeritz",
            CoverSpec::Plumbing(_) => "plumbing",
            CoverSpec::Explicit(_) => "explicit",
            CoverSpec::Sum(_) => "sum",
            CoverSpec::Unknown => "none",
        }
    }

    pub fn is_known(&self) -> bool {
        match self {
            CoverSpec::Unknown => false,
            CoverSpec::Sum(terms) => terms.iter().all(|(_, c)| c.is_known()),
            _ => true,
        }
    }

    /// Computes the profile, labelled by the spec text.
    pub fn resolve(&self) -> Result<DProfile> {
        let p = match self {
            CoverSpec::Lens { p, q } => lens_d(*p, *q, Orientation::Standard)?,
            CoverSpec::Dlens { r } => unknot_half_surgery_d(*r)?.to_profile(),
            CoverSpec::Torus { p, q } => d_from_sharp(&torus_cover_plumbing(*p, *q)?)?,
            CoverSpec::Goeritz(f) | CoverSpec::Plumbing(f) => d_from_sharp(&QuadForm::load(&f.path)?)?,
            CoverSpec::Explicit(f) => DProfile::from_text(&f.read()?, &f.written).map_err(|e| match e {
                Error::Parse { line, column, message } => {
                    Error::Invalid(format!("{}:{line}:{column}: {message}", f.path.display()))
                }
                other => other,
            })?,
            CoverSpec::Sum(terms) => {
                let mut acc = DProfile::sphere();
                for (sign, c) in terms {
                    let p = c.resolve()?;
                    acc = acc.connected_sum(&if *sign == Sign::Plus { p } else { p.negate() })?;
                }
                acc
            }
            CoverSpec::Unknown => return Err(Error::Unsupported("no cover data".into())),
        };
        Ok(p.with_label(self.to_string()))
    }

    /// Bytes that determine the resolved profile: the spec text and the contents of every file.
    pub fn fingerprint(&self) -> Result<Vec<u8>> {
        let mut out = self.to_string().into_bytes();
        self.append_files(&mut out)?;
        Ok(out)
    }

    fn append_files(&self, out: &mut Vec<u8>) -> Result<()> {
        match self {
            CoverSpec::Goeritz(f) | CoverSpec::Plumbing(f) | CoverSpec::Explicit(f) => {
                let bytes = std::fs::read(&f.path).map_err(|e| Error::io(&f.path, e))?;
                out.push(0);
                out.extend_from_slice(f.written.as_bytes());
                out.push(0);
                out.extend_from_slice(&bytes);
            }
            CoverSpec::Sum(terms) => {
                for (_, c) in terms {
                    c.append_files(out)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The mirror: the same cover with reversed orientation.
    pub fn mirror(&self) -> CoverSpec {
        match self {
            CoverSpec::Unknown => CoverSpec::Unknown,
            CoverSpec::Sum(terms) => CoverSpec::Sum(terms.iter().map(|(s, c)| (-*s, c.clone())).collect()),
            other => CoverSpec::Sum(vec![(Sign::Minus, other.clone())]),
        }
    }
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverSpec::Lens { p, q } => write!(f, "lens({p},{q})"),
            CoverSpec::Dlens { r } => write!(f, "dlens({r})"),
            CoverSpec::Torus { p, q } => write!(f, "torus({p},{q})"),
            CoverSpec::Goeritz(r) | CoverSpec::Plumbing(r) | CoverSpec::Explicit(r) => {
                write!(f, "{}({})", self.kind(), r.written)
            }
            CoverSpec::Sum(terms) => {
                let parts: Vec<String> = terms.iter().map(|(s, c)| format!("{s}{c}")).collect();
                write!(f, "sum({})", parts.join(","))
            }
            CoverSpec::Unknown => f.write_str("none"),
        }
    }
}

fn ints<const N: usize>(args: &str) -> Result<[i64; N]> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::Invalid(format!("expected {N} integer argument(s), got {args:?}")));
    }
    let mut out = [0i64; N];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| Error::Invalid(format!("not an integer: {p:?}")))?;
    }
    Ok(out)
}

fn positive(x: i64, what: &str) -> Result<u64> {
    u64::try_from(x).ok().filter(|&v| v > 0).ok_or_else(|| Error::Invalid(format!("{what} must be positive, got {x}")))
}

fn file_arg(args: &str, base: &Path) -> Result<FileRef> {
    if args.is_empty() {
        return Err(Error::Invalid("missing file name".into()));
    }
    Ok(FileRef::new(args, base))
}

/// Splits on commas outside parentheses.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Invalid(format!("unbalanced parentheses in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Invalid(format!("unbalanced parentheses in {s:?}")));
    }
    if !s[start..].trim().is_empty() || !out.is_empty() {
        out.push(&s[start..]);
    }
    Ok(out)
}
