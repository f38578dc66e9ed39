use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clasp::exact::{format_rational, parse_rational, IntMatrix};
use clasp::ingest::{parse_table, run_report, ProfileCache};
use clasp::lattice::{d_from_sharp, enumerate_half_integer_forms_detailed, min_square, QuadForm};
use clasp::matching::{run_engine, Engine};
use clasp::obstruct::{check_cstar_k, dispatch_signs, levine_tristram, Check, CoverSpec, KnotRecord, SeifertData};
use clasp::profiles::{lens_d, unknot_half_surgery_d, Orientation};
use clasp::{Error, Result, Sign};

/// Exact d-invariants of double branched covers and the obstructions built on them.
///
/// Exit status 0 means the command ran; verdicts are in the output.
#[derive(Parser, Debug)]
#[command(name = "clasp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a d-invariant profile.
    #[command(subcommand)]
    Dinv(Dinv),
    /// Half-integer surgery forms.
    #[command(subcommand)]
    Forms(Forms),
    /// Run one matching engine on a cover.
    Match(MatchArgs),
    /// Form-existence obstruction.
    #[command(subcommand)]
    Obstruct(Obstruct),
    /// Levine-Tristram signature and nullity.
    Lt(LtArgs),
    /// Run checks over a knot table and write per-knot reports and summary.csv.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
enum Dinv {
    /// The lens space L(P,Q).
    Lens {
        p: u64,
        q: i64,
        /// Print the profile of -L(P,Q) instead.
        #[arg(long)]
        reversed: bool,
    },
    /// S^3_{R/2}(O), indexed 0..R-1 with the spin structure at 0.
    Surgery { r: u64 },
    /// The boundary of a sharp definite form read from FILE.
    Sharp {
        file: PathBuf,
        /// Sign of the form; required when the file has no `sign:` header.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<Sign>,
        /// Also print the minimal characteristic squares per coset.
        #[arg(long)]
        min_table: bool,
    },
    /// Any cover spec, such as `sum(+torus(3,10),-torus(5,6))`.
    Spec { spec: String },
}

#[derive(Subcommand, Debug)]
enum Forms {
    /// All forms [[A, I], [I, 2I]] up to congruence with det(2A - I) = D and N odd entries on diag(A).
    Enum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        det: u64,
        #[arg(long)]
        odd: usize,
        /// Print each form's minimal characteristic squares.
        #[arg(long)]
        min_table: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatchKind {
    U1,
    Uc1,
    Cstar1,
}

#[derive(Args, Debug)]
struct MatchArgs {
    kind: MatchKind,
    spec: String,
    /// Knot signature; picks the orientations as the checks do. Without it both are searched.
    #[arg(long, allow_hyphen_values = true)]
    signature: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum Obstruct {
    /// Whether the knot can have c* <= K.
    Cstar {
        #[arg(long)]
        k: usize,
        spec: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        signature: i64,
        /// Knot determinant; defaults to the order of the cover's group.
        #[arg(long)]
        det: Option<u64>,
        /// Split `R+,R-` of double points; repeatable. Defaults to the one the signature forces.
        #[arg(long = "split", value_parser = parse_split)]
        splits: Vec<(i64, i64)>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("knot").required(true).args(["torus", "matrix"]))]
struct LtArgs {
    /// The positive torus knot T(P,Q).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    torus: Option<Vec<u64>>,
    /// A Seifert matrix, whitespace-separated integer rows.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// z = exp(2 pi i A/B).
    #[arg(long)]
    angle: String,
}

#[derive(Args, Debug)]
struct ReportArgs {
    table: PathBuf,
    #[arg(long, default_value = "u1,uc1,cstar1")]
    checks: String,
    #[arg(long, default_value = "report")]
    out: PathBuf,
    /// Profile cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn parse_split(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected R+,R-, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("{t:?} is not an integer"));
    Ok((n(a)?, n(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Dinv(d) => dinv(d),
        Command::Forms(Forms::Enum { k, det, odd, min_table }) => forms(k, det, odd, min_table),
        Command::Match(m) => matching(&m),
        Command::Obstruct(Obstruct::Cstar { k, spec, signature, det, splits }) => {
            let cover = parse_spec(&spec)?;
            let det = match det {
                Some(d) => d,
                None => CoverSpec::resolve(&cover)?.order() as u64,
            };
            let rec = KnotRecord::new(spec.clone(), det, signature, cover)?;
            let splits = (!splits.is_empty()).then_some(splits.as_slice());
            Ok(check_cstar_k(&rec, k, splits)?.to_text())
        }
        Command::Lt(args) => lt(&args),
        Command::Report(args) => report(&args),
    }
}

fn parse_spec(spec: &str) -> Result<CoverSpec> {
    CoverSpec::parse(spec, Path::new("."))
}

fn dinv(d: Dinv) -> Result<String> {
    match d {
        Dinv::Lens { p, q, reversed } => {
            let o = if reversed { Orientation::Reversed } else { Orientation::Standard };
            Ok(lens_d(p, q, o)?.to_text())
        }
        Dinv::Surgery { r } => {
            let s = unknot_half_surgery_d(r)?;
            let mut out = String::new();
            for (i, v) in s.values().iter().enumerate() {
                let _ = writeln!(out, "{i} : {}", format_rational(v));
            }
            Ok(out)
        }
        Dinv::Sharp { file, sign, min_table } => {
            let form = load_form(&file, sign)?;
            let mut out = d_from_sharp(&form)?.to_text();
            if min_table {
                out.push('\n');
                out.push_str(&min_square(&form)?.to_text());
            }
            Ok(out)
        }
        Dinv::Spec { spec } => Ok(parse_spec(&spec)?.resolve()?.to_text()),
    }
}

/// Reads a form with or without a `sign:` header; `sign` overrides the header.
fn load_form(file: &Path, sign: Option<Sign>) -> Result<QuadForm> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Io { path: file.to_path_buf(), source: e })?;
    if !text.lines().any(|l| l.trim_start().starts_with("sign:")) {
        let s = sign.ok_or_else(|| Error::Invalid(format!("{}: no `sign:` header, pass --sign", file.display())))?;
        return QuadForm::new(IntMatrix::parse(&text, 1)?, s);
    }
    let form = QuadForm::load(file)?;
    match sign {
        Some(s) if s != form.sign() => QuadForm::new(form.matrix().clone(), s),
        _ => Ok(form),
    }
}

fn forms(k: usize, det: u64, odd: usize, with_min_table: bool) -> Result<String> {
    let e = enumerate_half_integer_forms_detailed(k, det, odd)?;
    let mut out = format!("{} form(s) with k={k}, det={det}, odd={odd}\n", e.forms.len());
    for (i, (form, a)) in e.forms.iter().zip(&e.blocks).enumerate() {
        let _ = write!(out, "\nform {}\nA:\n{a}\n{}", i + 1, form.to_text());
        if with_min_table {
            out.push_str(&min_square(form)?.to_text());
        }
    }
    for (i, j) in &e.undecided {
        let _ = writeln!(out, "note: congruence of forms {} and {} undecided", i + 1, j + 1);
    }
    Ok(out)
}

fn matching(m: &MatchArgs) -> Result<String> {
    let profile = parse_spec(&m.spec)?.resolve()?;
    let engine = match m.kind {
        MatchKind::U1 => Engine::SymmetricMonotone,
        MatchKind::Uc1 => Engine::MonotoneSubgroup,
        MatchKind::Cstar1 => Engine::Subgroup,
    };
    let signs = match m.signature {
        Some(s) if s.abs() > 2 => {
            return Ok(format!("signature {s}: obstructed without a search, |signature| exceeds 2\n"));
        }
        Some(s) => dispatch_signs(s),
        None => vec![Sign::Plus, Sign::Minus],
    };
    Ok(run_engine(engine, &profile, &signs)?.to_text())
}

fn lt(args: &LtArgs) -> Result<String> {
    let angle = parse_rational(&args.angle)?;
    let data = match (&args.torus, &args.matrix) {
        (Some(pq), _) => SeifertData::torus(pq[0], pq[1])?,
        (None, Some(file)) => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Io { path: file.clone(), source: e })?;
            SeifertData::matrix(IntMatrix::parse(&text, 1)?)?
        }
        (None, None) => unreachable!("clap requires one of --torus, --matrix"),
    };
    let v = levine_tristram(&data, &angle)?;
    Ok(format!("signature: {}\nnullity: {}\n", v.signature, v.nullity))
}

fn report(args: &ReportArgs) -> Result<String> {
    let table = parse_table(&args.table)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let checks = Check::parse_list(&args.checks)?;
    let cache = args.cache.as_ref().map(ProfileCache::open).transpose()?;
    let summary = run_report(&table.records, &checks, &args.out, cache.as_ref())?;
    Ok(summary.csv)
}
