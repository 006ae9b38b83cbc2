//! Command-line front end. [`run`] never panics on bad input; it maps every
//! failure to an exit code: 0 success, 1 a negative answer (not orthogonal,
//! not MOLS, singular system), 2 usage or contract errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ca::LocalRule;
use crate::designs::{
    are_orthogonal, count_coprime_pairs, mols_check, oa_from_mols, search_orthogonal_pairs, square_from_ca,
    LatinSquare, RuleClass,
};
use crate::error::Error;
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::Polynomial;
use crate::sss::{PolySource, SchemeDescriptor, SecretInput, ShareFile};

#[derive(Debug, Parser)]
#[command(
    name = "ca-mols",
    version,
    about = "Latin squares, orthogonal arrays and secret sharing from cellular automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Irreducible,
    CoprimeSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    BipermutiveAll,
    BipermutiveLinear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the Latin square of a bipermutive rule.
    Square {
        /// `wolfram:<n>:r<radius>`, `linear:<q>:<c0,c1,...>` or a rule JSON file.
        #[arg(long)]
        rule: String,
        /// Block length; a multiple of 2r.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Report pairwise orthogonality of square files.
    Check {
        #[arg(long, num_args = 2.., required = true)]
        squares: Vec<PathBuf>,
    },
    /// Build an orthogonal array from mutually orthogonal squares.
    Oa {
        #[arg(long, num_args = 1.., required = true)]
        squares: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Create a scheme descriptor.
    Setup {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        /// Number of players; ignored when polynomials are given.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Explicit rule polynomial as coefficients, constant term first; repeat per player.
        #[arg(long = "poly")]
        polys: Vec<String>,
        #[arg(long, value_enum, default_value = "coprime-set")]
        source: Source,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a secret into one share file per player.
    Share {
        #[arg(long)]
        descriptor: PathBuf,
        /// Comma-separated element indices, m of them.
        #[arg(long)]
        secret: String,
        /// Explicit randomness block; drawn from the seed when omitted.
        #[arg(long)]
        randomness: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Recover the secret from two share files.
    Recover {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long = "share", required = true)]
        shares: Vec<PathBuf>,
    },
    /// Exhaustively check that single shares are uniform.
    Audit {
        #[arg(long)]
        descriptor: PathBuf,
    },
    /// Count rule pairs with orthogonal squares.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count coprime ordered pairs of monic degree-n polynomials with constant terms a and b.
    Count {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Singular | Error::SamePlayer(_) | Error::NotMols => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Square { rule, m, out: path, format } => {
            let rule = parse_rule(&rule)?;
            let square = square_from_ca(&rule, m)?;
            let text = match format {
                Format::Json => to_json(&square),
                Format::Text => square.to_text(),
            };
            emit(out, path.as_deref(), &text)?;
            Ok(0)
        }
        Command::Check { squares } => {
            let squares = squares.iter().map(|p| read_square(p)).collect::<CliResult<Vec<_>>>()?;
            if let Some(s) = squares.iter().find(|s| s.order() != squares[0].order()) {
                return Err(Error::OrderMismatch(squares[0].order(), s.order()).into());
            }
            let mut all = true;
            for i in 0..squares.len() {
                for j in i + 1..squares.len() {
                    let ok = are_orthogonal(&squares[i], &squares[j])?;
                    all &= ok;
                    let verdict = if ok { "orthogonal" } else { "not orthogonal" };
                    say(out, format_args!("squares {} and {}: {verdict}", i + 1, j + 1))?;
                }
            }
            say(out, format_args!("MOLS: {}", if all { "yes" } else { "no" }))?;
            Ok(if all { 0 } else { 1 })
        }
        Command::Oa { squares, out: path } => {
            let squares = squares.iter().map(|p| read_square(p)).collect::<CliResult<Vec<_>>>()?;
            if squares.len() >= 2 && !mols_check(&squares)? {
                return Err(Error::NotMols.into());
            }
            let oa = oa_from_mols(&squares)?;
            emit(out, path.as_deref(), &to_json(&oa))?;
            Ok(0)
        }
        Command::Setup { q, r, t, n, polys, source, seed, out: path } => {
            let field = FieldSpec::of_order(q)?;
            let d = if polys.is_empty() {
                let source = match source {
                    Source::Irreducible => PolySource::Irreducible,
                    Source::CoprimeSet => PolySource::CoprimeSet,
                };
                SchemeDescriptor::setup(&field, r, t, n, source, seed)?
            } else {
                let polys = polys
                    .iter()
                    .map(|s| Ok(Polynomial::from_indices(&field, &parse_indices(s)?)?))
                    .collect::<CliResult<Vec<_>>>()?;
                SchemeDescriptor::new(&field, r, t, polys, None)?
            };
            emit(out, path.as_deref(), &to_json(&d))?;
            Ok(0)
        }
        Command::Share { descriptor, secret, randomness, seed, outdir } => {
            let d = read_descriptor(&descriptor)?;
            let secret = parse_block(d.field(), &secret)?;
            let input = match randomness {
                Some(r) => SecretInput { secret, randomness: parse_block(d.field(), &r)? },
                None => d.random_input(secret, &mut ChaCha8Rng::seed_from_u64(seed))?,
            };
            let shares = d.share(&input)?;
            fs::create_dir_all(&outdir).map_err(|e| Failure::usage(format!("{}: {e}", outdir.display())))?;
            for s in &shares {
                let path = outdir.join(format!("share_{}.json", s.player));
                write_file(&path, &to_json(&ShareFile::new(&d, s)))?;
                say(out, format_args!("{}", path.display()))?;
            }
            Ok(0)
        }
        Command::Recover { descriptor, shares } => {
            if shares.len() != 2 {
                return Err(Failure::usage(format!("exactly two --share files are needed, got {}", shares.len())));
            }
            let d = read_descriptor(&descriptor)?;
            let files = shares
                .iter()
                .map(|p| parse_json::<ShareFile>(p)?.to_share(&d).map_err(Failure::from))
                .collect::<CliResult<Vec<_>>>()?;
            let secret = d.recover(&files[0], &files[1])?;
            say(out, format_args!("{}", join(&secret)))?;
            Ok(0)
        }
        Command::Audit { descriptor } => {
            let report = read_descriptor(&descriptor)?.security_audit()?;
            say(out, format_args!("{}", to_json(&report).trim_end()))?;
            Ok(if report.uniform { 0 } else { 1 })
        }
        Command::Search { q, r, m, class, out: path } => {
            let field = FieldSpec::of_order(q)?;
            let class = match class {
                ClassArg::BipermutiveAll => RuleClass::BipermutiveAll,
                ClassArg::BipermutiveLinear => RuleClass::BipermutiveLinear,
            };
            let census = search_orthogonal_pairs(&field, r, m, class)?;
            let c = &census.conventions;
            let mut summary = format!(
                "rules: {}\northogonal pairs (unordered, distinct): {}\nordered pairs: {}",
                census.rule_count, c.unordered_distinct, c.ordered_distinct
            );
            if let Some(k) = c.joint_complement_classes {
                summary += &format!("\npairs up to joint complement: {k}");
            }
            if let Some(route) = &census.polynomial_route {
                summary += &format!("\ncoprime polynomial pairs agree: {}", route.agrees);
            }
            match path {
                Some(p) => {
                    write_file(&p, &to_json(&census))?;
                    say(out, format_args!("{summary}"))?;
                }
                None => emit(out, None, &to_json(&census))?,
            }
            Ok(0)
        }
        Command::Count { q, n, a, b } => {
            let field = FieldSpec::of_order(q)?;
            let count = count_coprime_pairs(&field, n, field.element(a)?, field.element(b)?)?;
            say(out, format_args!("{count}"))?;
            Ok(0)
        }
    }
}

/// Parses `wolfram:<n>:r<radius>`, `linear:<q>:<c0,c1,...>`, or reads a rule JSON file.
pub fn parse_rule(spec: &str) -> CliResult<LocalRule> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    match parts.as_slice() {
        ["wolfram", number, radius] => {
            let number: u128 = number.parse().map_err(|e| Failure::usage(format!("rule number {number:?}: {e}")))?;
            let radius = radius
                .strip_prefix('r')
                .and_then(|r| r.parse::<usize>().ok())
                .ok_or_else(|| Failure::usage(format!("radius {radius:?} should look like r1")))?;
            Ok(LocalRule::from_wolfram(number, radius)?)
        }
        ["linear", q, coeffs] => {
            let q: u32 = q.parse().map_err(|e| Failure::usage(format!("field order {q:?}: {e}")))?;
            let field = FieldSpec::of_order(q)?;
            Ok(LocalRule::from_coeffs(&field, &parse_block(&field, coeffs)?)?)
        }
        _ => parse_json(Path::new(spec)),
    }
}

fn parse_indices(s: &str) -> CliResult<Vec<u32>> {
    s.split(',').map(|t| t.trim().parse::<u32>().map_err(|e| Failure::usage(format!("{t:?}: {e}")))).collect()
}

fn parse_block(field: &FieldSpec, s: &str) -> CliResult<Vec<FieldElement>> {
    parse_indices(s)?.into_iter().map(|i| field.element(i).map_err(Failure::from)).collect()
}

fn join(v: &[FieldElement]) -> String {
    v.iter().map(|e| e.index().to_string()).collect::<Vec<_>>().join(",")
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_descriptor(path: &Path) -> CliResult<SchemeDescriptor> {
    parse_json(path)
}

/// JSON when the file starts with `{`, grid text otherwise.
fn read_square(path: &Path) -> CliResult<LatinSquare> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        parse_json(path)
    } else {
        LatinSquare::from_text(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

fn say(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> CliResult<()> {
    writeln!(out, "{args}").map_err(|e| Failure::usage(format!("stdout: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("ca-mols").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rule_shorthand() {
        let r = parse_rule("wolfram:150:r1").unwrap();
        assert_eq!(r.wolfram_number(), Some(150));
        let l = parse_rule("linear:3:1,2,1").unwrap();
        assert!(l.is_linear());
        assert_eq!(l.field().q(), 3);
        for bad in ["wolfram:x:r1", "wolfram:150:1", "linear:6:1,1,1", "linear:2:1,a,1", "nope.json"] {
            assert_eq!(parse_rule(bad).unwrap_err().code, 2, "{bad}");
        }
    }

    #[test]
    fn square_to_stdout() {
        let (code, out, _) = run_str(&["square", "--rule", "wolfram:150:r1", "--m", "2", "--format", "text"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1 4 3 2\n2 3 4 1\n4 1 2 3\n3 2 1 4\n");
        let (code, _, err) = run_str(&["square", "--rule", "wolfram:0:r1", "--m", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("not bipermutive"));
    }

    #[test]
    fn count_and_usage() {
        assert_eq!(run_str(&["count", "--q", "2", "--n", "2", "--a", "1", "--b", "1"]), (0, "2\n".into(), "".into()));
        assert_eq!(run_str(&["count", "--q", "2", "--n", "2", "--a", "0", "--b", "1"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&[]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(run_str(&["search", "--q", "3", "--r", "1", "--m", "2", "--class", "bipermutive-all"]).0, 2);
    }
}
