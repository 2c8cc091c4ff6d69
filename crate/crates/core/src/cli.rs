//! Command-line front end.
//!
//! Exit codes: 0 verified success, 1 mathematical verification failure,
//! 2 input or usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::catalan::{
    catalan_binomial, catalan_convolution, catalan_ratio, catalan_ratio_mod_p, GenerationPath,
};
use crate::field::{Prime, Residue};
use crate::report::{
    decimal_strings, parse_decimal, parse_integer_array, render_solve_text, SeriesJson,
    SolveReportJson,
};
use crate::seq::{self, permutad, Length, Polyseries};
use crate::solver::{solve, Form, QuadraticProblem, SolveOptions, DEFAULT_BRUTE_CAP};
use crate::trunc::TruncSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polyseries",
    version,
    about = "Polyseries, Catalan numbers, and Catalan-series roots of t + a*x + x^2 = 0 (mod t^n) over F_p"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print series coefficients as signed balanced residues.
    #[arg(long, global = true)]
    balanced: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print C_0 .. C_count.
    Catalan(CatalanArgs),
    /// Solve t + a*x + x^2 = 0 (mod t^n) over F_p.
    Solve(SolveArgs),
    /// Substitute a series into t + a*x + x^2 and check the residual.
    Verify(VerifyArgs),
    /// Print the first primes.
    Primes(PrimesArgs),
    /// Run a polyseries procedure on a list given as a JSON array.
    Seq(SeqArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Binomial,
    Convolution,
    Ratio,
}

#[derive(Debug, Args)]
struct CatalanArgs {
    #[arg(long)]
    count: usize,
    /// Reduce modulo this prime.
    #[arg(long = "mod", value_name = "P")]
    modulus: Option<String>,
    /// Defaults to `ratio` with --mod and `convolution` without.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    PlusA,
    MinusA,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::PlusA => Form::PlusA,
            FormArg::MinusA => Form::MinusA,
        }
    }
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_negative_numbers = true, default_value = "1")]
    a: String,
    #[arg(long, value_enum, default_value = "plus-a")]
    form: FormArg,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Also report the roots in Z/p^n (reading t = p) and run Hensel lifting.
    #[arg(long)]
    numeric: bool,
    /// Largest p^n searched exhaustively.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    brute_cap: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Coefficients c0, c1, ... as a JSON array of integers or decimal strings.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

#[derive(Debug, Args)]
struct PrimesArgs {
    #[arg(long)]
    count: usize,
    /// Check Prime1 (strictly increasing) and Prime2 (no later prime is
    /// divisible by an earlier one).
    #[arg(long)]
    check_axioms: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqOp {
    Value,
    Length,
    Index,
    Next,
    Previous,
    Sorted,
    Tailmin,
    Issorted,
    Permutad,
}

#[derive(Debug, Args)]
struct SeqArgs {
    #[arg(value_enum)]
    op: SeqOp,
    /// A JSON array, `primes` (unbounded), or `primes:K` (first K primes),
    /// followed by the operation's argument.
    #[arg(num_args = 1..=2, required = true)]
    args: Vec<String>,
    /// Search horizon for index/next/previous on unbounded polyseries.
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl<E: std::fmt::Display> From<E> for Failure
where
    E: std::error::Error,
{
    fn from(e: E) -> Self {
        usage(e.to_string())
    }
}

struct Output<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
    balanced: bool,
}

impl Output<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn note(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", s.as_ref());
    }

    fn value(&mut self, v: &Value) {
        self.line(serde_json::to_string(v).expect("serializable"));
    }

    fn series(&self, s: &TruncSeries) -> String {
        if self.balanced {
            s.balanced().to_string()
        } else {
            s.to_string()
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut output = Output {
        out,
        err,
        json: cli.json,
        balanced: cli.balanced,
    };
    let result = match cli.command {
        Command::Catalan(a) => cmd_catalan(&a, &mut output),
        Command::Solve(a) => cmd_solve(&a, &mut output),
        Command::Verify(a) => cmd_verify(&a, &mut output),
        Command::Primes(a) => cmd_primes(&a, &mut output),
        Command::Seq(a) => cmd_seq(&a, &mut output),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            output.note(format!("error: {}", f.message));
            f.code
        }
    }
}

fn parse_prime(s: &str) -> Result<Prime, Failure> {
    let p: BigUint = parse_decimal(s.trim())?;
    Ok(Prime::new(p)?)
}

fn cmd_catalan(args: &CatalanArgs, o: &mut Output<'_>) -> Result<i32, Failure> {
    let prime = args.modulus.as_deref().map(parse_prime).transpose()?;
    let method = args.method.unwrap_or(if prime.is_some() {
        MethodArg::Ratio
    } else {
        MethodArg::Convolution
    });
    let exact = |m: MethodArg| -> Vec<BigUint> {
        match m {
            MethodArg::Binomial => (0..=args.count).map(catalan_binomial).collect(),
            MethodArg::Convolution => catalan_convolution(args.count),
            MethodArg::Ratio => catalan_ratio(args.count),
        }
    };
    let method_name = method
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    match (&prime, method) {
        (None, MethodArg::Ratio) => Err(usage("--method ratio requires --mod")),
        (None, m) => {
            let values = exact(m);
            if o.json {
                o.value(&json!(decimal_strings(&values)));
            } else {
                o.line(join(&values));
            }
            Ok(EXIT_OK)
        }
        (Some(p), m) => {
            let (values, path): (Vec<BigUint>, _) = match m {
                MethodArg::Ratio => {
                    let (residues, path) = catalan_ratio_mod_p(args.count, p);
                    (residues.into_iter().map(Residue::into_value).collect(), path)
                }
                other => (
                    exact(other).iter().map(|c| c % p.value()).collect(),
                    GenerationPath::ExactReduce,
                ),
            };
            let fallback = matches!(m, MethodArg::Ratio) && path == GenerationPath::ExactReduce;
            if o.json {
                o.value(&json!({
                    "p": p.to_string(),
                    "method": method_name,
                    "fallback": fallback,
                    "values": decimal_strings(&values),
                }));
            } else {
                o.line(join(&values));
            }
            if fallback {
                o.note(format!(
                    "fallback: exact-reduce (p = {p} <= count + 2 = {})",
                    args.count + 2
                ));
            }
            Ok(EXIT_OK)
        }
    }
}

fn join(values: &[BigUint]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn build_problem(args: &ProblemArgs) -> Result<QuadraticProblem, Failure> {
    let prime = parse_prime(&args.p)?;
    let a: BigInt = parse_decimal(args.a.trim())?;
    Ok(QuadraticProblem::with_form(
        &prime,
        args.n,
        Residue::from_bigint(&a, &prime),
        args.form.into(),
    )?)
}

fn cmd_solve(args: &SolveArgs, o: &mut Output<'_>) -> Result<i32, Failure> {
    let prob = build_problem(&args.problem)?;
    let options = SolveOptions {
        numeric: args.numeric,
        brute_cap: args.brute_cap,
    };
    let report = solve(&prob, &options)?;
    if o.json {
        o.line(serde_json::to_string(&SolveReportJson::from(&report)).expect("serializable"));
    } else {
        let text = render_solve_text(&report, o.balanced);
        let _ = write!(o.out, "{text}");
    }
    Ok(if report.success() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn cmd_verify(args: &VerifyArgs, o: &mut Output<'_>) -> Result<i32, Failure> {
    let prob = build_problem(&args.problem)?;
    let coeffs = parse_integer_array(&args.coeffs)?;
    let x = TruncSeries::from_integers(prob.prime(), &coeffs, prob.n())?;
    let residual = prob.residual(&x)?;
    let zero = residual.is_zero();
    if o.json {
        o.value(&json!({
            "p": prob.prime().to_string(),
            "n": prob.n(),
            "a": prob.a().to_string(),
            "form": prob.form().name(),
            "zero": zero,
            "residual": SeriesJson::from_series(&residual),
        }));
    } else {
        let shown = o.series(&residual);
        o.line(format!("residual: {shown}"));
    }
    Ok(if zero { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_primes(args: &PrimesArgs, o: &mut Output<'_>) -> Result<i32, Failure> {
    if args.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let terms = seq::primes().truncation(args.count)?.terms()?;
    let axioms = args
        .check_axioms
        .then(|| (seq::check_prime1(&terms), seq::check_prime2(&terms)));
    let word = |b: bool| if b { "pass" } else { "fail" };
    if o.json {
        let mut v = json!({ "primes": decimal_strings(&terms) });
        if let Some((p1, p2)) = axioms {
            v["prime1"] = json!(p1);
            v["prime2"] = json!(p2);
        }
        o.value(&v);
    } else {
        o.line(join(&terms));
        if let Some((p1, p2)) = axioms {
            o.line(format!("Prime1: {}, Prime2: {}", word(p1), word(p2)));
        }
    }
    Ok(match axioms {
        Some((true, true)) | None => EXIT_OK,
        Some(_) => EXIT_FAILED,
    })
}

fn parse_polyseries(s: &str) -> Result<Polyseries, Failure> {
    let s = s.trim();
    if s == "primes" {
        return Ok(seq::primes());
    }
    if let Some(k) = s.strip_prefix("primes:") {
        let k: usize = parse_decimal(k)?;
        return Ok(seq::primes().truncation(k)?);
    }
    let terms = parse_integer_array(s)?
        .into_iter()
        .map(|t| {
            t.to_biguint()
                .ok_or_else(|| usage(format!("polyseries terms are natural numbers, got {t}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polyseries::from_terms(terms))
}

fn cmd_seq(args: &SeqArgs, o: &mut Output<'_>) -> Result<i32, Failure> {
    let needs_arg = !matches!(args.op, SeqOp::Length | SeqOp::Sorted | SeqOp::Issorted);
    if needs_arg != (args.args.len() == 2) {
        return Err(usage(if needs_arg {
            "this operation takes a polyseries and one argument"
        } else {
            "this operation takes a single polyseries"
        }));
    }
    let a = parse_polyseries(&args.args[0])?;
    let arg = args.args.get(1).map(|s| s.trim());
    let natural = || -> Result<BigUint, Failure> { Ok(parse_decimal(arg.expect("checked"))?) };
    let position = || -> Result<usize, Failure> { Ok(parse_decimal(arg.expect("checked"))?) };
    let big = |v: &BigUint| (v.to_string(), json!(v.to_string()));
    let horizon = args.horizon;

    let (text, value) = match args.op {
        SeqOp::Value => big(&a.value(position()?)?),
        SeqOp::Length => match a.length() {
            Length::Finite(k) => (k.to_string(), json!(k)),
            Length::Unbounded => ("unbounded".to_string(), json!("unbounded")),
        },
        SeqOp::Index => {
            let i = a.index(&natural()?, horizon).map_or(-1, |i| i as i64);
            (i.to_string(), json!(i))
        }
        SeqOp::Next | SeqOp::Previous => {
            let target = natural()?;
            let found = if matches!(args.op, SeqOp::Next) {
                a.next(&target, horizon)
            } else {
                a.previous(&target, horizon)
            };
            match found {
                Some(v) => big(&v),
                None => ("none".to_string(), Value::Null),
            }
        }
        SeqOp::Sorted => {
            let terms = a.sorted()?.terms()?;
            (
                format!("[{}]", join(&terms).replace(' ', ",")),
                json!(decimal_strings(&terms)),
            )
        }
        SeqOp::Tailmin => big(&a.tailmin(position()?)?),
        SeqOp::Issorted => {
            let b = a.is_sorted()?;
            (b.to_string(), json!(b))
        }
        SeqOp::Permutad => {
            let b = permutad(&a, &parse_polyseries(arg.expect("checked"))?)?;
            (b.to_string(), json!(b))
        }
    };
    if o.json {
        o.value(&value);
    } else {
        o.line(text);
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("polyseries").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn catalan_command() {
        assert_eq!(
            run_cli(&["catalan", "--count", "9"]).1.trim(),
            "1 1 2 5 14 42 132 429 1430 4862"
        );
        assert_eq!(run_cli(&["catalan", "--count", "0"]).1.trim(), "1");
        let (code, out, err) =
            run_cli(&["catalan", "--count", "10", "--mod", "7", "--method", "ratio"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1 1 2 5 0 0 6 2 2 4 3");
        assert!(err.contains("fallback: exact-reduce"));
        assert_eq!(run_cli(&["catalan", "--count", "3", "--method", "ratio"]).0, 2);
        assert_eq!(run_cli(&["catalan", "--count", "3", "--mod", "8"]).0, 2);
        let (_, out, _) = run_cli(&["--json", "catalan", "--count", "3"]);
        assert_eq!(out.trim(), r#"["1","1","2","5"]"#);
    }

    #[test]
    fn solve_command() {
        let (code, out, _) = run_cli(&["solve", "--p", "5", "--n", "4", "--a", "1", "--numeric"]);
        assert_eq!(code, 0);
        assert!(out.contains("x1 = 345, x2 = 279"), "{out}");
        let (code, _, err) = run_cli(&["solve", "--p", "7", "--n", "4", "--a", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("a must be invertible"));
        assert_eq!(run_cli(&["solve", "--p", "7", "--n", "1", "--a", "1"]).0, 2);
        assert_eq!(run_cli(&["solve", "--p", "9", "--n", "4", "--a", "1"]).0, 2);
        let (code, out, _) = run_cli(&["solve", "--p", "101", "--n", "5", "--a", "-3", "--balanced"]);
        assert_eq!(code, 0);
        assert!(out.contains("F_101"));
    }

    #[test]
    fn verify_command() {
        let ok = r#"[0,-1,-1,-2,-5,-14,-42,-132,-429,-1430]"#;
        let printed = r#"[0,-1,-1,-2,-5,-56,0,-132,-429,-1430]"#;
        let base = ["verify", "--p", "10007", "--n", "10", "--a", "1", "--coeffs"];
        let with = |c: &'static str| {
            let mut v = base.to_vec();
            v.push(c);
            v
        };
        assert_eq!(run_cli(&with(ok)).0, 0);
        assert_eq!(run_cli(&with(printed)).0, 1);
        let (code, out, _) = run_cli(&["verify", "--p", "7", "--n", "2", "--a", "1", "--coeffs", "[]"]);
        assert_eq!(code, 1);
        assert_eq!(out.trim(), "residual: t");
        assert_eq!(run_cli(&with("[1, 2")).0, 2);
        assert_eq!(run_cli(&with("[0,0,0,0,0,0,0,0,0,0,0]")).0, 2);
    }

    #[test]
    fn primes_command() {
        assert_eq!(run_cli(&["primes", "--count", "5"]).1.trim(), "2 3 5 7 11");
        let (code, out, _) = run_cli(&["primes", "--count", "200", "--check-axioms"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("Prime1: pass, Prime2: pass\n"));
        assert_eq!(run_cli(&["primes", "--count", "0"]).0, 2);
    }

    #[test]
    fn seq_command() {
        assert_eq!(run_cli(&["seq", "sorted", "[3,1,2]"]).1.trim(), "[1,2,3]");
        assert_eq!(run_cli(&["seq", "permutad", "[3,1,2]", "[2,3,1]"]).1.trim(), "true");
        assert_eq!(run_cli(&["seq", "index", "[2,3,5]", "4"]).1.trim(), "-1");
        assert_eq!(run_cli(&["seq", "value", "primes", "4"]).1.trim(), "7");
        assert_eq!(run_cli(&["seq", "length", "primes"]).1.trim(), "unbounded");
        assert_eq!(run_cli(&["seq", "length", "primes:10"]).1.trim(), "10");
        assert_eq!(run_cli(&["seq", "next", "primes", "9"]).1.trim(), "none");
        assert_eq!(run_cli(&["seq", "previous", "[9,4,6]", "6"]).1.trim(), "4");
        assert_eq!(run_cli(&["seq", "tailmin", "[3,1,2]", "3"]).1.trim(), "2");
        assert_eq!(run_cli(&["seq", "issorted", "[1,1,2]"]).1.trim(), "false");
        assert_eq!(run_cli(&["--json", "seq", "sorted", "[3,1,2]"]).1.trim(), r#"["1","2","3"]"#);
        assert_eq!(run_cli(&["seq", "value", "[5,9,1]", "4"]).0, 2);
        assert_eq!(run_cli(&["seq", "sorted", "primes"]).0, 2);
        assert_eq!(run_cli(&["seq", "sorted", "[1,-2]"]).0, 2);
        assert_eq!(run_cli(&["seq", "value", "[1,2]"]).0, 2);
        assert_eq!(run_cli(&["seq", "bogus", "[1,2]"]).0, 2);
    }
}
