use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctest_core::construct::{build_u, build_v, build_w2};
use ctest_core::endo::Endo;
use ctest_core::expr::{set_seam_cap, ExactEquality, DEFAULT_EQUAL_BUDGET, DEFAULT_SEAM_CAP};
use ctest_core::group::{conjugator_tuple, conjugator_word, is_cyclic_tuple};
use ctest_core::oracle::{equal_mc, EqualityVerdict, OracleConfig};
use ctest_core::{Expr, Rank, Word};
use ctest::harness::{list_suites, run_suite, SmallConfig, CERTIFY_STEPS};
use ctest::input::{parse_expr, parse_tuple};
use ctest::report::Report;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ctest", version, about = "C-test words for free groups: construction, equality, conjugacy and verification")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Rank m of the free group (default: the largest generator index in the input, at least 2).
    #[arg(long, global = true, env = "CTEST_M")]
    m: Option<u32>,
    #[arg(long, global = true, env = "CTEST_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of random primes for Monte Carlo equality.
    #[arg(long, global = true, env = "CTEST_PRIMES", default_value_t = 5)]
    primes: usize,
    #[arg(long, global = true, env = "CTEST_PRIME_BITS", default_value_t = 62)]
    prime_bits: u32,
    /// Cursor steps spent at a seam before switching to fingerprint search.
    #[arg(long, global = true, env = "CTEST_SEAM_CAP", default_value_t = DEFAULT_SEAM_CAP)]
    seam_cap: u64,
    /// Largest denotation expanded or compared letter by letter.
    #[arg(long, global = true, env = "CTEST_EXPAND_BUDGET", default_value_t = DEFAULT_EQUAL_BUDGET)]
    expand_budget: u64,
    #[arg(long, global = true, env = "CTEST_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WordKind {
    W2,
    U,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scale {
    Default,
    Tiny,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build w2, u or v_n and report its size, expansion or DAG.
    Construct {
        #[arg(long, value_enum)]
        word: WordKind,
        /// Arity of v_n.
        #[arg(long)]
        n: Option<usize>,
        /// Arguments as `;`-separated words (default: the generators).
        #[arg(long)]
        args: Option<String>,
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        dump_expr: bool,
    },
    /// Substitute a tuple into w2, u or v_n and test the value against the identity.
    Eval {
        #[arg(long, value_enum)]
        word: WordKind,
        #[arg(long)]
        args: String,
    },
    /// Compare two words or expressions.
    Equal {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Decide whether `;`-separated words generate a cyclic subgroup.
    IsCyclic {
        #[arg(long)]
        words: String,
    },
    ConjugateWords {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    ConjugateTuples {
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
    /// Endomorphisms given as `;`-separated generator images.
    Endo {
        #[command(subcommand)]
        action: EndoAction,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        suite: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Scale::Default)]
        scale: Scale,
        /// Override the number of cases per suite.
        #[arg(long)]
        cases: Option<usize>,
    },
    ListSuites,
}

#[derive(Subcommand, Debug)]
enum EndoAction {
    Apply {
        #[arg(long)]
        endo: String,
        #[arg(long)]
        word: String,
    },
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    ImageCyclic {
        #[arg(long)]
        endo: String,
    },
}

type CliResult<T> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

/// A command result: the JSON value and whether the command's assertion held.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    set_seam_cap(cli.global.seam_cap);
    match run(&cli) {
        Ok(out) => {
            emit(&out.value, cli.global.format);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("values serialize")),
        Format::Text => print_text(value, ""),
    }
}

fn print_text(value: &Value, prefix: &str) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                print_text(v, &key);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                print_text(v, &format!("{prefix}[{i}]"));
            }
        }
        Value::String(s) => println!("{prefix}: {s}"),
        other => println!("{prefix}: {other}"),
    }
}

/// Largest `xN` mentioned in any text argument, and at least the arity of a
/// generator-only construction.
fn inferred_rank(cmd: &Command) -> u32 {
    let texts: Vec<&str> = match cmd {
        Command::Construct { word, n, args, .. } => {
            let arity = match (word, args) {
                (_, Some(_)) => 2,
                (WordKind::V, None) => n.unwrap_or(2) as u32,
                _ => 2,
            };
            return args.as_deref().map_or(arity, max_generator).max(arity);
        }
        Command::Eval { args, .. } => vec![args],
        Command::Equal { a, b } => vec![a, b],
        Command::IsCyclic { words } => vec![words],
        Command::ConjugateWords { x, y } => vec![x, y],
        Command::ConjugateTuples { xs, ys } => vec![xs, ys],
        Command::Endo { action } => match action {
            EndoAction::Apply { endo, word } => {
                // the endomorphism fixes the rank through its number of images
                return (endo.split(';').count() as u32).max(max_generator(word));
            }
            EndoAction::Compose { f, .. } => return f.split(';').count() as u32,
            EndoAction::ImageCyclic { endo } => return endo.split(';').count() as u32,
        },
        Command::Verify { .. } | Command::ListSuites => vec![],
    };
    texts.into_iter().map(max_generator).max().unwrap_or(2).max(2)
}

fn max_generator(text: &str) -> u32 {
    let bytes = text.as_bytes();
    let mut best = 2;
    for (i, _) in text.match_indices('x') {
        let digits: String = bytes[i + 1..].iter().take_while(|b| b.is_ascii_digit()).map(|&b| b as char).collect();
        if let Ok(k) = digits.parse::<u32>() {
            best = best.max(k);
        }
    }
    best
}

fn oracle(g: &Global) -> OracleConfig {
    OracleConfig { prime_count: g.primes, prime_bits: g.prime_bits, seed: g.seed }
}

fn stats(e: &Expr) -> Value {
    json!({
        "length": e.len().to_string(),
        "nodes": e.node_count(),
        "depth": e.depth(),
        "max_generator": e.max_generator(),
    })
}

fn build(kind: WordKind, n: Option<usize>, args: &[Expr]) -> CliResult<Expr> {
    Ok(match kind {
        WordKind::W2 | WordKind::U => {
            if args.len() != 2 {
                return Err(ctest_core::Error::Arity { expected: 2, got: args.len() }.into());
            }
            if kind == WordKind::W2 {
                build_w2(&args[0], &args[1])
            } else {
                build_u(&args[0], &args[1])
            }
        }
        WordKind::V => build_v(n.unwrap_or(args.len()), args)?,
    })
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let rank = Rank::new(g.m.unwrap_or_else(|| inferred_rank(&cli.command)))?;
    oracle(g).validate()?;
    match &cli.command {
        Command::Construct { word, n, args, stats: want_stats, expand, dump_expr } => {
            let args: Vec<Expr> = match args {
                Some(text) => parse_tuple(text, rank)?.iter().map(Expr::lit).collect(),
                None => {
                    let count = match word {
                        WordKind::V => n.ok_or("--n is required for --word v without --args")?,
                        _ => 2,
                    };
                    if count as u32 > rank.get() {
                        return Err(format!("{count} generators need --m {count} or more").into());
                    }
                    (1..=count as u32).map(Expr::generator).collect()
                }
            };
            if let (Some(n), WordKind::V) = (n, word) {
                if *n != args.len() {
                    return Err(ctest_core::Error::Arity { expected: *n, got: args.len() }.into());
                }
            }
            let e = build(*word, *n, &args)?;
            let mut out = json!({ "word": format!("{word:?}").to_lowercase(), "arity": args.len() });
            if *want_stats || !(*expand || *dump_expr) {
                out["stats"] = stats(&e);
            }
            if *expand {
                out["expansion"] = match e.expand(g.expand_budget) {
                    Ok(w) => json!(w.to_string()),
                    Err(t) => return Err(format!("length {} exceeds --expand-budget", t.length).into()),
                };
            }
            if *dump_expr {
                out["dag"] = serde_json::to_value(ctest::dump::dump(&e))?;
            }
            Ok(Outcome::ok(out))
        }
        Command::Eval { word, args } => {
            let tuple = parse_tuple(args, rank)?;
            let exprs: Vec<Expr> = tuple.iter().map(Expr::lit).collect();
            let e = build(*word, None, &exprs)?;
            let verdict = equality(&e, &Expr::empty(), rank, g)?;
            let mut out = json!({ "stats": stats(&e), "identity": verdict });
            if let Ok(w) = e.expand(g.expand_budget) {
                out["expansion"] = json!(w.to_string());
            }
            Ok(Outcome::ok(out))
        }
        Command::Equal { a, b } => {
            let (ea, eb) = (parse_expr(a, rank)?, parse_expr(b, rank)?);
            let verdict = equality(&ea, &eb, rank, g)?;
            let ok = verdict.equal;
            Ok(Outcome { value: serde_json::to_value(verdict)?, ok })
        }
        Command::IsCyclic { words } => {
            let ws = parse_tuple(words, rank)?;
            Ok(Outcome::ok(match is_cyclic_tuple(&ws) {
                Some(wit) => json!({ "cyclic": true, "root": wit.root.to_string(), "exponents": wit.exponents }),
                None => json!({ "cyclic": false }),
            }))
        }
        Command::ConjugateWords { x, y } => {
            let (x, y) = (Word::parse(x, rank)?, Word::parse(y, rank)?);
            Ok(conjugacy(conjugator_word(&x, &y)))
        }
        Command::ConjugateTuples { xs, ys } => {
            let (xs, ys) = (parse_tuple(xs, rank)?, parse_tuple(ys, rank)?);
            Ok(conjugacy(conjugator_tuple(&xs, &ys)?))
        }
        Command::Endo { action } => match action {
            EndoAction::Apply { endo, word } => {
                let f = Endo::parse(endo, rank)?;
                let e = f.apply(&parse_expr(word, rank)?)?;
                let mut out = json!({ "stats": stats(&e) });
                if let Ok(w) = e.expand(g.expand_budget) {
                    out["image"] = json!(w.to_string());
                }
                Ok(Outcome::ok(out))
            }
            EndoAction::Compose { f, g: second } => {
                let (f, h) = (Endo::parse(f, rank)?, Endo::parse(second, rank)?);
                Ok(Outcome::ok(json!({ "endo": Endo::compose(&f, &h)?.to_string() })))
            }
            EndoAction::ImageCyclic { endo } => {
                let f = Endo::parse(endo, rank)?;
                Ok(Outcome::ok(json!({ "cyclic": f.image_is_cyclic() })))
            }
        },
        Command::Verify { suite, all, scale, cases } => {
            let mut cfg = match scale {
                Scale::Default => SmallConfig::default(),
                Scale::Tiny => SmallConfig::tiny(),
            };
            cfg.oracle = OracleConfig { seed: 0, ..oracle(g) };
            if let Some(c) = cases {
                cfg.cases = *c;
            }
            if *all {
                let reports: Vec<Report> =
                    list_suites().iter().map(|s| run_suite(s.name, g.seed, &cfg)).collect::<Result<_, _>>()?;
                let findings: usize = reports.iter().map(|r| r.findings.len()).sum();
                let bound: f64 = reports.iter().map(|r| r.error_bound_total).sum();
                let value = json!({ "reports": reports, "findings_total": findings, "error_bound_total": bound });
                Ok(Outcome { value, ok: findings == 0 })
            } else {
                let report = run_suite(suite.as_deref().expect("clap requires --suite"), g.seed, &cfg)?;
                let ok = report.is_clean();
                Ok(Outcome { value: serde_json::to_value(report)?, ok })
            }
        }
        Command::ListSuites => Ok(Outcome::ok(serde_json::to_value(list_suites())?)),
    }
}

#[derive(Serialize)]
struct Verdict {
    /// `Equal`, `Unequal`, `ProbablyEqual` or `DefinitelyUnequal`.
    verdict: &'static str,
    /// `exact` (letter by letter), `certified` (compressed comparison) or `monte_carlo`.
    method: &'static str,
    equal: bool,
    error_bound: Option<f64>,
    separating_prime: Option<u64>,
    length_a: String,
    length_b: String,
}

/// Exact comparison when both sides fit the budget, otherwise the matrix oracle.
fn equality(a: &Expr, b: &Expr, rank: Rank, g: &Global) -> CliResult<Verdict> {
    let mut v = Verdict {
        verdict: "Equal",
        method: "exact",
        equal: true,
        error_bound: None,
        separating_prime: None,
        length_a: a.len().to_string(),
        length_b: b.len().to_string(),
    };
    match a.equal_exact(b, g.expand_budget) {
        ExactEquality::Equal => return Ok(v),
        ExactEquality::Unequal => {
            v.verdict = "Unequal";
            v.equal = false;
            return Ok(v);
        }
        ExactEquality::BudgetExceeded => {}
    }
    match equal_mc(a, b, rank, &oracle(g))? {
        EqualityVerdict::DefinitelyUnequal { prime } => {
            v.verdict = "DefinitelyUnequal";
            v.method = "monte_carlo";
            v.equal = false;
            v.separating_prime = Some(prime);
        }
        EqualityVerdict::ProbablyEqual { error_bound } => match a.certify_equal(b, CERTIFY_STEPS) {
            Some(true) => v.method = "certified",
            Some(false) => {
                v.verdict = "Unequal";
                v.method = "certified";
                v.equal = false;
            }
            None => {
                v.verdict = "ProbablyEqual";
                v.method = "monte_carlo";
                v.error_bound = Some(error_bound);
            }
        },
    }
    Ok(v)
}

fn conjugacy(found: Option<Word>) -> Outcome {
    match found {
        Some(s) => Outcome::ok(json!({ "conjugate": true, "conjugator": s.to_string() })),
        None => Outcome { value: json!({ "conjugate": false, "verdict": "NotConjugate" }), ok: false },
    }
}
