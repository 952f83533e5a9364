//! `palnil`: command-line front end.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use palnil::autos::central::decompose_central;
use palnil::autos::palindromic::classify;
use palnil::autos::tame::{decompose_bglm, tameness_necessary};
use palnil::autos::{compose_symbols, inverse, parse_endo, parse_symbols, render_endo, render_symbols, Decomposition, Endo};
use palnil::nilpotent::Group;
use palnil::verify::{self, Config, Suite};
use palnil::{Error, NilpotentGroup};

#[derive(Parser)]
#[command(name = "palnil", version, about = "Palindromic automorphisms of free nilpotent groups")]
struct Cli {
    /// Rank n of N_{n,k} (default 2; suite default for `verify`).
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Step k of N_{n,k} (default 2; suite default for `verify`).
    #[arg(long, global = true)]
    step: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Random cases per suite.
    #[arg(long, global = true, default_value_t = 100)]
    cases: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hall normal form of a word.
    Normalize { word: String },
    /// Automorphism operations. FILE is an automorphism file, or `-` for stdin.
    #[command(subcommand)]
    Auto(Auto),
    /// Run a verification suite.
    Verify {
        /// One of: lemma2.5 prop2.8 jacobi lemma4.2 foxtable lemma5.3 lemma5.4
        /// thm5.8-n2 prop3.1 prop3.3 thm2.1 prop4.4 thm5.8 thm2.6 oracle.
        suite: String,
    },
}

#[derive(Subcommand)]
enum Auto {
    /// Apply the automorphism to a word.
    Eval { file: PathBuf, word: String },
    /// Compose left to right: the first file acts first.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    Invert { file: PathBuf },
    Classify { file: PathBuf },
    DecomposeCentral { file: PathBuf },
    DecomposeBglm { file: PathBuf },
    /// Fox-calculus tameness condition for a central automorphism of N_{n,3}.
    TameCheck { file: PathBuf },
    /// Build an automorphism file from generator symbols, e.g. `mu(1,2) phi2(2,1;1)^-1`.
    Gen { symbols: Vec<String> },
}

enum Failure {
    Usage(String),
    Negative(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAutomorphism(_) | Error::Precondition(_) => Failure::Negative(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

/// Ordered key/value output, rendered as text or `key=value` lines.
#[derive(Default)]
struct Out {
    pairs: Vec<(String, String)>,
}

impl Out {
    fn put(&mut self, k: impl Into<String>, v: impl ToString) -> &mut Self {
        self.pairs.push((k.into(), v.to_string()));
        self
    }

    fn render(&self, format: Format) -> String {
        let mut s = String::new();
        for (k, v) in &self.pairs {
            match format {
                Format::Kv => writeln!(s, "{k}={v}").unwrap(),
                Format::Text => writeln!(s, "{k}: {v}").unwrap(),
            }
        }
        s
    }
}

fn group(cli: &Cli) -> Result<Group, Failure> {
    Ok(NilpotentGroup::shared(cli.rank.unwrap_or(2), cli.step.unwrap_or(2))?)
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn load(path: &PathBuf, g: &Group) -> Result<Endo, Failure> {
    let text = read(path)?;
    parse_endo(&text, g).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn endo_out(out: &mut Out, e: &Endo) {
    for (i, img) in e.images().iter().enumerate() {
        out.put(format!("image.{}", i + 1), img);
    }
}

fn decomposition(cli: &Cli, d: &Decomposition) -> Outcome {
    if cli.format == Format::Text && d.residual_trivial {
        return Ok((render_symbols(&d.factors), true));
    }
    let mut out = Out::default();
    out.put("status", if d.residual_trivial { "ok" } else { "fail" });
    out.put("factors", d.factors.len());
    for (j, f) in d.factors.iter().enumerate() {
        out.put(format!("factor.{}", j + 1), f);
    }
    if let Some(diag) = &d.diagnostic {
        for (j, line) in diag.lines().enumerate() {
            out.put(if j == 0 { "diagnostic".to_string() } else { format!("diagnostic.{j}") }, line);
        }
    }
    Ok((out.render(cli.format), d.residual_trivial))
}

fn normalize(cli: &Cli, word: &str) -> Outcome {
    let g = group(cli)?;
    let x = g.parse(word)?;
    if cli.format == Format::Text {
        return Ok((format!("{x}\n"), true));
    }
    let mut out = Out::default();
    out.put("element", &x);
    let exps: Vec<String> = x.exponents().iter().map(|e| e.to_string()).collect();
    out.put("exponents", exps.join(","));
    out.put("weight", x.weight());
    Ok((out.render(cli.format), true))
}

fn auto(cli: &Cli, cmd: &Auto) -> Outcome {
    let g = group(cli)?;
    let text_endo = |e: &Endo| Ok((render_endo(e), true));
    match cmd {
        Auto::Eval { file, word } => {
            let e = load(file, &g)?;
            let x = e.apply(&g.parse(word)?)?;
            if cli.format == Format::Text {
                return Ok((format!("{x}\n"), true));
            }
            let mut out = Out::default();
            out.put("element", &x);
            Ok((out.render(cli.format), true))
        }
        Auto::Compose { files } => {
            let mut acc = Endo::identity(&g);
            for f in files {
                acc = acc.compose(&load(f, &g)?)?;
            }
            if cli.format == Format::Text {
                return text_endo(&acc);
            }
            let mut out = Out::default();
            out.put("automorphism", acc.is_automorphism());
            endo_out(&mut out, &acc);
            Ok((out.render(cli.format), true))
        }
        Auto::Invert { file } => {
            let e = load(file, &g)?;
            let inv = inverse(&e)?;
            let round_trip = e.compose(&inv.inverse)?.is_identity() && inv.inverse.compose(&e)?.is_identity();
            if !round_trip {
                return Err(Failure::Internal("inverse does not round-trip".into()));
            }
            if cli.format == Format::Text {
                return text_endo(&inv.inverse);
            }
            let mut out = Out::default();
            out.put("method", format!("{:?}", inv.method).to_lowercase());
            out.put("factors", inv.factors.len());
            out.put("round_trip", round_trip);
            endo_out(&mut out, &inv.inverse);
            Ok((out.render(cli.format), true))
        }
        Auto::Classify { file } => {
            let c = classify(&load(file, &g)?)?;
            let mut out = Out::default();
            out.put("ia", c.is_ia)
                .put("central", c.is_central)
                .put("palindromic", c.is_palindromic)
                .put("elementary_palindromic", c.is_elementary_palindromic)
                .put("pi_level", c.pi_level.map_or("none".to_string(), |l| l.to_string()));
            if let Some(d) = &c.diagnostic {
                out.put("diagnostic", d);
            }
            Ok((out.render(cli.format), true))
        }
        Auto::DecomposeCentral { file } => decomposition(cli, &decompose_central(&load(file, &g)?)?),
        Auto::DecomposeBglm { file } => decomposition(cli, &decompose_bglm(&load(file, &g)?)?),
        Auto::TameCheck { file } => {
            let t = tameness_necessary(&load(file, &g)?)?;
            let (squares, mixed) = t.failing_terms();
            let mut out = Out::default();
            out.put("status", if t.holds { "PASS" } else { "FAIL" });
            out.put("sum", &t.sum);
            if !t.holds {
                let failing: Vec<&str> = [(squares, "square"), (mixed, "mixed")].iter().filter(|p| p.0).map(|p| p.1).collect();
                out.put("failing_terms", failing.join(","));
                for line in t.sum.residue_report().lines() {
                    let (k, v) = line.split_once(": ").unwrap_or((line, ""));
                    let k = k.trim_matches(|c| c == '(' || c == ')').replace(',', ".");
                    out.put(format!("residue.{k}"), v);
                }
            }
            Ok((out.render(cli.format), t.holds))
        }
        Auto::Gen { symbols } => {
            let syms = parse_symbols(&symbols.join(" "), &g)?;
            let e = compose_symbols(&syms, &g)?;
            if cli.format == Format::Text {
                return text_endo(&e);
            }
            let mut out = Out::default();
            endo_out(&mut out, &e);
            Ok((out.render(cli.format), true))
        }
    }
}

fn verify_cmd(cli: &Cli, name: &str) -> Outcome {
    let suite: Suite = name.parse()?;
    let (n, k) = suite.defaults();
    let config = Config { rank: cli.rank.unwrap_or(n), step: cli.step.unwrap_or(k), seed: cli.seed, cases: cli.cases };
    let report = verify::run(suite, config)?;
    let mut out = Out::default();
    out.put("suite", suite)
        .put("rank", config.rank)
        .put("step", config.step)
        .put("seed", config.seed)
        .put("cases", config.cases)
        .put("checks", report.checks)
        .put("failures", report.failures.len());
    let mut notes = report.notes.clone();
    notes.sort();
    for (j, n) in notes.iter().enumerate() {
        out.put(format!("note.{}", j + 1), n);
    }
    let mut failures = report.failures.clone();
    failures.sort();
    for (j, f) in failures.iter().enumerate() {
        out.put(format!("failure.{}", j + 1), f);
    }
    out.put("status", if report.passed() { "PASS" } else { "FAIL" });
    Ok((out.render(cli.format), report.passed()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Normalize { word } => normalize(&cli, word),
        Command::Auto(a) => auto(&cli, a),
        Command::Verify { suite } => verify_cmd(&cli, suite),
    };
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Negative(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
