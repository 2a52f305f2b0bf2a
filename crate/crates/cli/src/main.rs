use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;

use padicrep_core::newton;
use padicrep_core::reps::{self, Character, Side};
use padicrep_core::uea::{self, Generator};
use padicrep_core::verify::{self, RunConfig, SuiteReport, SUITES};
use padicrep_core::{Backend, Error, ErrorKind, PadicScalar, Rational, TruncatedSeries};

#[derive(Parser)]
#[command(name = "padicrep", version, about = "Exact p-adic distributions, Newton polygons and principal-series actions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Coefficient backend: exact or approx.
    #[arg(long, global = true, default_value = "exact")]
    backend: String,
    /// Absolute precision M for the approx backend.
    #[arg(long, global = true, default_value_t = 20)]
    prec: i64,
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 32)]
    trunc: usize,
    /// Seed for randomized cases.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Character as m1,m2.
    #[arg(long, global = true)]
    chi: Option<String>,
    /// Chart: plus or minus.
    #[arg(long, global = true)]
    side: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a dictionary operation and write a series file.
    Apply {
        /// dirac, log1p, one, translate, pushforward, delta, lie-mult, add, mul,
        /// uplus, uminus-power, dual-lie, dual-diag, casimir, ode
        op: String,
        /// Input series file (not needed for dirac, log1p, one, ode).
        input: Option<PathBuf>,
        /// Second operand for add and mul.
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Lie generator for dual-lie: up, h, e, um.
        #[arg(long)]
        gen: Option<String>,
    },
    /// Newton polygon report of a series file.
    Newton {
        input: PathBuf,
        /// Lower bound for valuations beyond the reliable order.
        #[arg(long, allow_hyphen_values = true)]
        tail_floor: Option<i64>,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// k-th moment of a series.
    Moment {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Gauss norm exponent min_n (v(c_n) + n s).
    GaussNorm {
        input: PathBuf,
        #[arg(long)]
        s: String,
    },
}

enum Failure {
    Lib(Error),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Precision => 4,
            })
        }
    }
}

fn parse_err(msg: String) -> Error {
    Error::Parse(msg)
}

impl Global {
    fn backend(&self) -> Result<Backend, Error> {
        match self.backend.as_str() {
            "exact" => Ok(Backend::Exact),
            "approx" => Ok(Backend::Approx { precision: self.prec }),
            other => Err(parse_err(format!("unknown backend `{other}`"))),
        }
    }

    fn chi(&self) -> Result<Option<Character>, Error> {
        self.chi.as_deref().map(parse_chi).transpose()
    }

    fn side(&self) -> Result<Option<Side>, Error> {
        self.side.as_deref().map(str::parse).transpose()
    }

    fn config(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::new(self.p, self.backend()?, self.trunc, self.seed)?;
        cfg.chi = self.chi()?;
        cfg.side = self.side()?;
        Ok(cfg)
    }
}

fn parse_chi(s: &str) -> Result<Character, Error> {
    if s.starts_with("chi(") {
        return s.parse();
    }
    let bad = || parse_err(format!("expected --chi=m1,m2, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(Character::new(
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| parse_err(format!("expected a rational number, got `{s}`")))
}

fn parse_generator(s: &str) -> Result<Generator, Error> {
    Generator::ALL
        .into_iter()
        .find(|g| g.name() == s)
        .ok_or_else(|| parse_err(format!("unknown generator `{s}`; expected up, h, e or um")))
}

fn read_series(path: &PathBuf) -> Result<TruncatedSeries, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
    TruncatedSeries::from_text(&text)
}

fn need<T>(v: Option<T>, flag: &str, op: &str) -> Result<T, Error> {
    v.ok_or_else(|| parse_err(format!("`{op}` needs --{flag}")))
}

fn run(cli: Cli) -> Res<()> {
    let g = cli.global;
    match cli.command {
        Command::Apply {
            op,
            input,
            with,
            output,
            a,
            b,
            m,
            c,
            gen,
        } => {
            let out = apply(&g, &op, input, with, a, b, m, c, gen)?;
            let text = out.to_text();
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| parse_err(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Newton { input, tail_floor } => {
            let f = read_series(&input)?;
            let poly = newton::polygon_with_floor(&f, tail_floor)?;
            print_polygon(&poly, g.json);
            Ok(())
        }
        Command::Verify { suite, m, c } => {
            let mut cfg = g.config()?;
            cfg.m = m;
            cfg.c = c.as_deref().map(parse_rational).transpose()?;
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let reports: Vec<SuiteReport> = names
                .iter()
                .map(|s| verify::run_suite(s, &cfg))
                .collect::<Result<_, _>>()?;
            if g.json {
                let json = if reports.len() == 1 {
                    serde_json::to_string_pretty(&reports[0])
                } else {
                    serde_json::to_string_pretty(&reports)
                };
                println!("{}", json.expect("report serializes"));
            } else {
                for r in &reports {
                    print!("{}", r.render_text());
                }
            }
            if reports.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Suite)
            }
        }
        Command::Moment { input, k } => {
            let f = read_series(&input)?;
            let v = f.moment(k)?;
            if g.json {
                println!("{}", serde_json::json!({ "k": k, "moment": v.render() }));
            } else {
                println!("{}", v.render());
            }
            Ok(())
        }
        Command::GaussNorm { input, s } => {
            let f = read_series(&input)?;
            let s: Rational64 = s
                .parse()
                .map_err(|_| parse_err(format!("expected a fraction for --s, got `{s}`")))?;
            let v = f.gauss_norm(s)?;
            let text = format!("{}/{}", v.numer(), v.denom());
            if g.json {
                println!("{}", serde_json::json!({ "s": format!("{}/{}", s.numer(), s.denom()), "exponent": text }));
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn apply(
    g: &Global,
    op: &str,
    input: Option<PathBuf>,
    with: Option<PathBuf>,
    a: Option<String>,
    b: Option<String>,
    m: Option<usize>,
    c: Option<String>,
    gen: Option<String>,
) -> Result<TruncatedSeries, Error> {
    let backend = g.backend()?;
    if g.trunc < 1 {
        return Err(Error::Domain("truncation order must be positive".into()));
    }
    match op {
        "dirac" => {
            let a = PadicScalar::parse(g.p, &need(a, "a", op)?)?;
            return TruncatedSeries::dirac(g.p, backend, &a, g.trunc);
        }
        "log1p" => return Ok(TruncatedSeries::log1p(g.p, backend, g.trunc)),
        "one" => return Ok(TruncatedSeries::one(g.p, backend, g.trunc)),
        "ode" => {
            let c = parse_rational(&need(c, "c", op)?)?;
            let sol = reps::solve_ode(g.p, &c, g.trunc);
            if !sol.solvable {
                eprintln!("note: no nonzero solution for c={c}");
            }
            return Ok(sol.series);
        }
        _ => {}
    }
    let f = read_series(&need(input, "input", op).map_err(|_| parse_err(format!("`{op}` needs an input series file")))?)?;
    let p = f.prime();
    let scalar = |s: Option<String>, flag: &str| -> Result<PadicScalar, Error> {
        PadicScalar::parse(p, &need(s, flag, op)?)
    };
    let chi = || -> Result<Character, Error> { need(g.chi()?, "chi", op) };
    let side = || -> Result<Side, Error> { Ok(g.side()?.unwrap_or(Side::Minus)) };
    match op {
        "translate" => f.translate(&scalar(b, "b")?),
        "pushforward" => f.pushforward(&scalar(b, "b")?),
        "delta" => f.delta_op(),
        "lie-mult" => Ok(f.lie_mult()),
        "add" | "mul" => {
            let other = read_series(&need(with, "with", op)?)?;
            if op == "add" {
                f.add(&other)
            } else {
                f.mul(&other)
            }
        }
        "uplus" => Ok(reps::dual_uplus(&f)),
        "uminus-power" => reps::dual_uminus_power(chi()?, need(m, "m", op)?, &f),
        "dual-lie" => reps::dual_lie(side()?, chi()?, parse_generator(&need(gen, "gen", op)?)?, &f),
        "dual-diag" => reps::dual_diag(side()?, chi()?, &scalar(b, "b")?, &f),
        "casimir" => reps::dual_pbw(side()?, chi()?, &uea::casimir(), &f),
        other => Err(parse_err(format!(
            "unknown operation `{other}`; expected dirac, log1p, one, ode, translate, pushforward, \
             delta, lie-mult, add, mul, uplus, uminus-power, dual-lie, dual-diag or casimir"
        ))),
    }
}

#[derive(Serialize)]
struct SegmentRow {
    slope: String,
    length: usize,
    zero_valuation: String,
    count: usize,
    certified: bool,
}

#[derive(Serialize)]
struct PolygonReport {
    t_adic_order: usize,
    certified_through: Option<String>,
    segments: Vec<SegmentRow>,
}

fn frac(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn print_polygon(poly: &newton::NewtonPolygon, json: bool) {
    let rows: Vec<SegmentRow> = poly
        .segments
        .iter()
        .map(|s| SegmentRow {
            slope: frac(s.slope),
            length: s.length,
            zero_valuation: frac(s.zero_valuation()),
            count: if s.slope < Rational64::from_integer(0) { s.length } else { 0 },
            certified: s.certified,
        })
        .collect();
    let report = PolygonReport {
        t_adic_order: poly.t_adic_order,
        certified_through: poly.certified_through.map(frac),
        segments: rows,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return;
    }
    println!("t_adic_order: {}", report.t_adic_order);
    println!(
        "certified_through: {}",
        report.certified_through.as_deref().unwrap_or("none")
    );
    println!("{:<10}  {:>6}  {:>14}  {:>5}  certified?", "slope", "length", "zero-valuation", "count");
    for r in &report.segments {
        println!(
            "{:<10}  {:>6}  {:>14}  {:>5}  {}",
            r.slope,
            r.length,
            r.zero_valuation,
            r.count,
            if r.certified { "yes" } else { "no" }
        );
    }
}
