//! Named verification suites.
//!
//! Each suite is a pure function of a [`RunConfig`]: randomized cases are
//! drawn from a ChaCha stream seeded by the recorded seed, cases are sorted
//! by name, and the report records the configuration and the sign
//! constants of the Fourier-side actions. On the approximate backend every
//! series pipeline is replayed exactly and the two results are compared
//! modulo the tracked precision.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::newton::{self, NewtonPolygon};
use crate::padic::{factorial, rational_binom, PadicScalar, Rational};
use crate::reps::{self, Character, ModuleSide, PolyFunction, Side};
use crate::series::{self, Backend, TruncatedSeries};
use crate::uea::{self, Generator, PBWElement};

pub const SUITES: [&str; 12] = [
    "amice-ring",
    "lemma43",
    "newton-log",
    "lemma53",
    "thm54-congruence",
    "prop55",
    "casimir",
    "pbw-ad",
    "haar",
    "homdims",
    "intertwiner",
    "bruhat",
];

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub p: u64,
    pub backend: Backend,
    pub trunc: usize,
    pub seed: u64,
    /// Optional suite parameters.
    pub c: Option<Rational>,
    pub m: Option<i64>,
    pub chi: Option<Character>,
    pub side: Option<Side>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl RunConfig {
    pub fn new(p: u64, backend: Backend, trunc: usize, seed: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if trunc < 8 {
            return Err(Error::Domain(format!("truncation order must be at least 8, got {trunc}")));
        }
        if let Backend::Approx { precision } = backend {
            if precision < 4 {
                return Err(Error::Domain(format!(
                    "approximate precision must be at least 4, got {precision}"
                )));
            }
        }
        Ok(RunConfig {
            p,
            backend,
            trunc,
            seed,
            c: None,
            m: None,
            chi: None,
            side: None,
        })
    }

    pub fn exact(p: u64, trunc: usize) -> Result<Self> {
        Self::new(p, Backend::Exact, trunc, DEFAULT_SEED)
    }

    /// Same run with `N` and `M` doubled.
    pub fn doubled(&self) -> Self {
        let mut out = self.clone();
        out.trunc *= 2;
        if let Backend::Approx { precision } = self.backend {
            out.backend = Backend::Approx {
                precision: 2 * precision,
            };
        }
        out
    }

    fn is_approx(&self) -> bool {
        matches!(self.backend, Backend::Approx { .. })
    }

    fn precision_label(&self) -> String {
        match self.backend {
            Backend::Exact => "inf".into(),
            Backend::Approx { precision } => precision.to_string(),
        }
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        let idx = SUITES.iter().position(|s| *s == suite).unwrap_or(0) as u64;
        ChaCha8Rng::seed_from_u64(self.seed ^ (idx + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn scalar(&self, n: i64) -> PadicScalar {
        PadicScalar::from_int(self.p, n)
    }

    /// Brings an exact series into the configured backend.
    fn lift(&self, f: &TruncatedSeries) -> TruncatedSeries {
        match self.backend {
            Backend::Exact => f.clone(),
            Backend::Approx { precision } => f.to_approx(precision),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// `0` when every check passed, otherwise the first failing check.
    pub residual: String,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub p: u64,
    pub backend: String,
    pub precision: String,
    pub trunc: usize,
    pub seed: u64,
    pub dual_lie_sign: i64,
    pub dual_uplus_sign: i64,
    pub cases: Vec<CaseResult>,
    /// Outputs that must not change when `N` and `M` grow.
    pub certified: Vec<String>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite: {}", self.suite);
        let _ = writeln!(
            out,
            "config: p={} backend={} prec={} trunc={} seed={}",
            self.p, self.backend, self.precision, self.trunc, self.seed
        );
        let _ = writeln!(
            out,
            "signs: dual_lie={:+} dual_uplus={:+}",
            self.dual_lie_sign, self.dual_uplus_sign
        );
        for c in &self.cases {
            let _ = writeln!(
                out,
                "case {}: checked={} failed={} residual={} {}",
                c.name,
                c.checked,
                c.failed,
                c.residual,
                if c.passed() { "PASS" } else { "FAIL" }
            );
        }
        for line in &self.certified {
            let _ = writeln!(out, "certified: {line}");
        }
        for line in &self.notes {
            let _ = writeln!(out, "note: {line}");
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

struct Case {
    name: String,
    checked: usize,
    failed: usize,
    first: Option<String>,
}

impl Case {
    fn new(name: &str) -> Self {
        Case {
            name: name.into(),
            checked: 0,
            failed: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }
}

struct Report {
    cfg: RunConfig,
    suite: &'static str,
    cases: Vec<Case>,
    certified: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn new(suite: &'static str, cfg: &RunConfig) -> Self {
        Report {
            cfg: cfg.clone(),
            suite,
            cases: Vec::new(),
            certified: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, c: Case) {
        self.cases.push(c);
    }

    fn finish(self) -> SuiteReport {
        let mut cases: Vec<CaseResult> = self
            .cases
            .into_iter()
            .map(|c| CaseResult {
                name: c.name,
                checked: c.checked,
                failed: c.failed,
                residual: c.first.unwrap_or_else(|| "0".into()),
            })
            .collect();
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = cases.iter().all(CaseResult::passed);
        SuiteReport {
            suite: self.suite.into(),
            p: self.cfg.p,
            backend: self.cfg.backend.name().into(),
            precision: self.cfg.precision_label(),
            trunc: self.cfg.trunc,
            seed: self.cfg.seed,
            dual_lie_sign: reps::DUAL_LIE_SIGN,
            dual_uplus_sign: reps::DUAL_UPLUS_SIGN,
            cases,
            certified: self.certified,
            notes: self.notes,
            passed,
        }
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    match name {
        "amice-ring" => amice_ring(cfg),
        "lemma43" => dictionary_suite(cfg),
        "newton-log" => newton_log(cfg),
        "lemma53" => um_power_suite(cfg),
        "thm54-congruence" => congruence_suite(cfg),
        "prop55" => ode_suite(cfg),
        "casimir" => casimir_suite(cfg),
        "pbw-ad" => pbw_ad(cfg),
        "haar" => haar(cfg),
        "homdims" => homdims(cfg),
        "intertwiner" => intertwiner(cfg),
        "bruhat" => bruhat(cfg),
        _ => Err(Error::Parse(format!(
            "unknown suite `{name}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn qr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn random_ints(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Random exact polynomial of degree `<= deg`, zero-padded to order `trunc`.
fn random_exact(cfg: &RunConfig, rng: &mut ChaCha8Rng, deg: usize, trunc: usize) -> TruncatedSeries {
    let deg = deg.min(trunc);
    TruncatedSeries::from_ints(cfg.p, Backend::Exact, &random_ints(rng, deg + 1, 60), trunc)
        .expect("degree within truncation")
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    qr(rng.gen_range(-60..=60), rng.gen_range(1..=12))
}

fn exact_dirac(cfg: &RunConfig, a: i64, trunc: usize) -> Result<TruncatedSeries> {
    TruncatedSeries::dirac(cfg.p, Backend::Exact, &cfg.scalar(a), trunc)
}

/// Records agreement between an approximate result and its exact replay.
fn agreement(case: &mut Case, approx: &TruncatedSeries, exact: &TruncatedSeries, label: &str) {
    case.check(approx.contains_exact(exact), || {
        format!("{label}: approximate result does not contain the exact one")
    });
}

fn same(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    a.agrees_reliably(b)
}

/// Runs `pipeline` on the configured backend, and on the approximate
/// backend also on the exact inputs, recording the comparison in `prec`.
fn replay(
    cfg: &RunConfig,
    prec: &mut Case,
    label: &str,
    inputs: &[TruncatedSeries],
    pipeline: impl Fn(&[TruncatedSeries]) -> Result<TruncatedSeries>,
) -> Result<TruncatedSeries> {
    let lifted: Vec<TruncatedSeries> = inputs.iter().map(|f| cfg.lift(f)).collect();
    let out = pipeline(&lifted)?;
    if cfg.is_approx() {
        let exact = pipeline(inputs)?;
        agreement(prec, &out, &exact, label);
    }
    Ok(out)
}

fn push_precision_case(report: &mut Report, prec: Case) {
    if report.cfg.is_approx() {
        report.push(prec);
    }
}

fn falling(c: &Rational, m: usize) -> Rational {
    (0..m).fold(Rational::one(), |acc, i| acc * (c - q(i as i64)))
}

/// Stirling numbers of the second kind `S(k, n)` for `n, k <= max`.
fn stirling2(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for k in 1..=max {
        for n in 1..=k {
            s[k][n] = &s[k - 1][n - 1] + BigInt::from(n) * &s[k - 1][n];
        }
    }
    s
}

fn fmt_rat64(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn polygon_lines(poly: &NewtonPolygon) -> Vec<String> {
    poly.segments
        .iter()
        .filter(|s| s.certified)
        .map(|s| format!("slope={} length={}", fmt_rat64(s.slope), s.length))
        .collect()
}

// ---------------------------------------------------------------------------
// suites

fn amice_ring(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("amice-ring", cfg);
    let mut rng = cfg.rng("amice-ring");
    let n = cfg.trunc;
    let mut prec = Case::new("precision-agreement");

    let mut dirac = Case::new("dirac-additivity");
    for _ in 0..50 {
        let a = rng.gen_range(-1_000_000..=1_000_000i64);
        let b = rng.gen_range(-1_000_000..=1_000_000i64);
        let inputs = [exact_dirac(cfg, a, n)?, exact_dirac(cfg, b, n)?];
        let prod = replay(cfg, &mut prec, "dirac product", &inputs, |x| x[0].mul(&x[1]))?;
        let direct = TruncatedSeries::dirac(cfg.p, cfg.backend, &cfg.scalar(a + b), n)?;
        dirac.check(same(&prod, &direct), || format!("dirac({a}) dirac({b}) != dirac({})", a + b));
    }
    report.push(dirac);

    let mut ring = Case::new("ring-axioms");
    for _ in 0..20 {
        let f = cfg.lift(&random_exact(cfg, &mut rng, n, n));
        let g = cfg.lift(&random_exact(cfg, &mut rng, n, n));
        let h = cfg.lift(&random_exact(cfg, &mut rng, n, n));
        let one = TruncatedSeries::one(cfg.p, cfg.backend, n);
        ring.check(same(&f.mul(&g)?.mul(&h)?, &f.mul(&g.mul(&h)?)?), || "associativity".into());
        ring.check(same(&f.mul(&g)?, &g.mul(&f)?), || "commutativity".into());
        ring.check(same(&f.mul(&one)?, &f), || "unit".into());
        ring.check(
            same(&f.mul(&g.add(&h)?)?, &f.mul(&g)?.add(&f.mul(&h)?)?),
            || "distributivity".into(),
        );
    }
    report.push(ring);

    let mut action = Case::new("translate-action");
    for _ in 0..20 {
        let f = random_exact(cfg, &mut rng, n, n);
        let a = rng.gen_range(-1000..=1000i64);
        let b = rng.gen_range(-1000..=1000i64);
        let twice = replay(cfg, &mut prec, "translate", std::slice::from_ref(&f), |x| {
            x[0].translate(&cfg.scalar(b))?.translate(&cfg.scalar(a))
        })?;
        let once = cfg.lift(&f).translate(&cfg.scalar(a + b))?;
        action.check(same(&twice, &once), || format!("translate({a}) translate({b})"));
    }
    report.push(action);

    let mut gauss = Case::new("gauss-multiplicative");
    for _ in 0..20 {
        let f = random_exact(cfg, &mut rng, n / 2, n);
        let g = random_exact(cfg, &mut rng, n / 2, n);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let fg = f.mul(&g)?;
        for s in [Rational64::new(1, 2), Rational64::new(1, 3), Rational64::from_integer(2)] {
            let lhs = fg.gauss_norm(s)?;
            let rhs = f.gauss_norm(s)? + g.gauss_norm(s)?;
            gauss.check(lhs == rhs, || format!("|FG| != |F||G| at s={s}"));
        }
    }
    report.push(gauss);
    report.notes.push("Gauss norms are checked on exact polynomials".into());
    push_precision_case(&mut report, prec);
    Ok(report.finish())
}

fn dictionary_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("lemma43", cfg);
    let mut rng = cfg.rng("lemma43");
    let n = cfg.trunc;
    let kmax = 20.min(n - 1);
    let p = cfg.p;
    let mut prec = Case::new("precision-agreement");
    let mut translate = Case::new("transpose-translate");
    let mut delta = Case::new("transpose-delta-theta");
    let mut push = Case::new("transpose-pushforward");
    let mut lie = Case::new("transpose-lie-mult");
    let mut stirling = Case::new("moment-stirling-oracle");
    let mut dirac = Case::new("dirac-moments");
    let mut leibniz = Case::new("delta-log-leibniz");
    let s2 = stirling2(kmax);

    for _ in 0..20 {
        let fe = random_exact(cfg, &mut rng, n, n);
        let f = cfg.lift(&fe);
        let b = rng.gen_range(-100..=100i64);
        let bs = cfg.scalar(b);
        let moments = f.moments(kmax + 1)?;
        if cfg.is_approx() {
            let exact = fe.moments(kmax)?;
            for k in 0..=kmax {
                prec.check(moments[k].agrees_with(exact[k].as_exact().expect("exact")), || {
                    format!("moment {k}")
                });
            }
        }

        let t = replay(cfg, &mut prec, "translate", std::slice::from_ref(&fe), |x| x[0].translate(&bs))?;
        let d = f.delta_op()?;
        let pf_series = replay(cfg, &mut prec, "pushforward", std::slice::from_ref(&fe), |x| x[0].pushforward(&bs))?;
        let l = replay(cfg, &mut prec, "lie_mult", std::slice::from_ref(&fe), |x| Ok(x[0].lie_mult()))?;
        let (tm, dm, pm, lm) = (t.moments(kmax)?, d.moments(kmax)?, pf_series.moments(kmax)?, l.moments(kmax)?);
        for k in 0..=kmax {
            // f(a) -> f(a + b)
            let mut rhs = PadicScalar::zero(p);
            for j in 0..=k {
                let coeff = &PadicScalar::exact(p, rational_binom(&q(k as i64), j as u32))
                    * &bs.pow((k - j) as u32);
                rhs = &rhs + &(&coeff * &moments[j]);
            }
            translate.check(tm[k] == rhs, || format!("k={k}, b={b}"));
            // Theta: f -> a f
            delta.check(dm[k] == moments[k + 1], || format!("k={k}"));
            // m_b: f(a) -> f(ba)
            push.check(pm[k] == &bs.pow(k as u32) * &moments[k], || format!("k={k}, b={b}"));
            // Lie generator: f -> f'
            let want = if k == 0 {
                PadicScalar::zero(p)
            } else {
                &cfg.scalar(k as i64) * &moments[k - 1]
            };
            lie.check(lm[k] == want, || format!("k={k}"));
            // independent route: lambda(a^k) = sum_n c_n n! S(k, n)
            let mut via = PadicScalar::zero(p);
            for (m, s) in s2[k].iter().enumerate().take(k + 1) {
                let w = PadicScalar::exact(p, Rational::from_integer(s * factorial(m as u32)));
                via = &via + &(f.coeff(m) * &w);
            }
            stirling.check(via == moments[k], || format!("k={k}"));
        }
        let lhs = f.lie_mult().delta_op()?;
        let rhs = f.add(&f.delta_op()?.lie_mult())?;
        leibniz.check(same(&lhs, &rhs), || "Delta(log F) != F + log Delta F".into());
    }
    for _ in 0..20 {
        let a = rng.gen_range(-1000..=1000i64);
        let d = TruncatedSeries::dirac(p, cfg.backend, &cfg.scalar(a), n)?;
        let dm = d.moments(kmax)?;
        for k in 0..=kmax {
            dirac.check(dm[k] == cfg.scalar(a).pow(k as u32), || format!("a={a}, k={k}"));
        }
    }
    for c in [translate, delta, push, lie, stirling, dirac, leibniz] {
        report.push(c);
    }
    push_precision_case(&mut report, prec);
    report.notes.push(format!("moments checked for k <= {kmax}"));
    Ok(report.finish())
}

fn newton_log(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("newton-log", cfg);
    let p = cfg.p;
    let pi = p as i64;
    let n = (p * p * p) as usize;
    let log_at = |trunc: usize, backend: Backend| TruncatedSeries::log1p(p, backend, trunc);
    let poly = newton::polygon(&log_at(n, cfg.backend))?;

    let mut seg = Case::new("log-segments");
    let want = [
        (Rational64::new(-1, pi - 1), (pi - 1) as usize),
        (Rational64::new(-1, pi * pi - pi), (pi * pi - pi) as usize),
        (Rational64::new(-1, pi * pi * pi - pi * pi), (pi * pi * pi - pi * pi) as usize),
    ];
    let got: Vec<_> = poly.segments.iter().map(|s| (s.slope, s.length)).collect();
    seg.check(got == want, || format!("segments {got:?}"));
    let flags: Vec<bool> = poly.segments.iter().map(|s| s.certified).collect();
    seg.check(flags == [true, true, false], || format!("certified flags {flags:?}"));
    seg.check(poly.t_adic_order == 1, || "t-adic order".into());
    let lengths: usize = poly.segments.iter().map(|s| s.length).sum();
    seg.check(
        lengths + poly.t_adic_order == poly.vertices.last().map_or(0, |v| v.0),
        || "length bookkeeping".into(),
    );
    report.push(seg);

    // certification soundness: certified data survives N -> 2N (and M -> 2M)
    let mut sound = Case::new("certification-soundness");
    let doubled_backend = cfg.doubled().backend;
    let big = newton::polygon(&log_at(2 * n, doubled_backend))?;
    for s in poly.segments.iter().filter(|s| s.certified) {
        sound.check(
            big.segments
                .iter()
                .any(|t| t.certified && t.slope == s.slope && t.length == s.length),
            || format!("segment {} lost at 2N", fmt_rat64(s.slope)),
        );
    }
    let through = |x: &NewtonPolygon| x.certified_through.map(|r| -r);
    sound.check(
        through(&big) >= through(&poly),
        || "certified_through grew smaller region at 2N".into(),
    );
    report.push(sound);

    let mut examples = Case::new("zero-count-examples");
    let lin = TruncatedSeries::from_ints(p, cfg.backend, &[pi, 1], 8)?;
    let counts = newton::zero_counts(&lin)?;
    examples.check(
        counts.len() == 1 && counts[0].valuation == Rational64::one() && counts[0].certified,
        || "p + T".into(),
    );
    let cubic = TruncatedSeries::from_ints(p, cfg.backend, &[0, 0, -pi, 1], 10)?;
    let cp = newton::polygon(&cubic)?;
    let cc = newton::counts_of(&cp);
    examples.check(
        cp.t_adic_order == 2 && cc.len() == 1 && cc[0].valuation == Rational64::one(),
        || "T^2 (T - p)".into(),
    );
    let sq = TruncatedSeries::from_ints(p, cfg.backend, &[pi * pi, 1], 8)?;
    examples.check(newton::common_zero_free(&lin, &sq)?, || "p+T vs p^2+T".into());
    examples.check(!newton::common_zero_free(&lin, &lin)?, || "p+T vs itself".into());
    report.push(examples);

    if cfg.is_approx() {
        let mut prec = Case::new("precision-agreement");
        let exact = newton::polygon(&log_at(n, Backend::Exact))?;
        prec.check(polygon_lines(&exact) == polygon_lines(&poly), || {
            "certified segments differ from the exact backend".into()
        });
        report.push(prec);
    }
    report.certified = polygon_lines(&poly);
    report.notes.push(format!("log(1+T) truncated at N = p^3 = {n}"));
    Ok(report.finish())
}

fn um_power_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("lemma53", cfg);
    let mut rng = cfg.rng("lemma53");
    let p = cfg.p;
    let n = cfg.trunc;

    let mut rec = Case::new("c-recurrence");
    for _ in 0..20 {
        let c = random_rational(&mut rng);
        for m in 1..=12 {
            for i in 1..=m {
                let lhs = reps::c_coeff(i, m, &c)? * (&c - q(m as i64) - q(i as i64))
                    + reps::c_coeff(i - 1, m, &c)?;
                rec.check(lhs == reps::c_coeff(i, m + 1, &c)?, || format!("c={c}, i={i}, m={m}"));
            }
        }
    }
    report.push(rec);

    let mut vals = Case::new("c-values");
    for m in 0..=8 {
        let c = random_rational(&mut rng);
        vals.check(reps::c_coeff(m, m, &c)? == q(1), || format!("c_m^(m), m={m}"));
        vals.check(reps::c_coeff(0, m, &c)? == falling(&c, m), || format!("c_0^(m), m={m}"));
    }
    report.push(vals);

    // (um)^m = (-1)^m sum_i c_i Theta^(m+i) (up)^i on polynomials
    let mut opid = Case::new("um-power-operator-identity");
    let budget = 8 + 2 * 4;
    for c in [q(0), q(1), q(2), q(-3), qr(5, 2)] {
        for m in 1..=4usize {
            for k in 0..=8 {
                let f = PolyFunction::monomial(k, budget)?;
                let mut lhs = f.clone();
                for _ in 0..m {
                    lhs = reps::rho_uminus_c(&c, &lhs)?;
                }
                let mut rhs = PolyFunction::zero(budget);
                let mut up_i = f.clone();
                for i in 0..=m {
                    if i > 0 {
                        up_i = reps::rho_uplus(&up_i)?;
                    }
                    let mut t = up_i.clone();
                    for _ in 0..m + i {
                        t = t.theta()?;
                    }
                    rhs = rhs.add(&t.scale(&reps::c_coeff(i, m, &c)?))?;
                }
                if m % 2 == 1 {
                    rhs = rhs.scale(&q(-1));
                }
                opid.check(lhs == rhs, || format!("c={c}, m={m}, a^{k}"));
            }
        }
    }
    report.push(opid);

    let mut aux = Case::new("up-theta-identity");
    for m in 1..=6usize {
        for k in 0..=8 {
            let f = PolyFunction::monomial(k, 20)?;
            let theta = |g: &PolyFunction, e: usize| -> Result<PolyFunction> {
                (0..e).try_fold(g.clone(), |acc, _| acc.theta())
            };
            let lhs = reps::rho_uplus(&theta(&f, m)?)?;
            let rhs = theta(&f, m - 1)?
                .scale(&q(-(m as i64)))
                .add(&theta(&reps::rho_uplus(&f)?, m)?)?;
            aux.check(lhs == rhs, || format!("m={m}, a^{k}"));
        }
    }
    report.push(aux);

    // transposes: <x.F, a^k> = DUAL_LIE_SIGN <F, rho(x) a^k>, <g.F, f> = <F, g^-1 f>
    let kmax = 10.min(n.saturating_sub(3));
    let mut lie_t = Case::new("transpose-lie-generators");
    let mut diag_t = Case::new("transpose-diag");
    let mut trans_t = Case::new("transpose-translation");
    let mut prec = Case::new("precision-agreement");
    let units: Vec<i64> = [-1, 1 + p as i64, 2 * p as i64 + 1, -(p as i64) - 1].to_vec();
    for _ in 0..6 {
        let fe = random_exact(cfg, &mut rng, n, n);
        let f = cfg.lift(&fe);
        let c = rng.gen_range(-3..=3i64);
        let m1 = rng.gen_range(-3..=3i64);
        let chi = Character::new(m1, m1 + c);
        let fm = f.moments(kmax + 2)?;
        for side in [Side::Minus, Side::Plus] {
            for g in Generator::ALL {
                let dual = replay(cfg, &mut prec, "dual lie", std::slice::from_ref(&fe), |x| {
                    reps::dual_lie(side, chi, g, &x[0])
                })?;
                let dm = dual.moments(kmax)?;
                for k in 0..=kmax {
                    let fk = PolyFunction::monomial(k, kmax + 2)?;
                    let rhs = &reps::pair_moments(p, &fm, &reps::rho(side, chi, g, &fk)?)?
                        * &cfg.scalar(reps::DUAL_LIE_SIGN);
                    lie_t.check(dm[k] == rhs, || {
                        format!("{} side, {}, k={k}, {chi}", side.name(), g.name())
                    });
                }
            }
            for &b in &units {
                let bs = cfg.scalar(b);
                let dual = replay(cfg, &mut prec, "dual diag", std::slice::from_ref(&fe), |x| {
                    reps::dual_diag(side, chi, &bs, &x[0])
                })?;
                let dm = dual.moments(kmax)?;
                for k in 0..=kmax {
                    let fk = PolyFunction::monomial(k, kmax + 2)?;
                    let g_inv = reps::rho_diag(p, side, chi, &qr(1, b), &fk)?;
                    diag_t.check(dm[k] == reps::pair_moments(p, &fm, &g_inv)?, || {
                        format!("{} side, b={b}, k={k}", side.name())
                    });
                }
            }
        }
        let b = rng.gen_range(-50..=50i64);
        let dm = reps::dual_translation(&cfg.scalar(b), &f)?.moments(kmax)?;
        for k in 0..=kmax {
            let fk = PolyFunction::monomial(k, kmax + 2)?;
            let g_inv = reps::rho_translation(p, &q(-b), &fk)?;
            trans_t.check(dm[k] == reps::pair_moments(p, &fm, &g_inv)?, || format!("b={b}, k={k}"));
        }
    }
    report.push(lie_t);
    report.push(diag_t);
    report.push(trans_t);

    let mut iter = Case::new("um-power-vs-iteration");
    for _ in 0..4 {
        let f = cfg.lift(&random_exact(cfg, &mut rng, n, n));
        let chi = Character::new(0, rng.gen_range(-3..=4));
        for m in 1..=4usize.min(n / 2 - 1) {
            let closed = reps::dual_uminus_power(chi, m, &f)?;
            let mut it = f.clone();
            for _ in 0..m {
                it = reps::dual_lie(Side::Minus, chi, Generator::Um, &it)?;
            }
            iter.check(same(&closed, &it), || format!("m={m}, {chi}"));
        }
    }
    report.push(iter);

    let mut ex = Case::new("um-examples");
    let chi = Character::new(0, 3);
    let one = TruncatedSeries::one(p, cfg.backend, n);
    ex.check(reps::dual_uminus_power(chi, 1, &one)?.vanishes_reliably(), || "F = 1".into());
    for a in [2i64, -3, 7] {
        let d = TruncatedSeries::dirac(p, cfg.backend, &cfg.scalar(a), n)?;
        let want = d
            .scale(&cfg.scalar(chi.c() * a))?
            .sub(&d.lie_mult().scale(&cfg.scalar(a * a))?)?;
        ex.check(same(&reps::dual_uminus_power(chi, 1, &d)?, &want), || format!("dirac({a})"));
    }
    let up2 = reps::dual_uplus(&reps::dual_uplus(&one));
    ex.check(up2.t_adic_order().is_none_or(|o| o >= 2), || "uplus^2 order".into());
    report.push(ex);
    push_precision_case(&mut report, prec);
    Ok(report.finish())
}

fn congruence_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("thm54-congruence", cfg);
    let mut rng = cfg.rng("thm54-congruence");
    let p = cfg.p;
    let n = cfg.trunc;
    let m_max = 4usize.min((n - 2) / 2);
    let mut div = Case::new("divisible-by-log");
    let mut cof = Case::new("explicit-cofactor");
    let mut nonvac = Case::new("um-power-alone-not-divisible");
    let mut prec = Case::new("precision-agreement");
    let log = TruncatedSeries::log1p(p, cfg.backend, n);
    let inputs = [
        ("1", TruncatedSeries::one(p, Backend::Exact, n)),
        ("dirac(2)", exact_dirac(cfg, 2, n)?),
        ("random", random_exact(cfg, &mut rng, 6, n)),
    ];
    for c in [2i64, 3] {
        let chi = Character::new(0, c);
        for m in 1..=m_max {
            let lead = PadicScalar::exact(p, falling(&q(c), m));
            for (name, fe) in &inputs {
                let f = cfg.lift(fe);
                let d = replay(cfg, &mut prec, "congruence difference", std::slice::from_ref(&fe), |x| {
                    reps::dual_uminus_power(chi, m, &x[0])?.sub(&x[0].delta_pow(m)?.scale(&lead)?)
                })?;
                let quotient = d.t_adic_divide(&log);
                div.check(quotient.is_ok(), || format!("c={c}, m={m}, F={name}"));
                let Ok(quotient) = quotient else { continue };
                let mut expected = TruncatedSeries::zero(p, cfg.backend, n);
                let mut delta = f.delta_pow(m)?;
                for i in 1..=m {
                    delta = delta.delta_op()?;
                    let mut term = delta.clone();
                    for _ in 1..i {
                        term = term.lie_mult();
                    }
                    let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                    let ci = PadicScalar::exact(p, sign * reps::c_coeff(i, m, &q(c))?);
                    expected = expected.add(&term.scale(&ci)?)?;
                }
                cof.check(same(&quotient, &expected), || format!("c={c}, m={m}, F={name}"));
                let whole = reps::dual_uminus_power(chi, m, &f)?;
                if !falling(&q(c), m).is_zero() && !f.delta_pow(m)?.coeff(0).is_zero() {
                    nonvac.check(whole.t_adic_divide(&log).is_err(), || {
                        format!("c={c}, m={m}, F={name} divisible without subtraction")
                    });
                }
            }
        }
    }
    report.push(div);
    report.push(cof);
    report.push(nonvac);
    push_precision_case(&mut report, prec);
    report.notes.push(format!(
        "congruence of the um-power modulo log(1+T), m <= {m_max}"
    ));
    Ok(report.finish())
}

fn ode_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("prop55", cfg);
    let mut rng = cfg.rng("prop55");
    let p = cfg.p;
    let n = cfg.trunc;
    let mut prec = Case::new("precision-agreement");

    let mut logs = Case::new("ode-log-powers");
    let mut resid = Case::new("ode-residual");
    let log_exact = TruncatedSeries::log1p(p, Backend::Exact, n);
    for c in 0..=3i64 {
        let sol = reps::solve_ode(p, &q(c), n);
        let want = log_exact.pow(c as u32)?;
        logs.check(sol.solvable && sol.series == want, || format!("c={c}"));
        let lifted = cfg.lift(&sol.series);
        let dst = rng.gen_range(-4..=4i64);
        let r = replay(cfg, &mut prec, "ode residual", std::slice::from_ref(&sol.series), |x| {
            reps::ode_residual(&q(dst + 2 * c), &q(dst), &x[0])
        })?;
        resid.check(r.vanishes_reliably(), || format!("c={c}"));
        if c != 1 {
            let wrong = reps::ode_residual(&q(dst + 2), &q(dst), &lifted)?;
            resid.check(!wrong.vanishes_reliably(), || format!("log^{c} with gap 2 should not solve"));
        }
    }
    report.push(logs);
    report.push(resid);

    let mut none = Case::new("ode-no-solution");
    for c in [qr(1, 2), q(-1), qr(7, 3)] {
        let sol = reps::solve_ode(p, &c, n);
        none.check(!sol.solvable && sol.series.is_zero(), || format!("c={c}"));
    }
    report.push(none);

    let mut bundle = Case::new("condition-bundle");
    let mut mrel = Case::new("hom-implies-m");
    for i in 0..100 {
        let chi = Character::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let chi_p = if i % 2 == 0 {
            Character::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5))
        } else {
            let t = chi.eps_twist(-rng.gen_range(0..=5));
            // occasionally break one condition
            if i % 6 == 1 {
                Character::new(t.m1 + rng.gen_range(-1..=1), t.m2)
            } else {
                t
            }
        };
        let b = reps::condition_bundle(chi_p, chi);
        bundle.check((b.central && b.even_gap && b.torus) == b.twist.is_some(), || {
            format!("{chi_p} vs {chi}: {b:?}")
        });
        if chi_p != chi && reps::hom_dim(ModuleSide::Minus, ModuleSide::Minus, chi_p, chi)? == 1 {
            mrel.check((chi.c() - chi_p.c()) / 2 == chi.c() + 1, || format!("{chi_p} vs {chi}"));
        }
    }
    // make sure the implication is exercised
    for c in 0..=4 {
        let chi = Character::new(1, 1 + c);
        let chi_p = chi.eps_twist(-1 - c);
        mrel.check(
            reps::hom_dim(ModuleSide::Minus, ModuleSide::Minus, chi_p, chi)? == 1
                && (chi.c() - chi_p.c()) / 2 == chi.c() + 1,
            || format!("{chi_p} vs {chi}"),
        );
    }
    report.push(bundle);
    report.push(mrel);

    // the unipotent step: c Delta F = log Delta^2 F for F = log^m iff c = m - 1
    let mut unip = Case::new("uminus-annihilates-log-power");
    let log = TruncatedSeries::log1p(p, cfg.backend, n);
    for m in 1..=4u32.min(n as u32 / 2 - 1) {
        let f = log.pow(m)?;
        for c in -1..=5i64 {
            let r = reps::dual_uminus_power(Character::new(0, c), 1, &f)?;
            let vanishes = r.vanishes_reliably();
            unip.check(vanishes == (c == m as i64 - 1), || format!("m={m}, c={c}"));
        }
    }
    report.push(unip);

    // (d/da)^m (g f)(0) = sum_i (-1)^(m+i) c_i^(m) b^(m-i) f^(i)(0)
    let mut deriv = Case::new("derivative-formula");
    for _ in 0..20 {
        let c = rng.gen_range(-3..=3i64);
        let chi = Character::new(0, c);
        let b = q(p as i64 * rng.gen_range(-5..=5i64));
        let coeffs = random_ints(&mut rng, 7, 20);
        let f = PolyFunction::from_ints(&coeffs, 12)?;
        let gf = reps::rho_upper_unip(p, chi, &b, &f)?;
        for m in 0..=4usize {
            let mut want = Rational::zero();
            let mut fi = f.clone();
            for i in 0..=m {
                if i > 0 {
                    fi = fi.deriv();
                }
                let sign = if (m + i) % 2 == 0 { q(1) } else { q(-1) };
                let bpow = num_traits::pow(b.clone(), m - i);
                want += sign * reps::c_coeff(i, m, &q(c))? * bpow * fi.coeff(0);
            }
            deriv.check(gf.derivative_at_zero(m) == want, || format!("c={c}, b={b}, m={m}"));
            if c == m as i64 - 1 {
                deriv.check(gf.derivative_at_zero(m) == f.derivative_at_zero(m), || {
                    format!("invariance at c = m - 1, m={m}")
                });
            }
        }
    }
    report.push(deriv);

    let mut eigen = Case::new("diag-eigenvectors");
    for k in 0..=3u32 {
        let f = log.pow(k)?;
        for b in [-1i64, 1 + p as i64] {
            let chi = Character::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            let bs = cfg.scalar(b);
            let lhs = reps::dual_diag(Side::Minus, chi, &bs, &f)?;
            let rhs = f.scale(&(&bs.powi(-chi.m2)? * &bs.pow(k)))?;
            eigen.check(same(&lhs, &rhs), || format!("log^{k}, b={b}"));
        }
    }
    report.push(eigen);

    if let Some(c) = &cfg.c {
        let mut req = Case::new("requested-c");
        let sol = reps::solve_ode(p, c, n);
        let shown: Vec<String> = sol.series.coeffs().iter().take(8).map(|x| x.render()).collect();
        report
            .notes
            .push(format!("c={c}: coefficients [{}, ...]", shown.join(", ")));
        if c.is_integer() && *c >= Rational::zero() {
            let e = c.to_integer().to_string().parse::<u32>().unwrap_or(0);
            req.check(sol.series == log_exact.pow(e)?, || format!("log^{c}"));
        } else {
            req.check(!sol.solvable && sol.series.is_zero(), || format!("c={c} should have no solution"));
        }
        report.push(req);
    }
    push_precision_case(&mut report, prec);
    Ok(report.finish())
}

fn casimir_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("casimir", cfg);
    let mut rng = cfg.rng("casimir");
    let cas = uea::casimir();
    let mut fun = Case::new("function-side-scalar");
    for c in -3..=3i64 {
        for m1 in [0i64, 2] {
            let chi = Character::new(m1, m1 + c);
            for side in [Side::Minus, Side::Plus] {
                let s = reps::casimir_scalar(chi, side);
                for k in 0..=10 {
                    let f = PolyFunction::monomial(k, 12)?;
                    let g = reps::rho_pbw(side, chi, &cas, &f)?;
                    fun.check(g == f.scale(&s), || format!("{} chart, {chi}, a^{k}", side.name()));
                }
            }
        }
    }
    report.push(fun);

    let mut table = Case::new("scalar-table");
    for c in -5..=5i64 {
        let chi = Character::new(0, c);
        let half = qr(c, 2);
        table.check(reps::casimir_scalar(chi, Side::Plus) == (&half - q(1)) * q(c), || format!("plus, c={c}"));
        table.check(reps::casimir_scalar(chi, Side::Minus) == (&half + q(1)) * q(c), || format!("minus, c={c}"));
        report.certified.push(format!(
            "c={c} plus={} minus={}",
            reps::casimir_scalar(chi, Side::Plus),
            reps::casimir_scalar(chi, Side::Minus)
        ));
    }
    table.check(reps::casimir_scalar(Character::new(0, 2), Side::Plus) == q(0), || "c=2 plus".into());
    table.check(reps::casimir_scalar(Character::new(0, 2), Side::Minus) == q(4), || "c=2 minus".into());
    report.push(table);

    let mut fourier = Case::new("fourier-side-scalar");
    let mut prec = Case::new("precision-agreement");
    for _ in 0..6 {
        let fe = random_exact(cfg, &mut rng, cfg.trunc, cfg.trunc);
        let chi = Character::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        for side in [Side::Minus, Side::Plus] {
            let out = replay(cfg, &mut prec, "casimir", std::slice::from_ref(&fe), |x| {
                reps::dual_pbw(side, chi, &cas, &x[0])
            })?;
            let s = PadicScalar::exact(cfg.p, reps::casimir_scalar(chi, side));
            let want = cfg.lift(&fe).scale(&s)?;
            fourier.check(same(&out, &want), || format!("{} side, {chi}", side.name()));
        }
    }
    report.push(fourier);

    let mut central = Case::new("centrality");
    for g in Generator::ALL {
        central.check(cas.commutator(&PBWElement::generator(g)).is_zero(), || g.name().into());
    }
    report.push(central);
    push_precision_case(&mut report, prec);
    Ok(report.finish())
}

fn pbw_ad(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("pbw-ad", cfg);
    let mut rng = cfg.rng("pbw-ad");
    let gens = Generator::ALL;

    let mut sc = Case::new("structure-constants");
    for x in gens {
        for y in gens {
            let (a, b) = (x.matrix(), y.matrix());
            let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
                let mut r = [[0i64; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                    }
                }
                r
            };
            let (ab, ba) = (mul(a, b), mul(b, a));
            let d = |i: usize, j: usize| ab[i][j] - ba[i][j];
            // beta um + gamma up + (alpha - delta)/2 h + (alpha + delta)/2 e
            let want = PBWElement::um()
                .scale(&q(d(0, 1)))
                .add(&PBWElement::up().scale(&q(d(1, 0))))
                .add(&PBWElement::h().scale(&qr(d(0, 0) - d(1, 1), 2)))
                .add(&PBWElement::e().scale(&qr(d(0, 0) + d(1, 1), 2)));
            let got = PBWElement::generator(x).commutator(&PBWElement::generator(y));
            sc.check(got == want, || format!("[{}, {}] = {got}", x.name(), y.name()));
        }
    }
    report.push(sc);

    let mut jac = Case::new("jacobi");
    for x in gens {
        for y in gens {
            for z in gens {
                let (x, y, z) = (PBWElement::generator(x), PBWElement::generator(y), PBWElement::generator(z));
                let s = x
                    .commutator(&y.commutator(&z))
                    .add(&y.commutator(&z.commutator(&x)))
                    .add(&z.commutator(&x.commutator(&y)));
                jac.check(s.is_zero(), || format!("{x}, {y}, {z}"));
            }
        }
    }
    report.push(jac);

    let mut ad = Case::new("ad-identity");
    let mut ms: Vec<i64> = vec![0, -1, -2, -3];
    if let Some(m) = cfg.m {
        if m > 0 {
            return Err(Error::Domain(format!("ad identity needs m <= 0, got {m}")));
        }
        if !ms.contains(&m) {
            ms.push(m);
        }
    }
    for &m in &ms {
        let r = uea::ad_identity_check(m)?;
        ad.check(r.is_zero(), || format!("m={m}: residual {r}"));
        report.certified.push(format!("ad residual m={m}: {r}"));
    }
    report.push(ad);

    let mut closed = Case::new("ad-closed-form");
    for k in 1..=6u32 {
        let lhs = PBWElement::up().commutator(&PBWElement::um().pow(k));
        let rhs = PBWElement::um()
            .pow(k - 1)
            .mul(&PBWElement::h().add(&PBWElement::scalar(q(k as i64 - 1))))
            .scale(&q(-(k as i64)));
        closed.check(lhs == rhs, || format!("k={k}"));
    }
    report.push(closed);

    let mut central = Case::new("center-on-monomials");
    let cas = uea::casimir();
    for mono in uea::monomials_up_to(4) {
        let x = PBWElement::monomial(mono, Rational::one());
        central.check(cas.commutator(&x).is_zero(), || format!("casimir vs {x}"));
        central.check(PBWElement::e().commutator(&x).is_zero(), || format!("e vs {x}"));
    }
    report.push(central);

    let mut fun = Case::new("function-side-brackets");
    for side in [Side::Minus, Side::Plus] {
        let chi = Character::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        for x in gens {
            for y in gens {
                let bracket = PBWElement::generator(x).commutator(&PBWElement::generator(y));
                for k in 0..=10 {
                    let f = PolyFunction::monomial(k, 12)?;
                    let xy = reps::rho(side, chi, x, &reps::rho(side, chi, y, &f)?)?;
                    let yx = reps::rho(side, chi, y, &reps::rho(side, chi, x, &f)?)?;
                    let want = reps::rho_pbw(side, chi, &bracket, &f)?;
                    fun.check(xy.sub(&yx)? == want, || {
                        format!("{} chart [{}, {}] on a^{k}", side.name(), x.name(), y.name())
                    });
                }
            }
        }
    }
    report.push(fun);

    let mut four = Case::new("fourier-side-brackets");
    for side in [Side::Minus, Side::Plus] {
        let chi = Character::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        let f = cfg.lift(&random_exact(cfg, &mut rng, cfg.trunc, cfg.trunc));
        for x in gens {
            for y in gens {
                let bracket = PBWElement::generator(x).commutator(&PBWElement::generator(y));
                let xy = reps::dual_lie(side, chi, x, &reps::dual_lie(side, chi, y, &f)?)?;
                let yx = reps::dual_lie(side, chi, y, &reps::dual_lie(side, chi, x, &f)?)?;
                let want = reps::dual_pbw(side, chi, &bracket, &f)?;
                four.check(same(&xy.sub(&yx)?, &want), || {
                    format!("{} side [{}, {}]", side.name(), x.name(), y.name())
                });
            }
        }
    }
    report.push(four);

    let mut straight = Case::new("straightening-in-representation");
    let chi = Character::new(1, 3);
    let word = PBWElement::um().mul(&PBWElement::um()).mul(&PBWElement::up());
    for k in 0..=8 {
        let f = PolyFunction::monomial(k, 12)?;
        let direct = reps::rho_uminus(chi, &reps::rho_uminus(chi, &reps::rho_uplus(&f)?)?)?;
        straight.check(reps::rho_pbw(Side::Minus, chi, &word, &f)? == direct, || format!("a^{k}"));
    }
    report.push(straight);

    let mut anti = Case::new("antipode");
    let monos = uea::monomials_up_to(2);
    for _ in 0..20 {
        let a = PBWElement::monomial(monos[rng.gen_range(0..monos.len())], q(rng.gen_range(1..=5)));
        let b = PBWElement::monomial(monos[rng.gen_range(0..monos.len())], q(rng.gen_range(1..=5)));
        anti.check(a.mul(&b).antipode() == b.antipode().mul(&a.antipode()), || format!("{a} * {b}"));
        anti.check(a.antipode().antipode() == a, || format!("{a}"));
    }
    report.push(anti);

    let mut rt = Case::new("text-round-trip");
    for x in [cas.clone(), uea::ad_identity_check(-2)?, PBWElement::um().pow(3).mul(&PBWElement::up())] {
        rt.check(PBWElement::parse(&x.render())? == x, || x.render());
    }
    report.push(rt);
    report.notes.push(format!("casimir normal form: {cas}"));
    Ok(report.finish())
}

fn haar(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("haar", cfg);
    let n = cfg.trunc;
    let mut k = Case::new("translation-kernel");
    let dim = series::translation_kernel_dim(cfg.p, cfg.backend, &cfg.scalar(1), n)?;
    k.check(dim == 0, || format!("kernel dimension {dim}"));
    report.push(k);
    if cfg.is_approx() {
        let mut prec = Case::new("precision-agreement");
        let exact = series::translation_kernel_dim(cfg.p, Backend::Exact, &cfg.scalar(1), n)?;
        prec.check(exact == dim, || format!("exact kernel dimension {exact}"));
        report.push(prec);
    }
    report.certified.push(format!("kernel of translate(1) - id: dim {dim}"));
    report
        .notes
        .push("images computed at order N+1, so no coefficient is lost to truncation".into());
    Ok(report.finish())
}

fn homdims(cfg: &RunConfig) -> Result<SuiteReport> {
    use ModuleSide::*;
    let mut report = Report::new("homdims", cfg);
    let range = -5..=5i64;
    let chars: Vec<Character> = range
        .clone()
        .flat_map(|a| range.clone().map(move |b| Character::new(a, b)))
        .collect();
    let mut mm = Case::new("minus-minus");
    let mut pp = Case::new("plus-plus");
    let mut mixed = Case::new("mixed-vanish");
    let mut full = Case::new("full-full");
    let mut diag = Case::new("diagonal-rejected");
    let mut mrel = Case::new("hom-implies-m");
    let mut ones = [0usize; 3];
    for &chi in &chars {
        diag.check(hom_err(Minus, Minus, chi) && hom_err(Plus, Plus, chi) && hom_err(Full, Full, chi), || {
            format!("{chi} vs itself accepted")
        });
        for &chi_p in &chars {
            mixed.check(
                reps::hom_dim(Plus, Minus, chi_p, chi)? == 0 && reps::hom_dim(Minus, Plus, chi_p, chi)? == 0,
                || format!("{chi_p} vs {chi}"),
            );
            if chi_p == chi {
                continue;
            }
            // minus/minus independently: chi' = eps^(-m) chi with c = m - 1
            let b = reps::condition_bundle(chi_p, chi);
            let oracle = b.twist.is_some_and(|m| chi.c() == m - 1);
            let got = reps::hom_dim(Minus, Minus, chi_p, chi)?;
            mm.check(got == u8::from(oracle), || format!("{chi_p} vs {chi}"));
            if got == 1 {
                ones[0] += 1;
                mrel.check((chi.c() - chi_p.c()) / 2 == chi.c() + 1, || format!("{chi_p} vs {chi}"));
            }
            // plus/plus via the Weyl symmetry
            let sym = reps::hom_dim(Minus, Minus, chi_p.weyl_twist(), chi.weyl_twist())?;
            let pgot = reps::hom_dim(Plus, Plus, chi_p, chi)?;
            pp.check(pgot == sym, || format!("{chi_p} vs {chi}"));
            ones[1] += pgot as usize;
            let fgot = reps::hom_dim(Full, Full, chi_p, chi)?;
            full.check(fgot == pgot, || format!("{chi_p} vs {chi}"));
            ones[2] += fgot as usize;
        }
    }
    for c in [mm, pp, mixed, full, diag, mrel] {
        report.push(c);
    }

    let mut wit = Case::new("ode-witness");
    let log = TruncatedSeries::log1p(cfg.p, Backend::Exact, cfg.trunc);
    for c in 0..=5i64 {
        let m = c + 1;
        if 2 * m as usize + 2 > cfg.trunc {
            break;
        }
        let sol = reps::solve_ode(cfg.p, &q(m), cfg.trunc);
        wit.check(sol.solvable && sol.series == log.pow(m as u32)?, || format!("m={m}"));
        let ann = reps::dual_uminus_power(Character::new(0, c), 1, &sol.series)?;
        wit.check(ann.vanishes_reliably(), || format!("um does not annihilate log^{m} at c={c}"));
    }
    report.push(wit);
    report.certified.push(format!(
        "grid |m1|,|m2| <= 5: minus/minus={} plus/plus={} full/full={} nonzero",
        ones[0], ones[1], ones[2]
    ));
    Ok(report.finish())
}

fn hom_err(a: ModuleSide, b: ModuleSide, chi: Character) -> bool {
    reps::hom_dim(a, b, chi, chi).is_err()
}

fn intertwiner(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("intertwiner", cfg);
    let mut chars: Vec<Character> = Vec::new();
    for c in [0i64, -1, -2] {
        for m1 in [0i64, 3] {
            chars.push(Character::new(m1, m1 + c));
        }
    }
    if let Some(c) = &cfg.c {
        if !c.is_integer() {
            return Err(Error::Domain(format!("intertwiner needs an integer c, got {c}")));
        }
        let c: i64 = c.to_integer().to_string().parse().map_err(|_| Error::Domain("c too large".into()))?;
        chars.push(Character::new(0, c));
    }
    if let Some(chi) = cfg.chi {
        chars.push(chi);
    }
    let mut defects = Case::new("equivariance-defects");
    let mut cls = Case::new("matches-classification");
    for chi in chars {
        let r = reps::intertwiner_residuals(cfg.p, chi, 10)?;
        for (side, label, ok) in &r.defects {
            defects.check(*ok, || format!("{chi}: {} chart, {label}", side.name()));
        }
        cls.check(
            reps::hom_dim(ModuleSide::Full, ModuleSide::Full, r.target, chi)? == 1,
            || format!("{chi} -> {}", r.target),
        );
        report.certified.push(format!(
            "{chi} -> {}: (-d/da)^{} defects {}",
            r.target,
            r.power,
            if r.all_vanish() { "0" } else { "nonzero" }
        ));
    }
    report.push(defects);
    report.push(cls);
    let mut rej = Case::new("rejects-positive-c");
    rej.check(reps::intertwiner_residuals(cfg.p, Character::new(0, 1), 10).is_err(), || {
        "c = 1 accepted".into()
    });
    report.push(rej);
    report.certified.sort();
    report.certified.dedup();
    Ok(report.finish())
}

fn bruhat(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut report = Report::new("bruhat", cfg);
    let mut rng = cfg.rng("bruhat");
    let p = cfg.p;
    let n = cfg.trunc;
    let units = [cfg.scalar(-1), cfg.scalar(1 + p as i64)];
    let mut zero = Case::new("zero-stays-zero");
    let mut cas = Case::new("casimir-diagonal");
    let mut weyl = Case::new("weyl-twist-c");
    let mut rt = Case::new("text-round-trip");
    let mut br = Case::new("componentwise-brackets");
    let mut group = Case::new("diag-group-law");
    let mut prec = Case::new("precision-agreement");
    for _ in 0..8 {
        let chi = cfg.chi.unwrap_or_else(|| Character::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5)));
        weyl.check(chi.weyl_twist().c() == chi.m1 - chi.m2, || format!("{chi}"));
        let z = reps::bruhat_split(
            TruncatedSeries::zero(p, cfg.backend, n),
            TruncatedSeries::zero(p, cfg.backend, n),
            chi,
        );
        for g in Generator::ALL {
            zero.check(z.act_lie(g)?.is_zero(), || g.name().into());
        }
        for b in &units {
            zero.check(z.act_diag(b)?.is_zero(), || format!("diag {b}"));
        }
        zero.check(z.act_casimir()?.is_zero(), || "casimir".into());

        let pe = random_exact(cfg, &mut rng, n, n);
        let me = random_exact(cfg, &mut rng, n, n);
        let e = reps::bruhat_split(cfg.lift(&pe), cfg.lift(&me), chi);
        let ce = e.act_casimir()?;
        let sp = reps::casimir_scalar(chi, Side::Plus);
        let sm = reps::casimir_scalar(chi.weyl_twist(), Side::Minus);
        cas.check(sp == sm, || format!("{chi}: {sp} vs {sm}"));
        cas.check(same(&ce.plus, &e.plus.scale(&PadicScalar::exact(p, sp.clone()))?), || format!("{chi} plus"));
        cas.check(same(&ce.minus, &e.minus.scale(&PadicScalar::exact(p, sm.clone()))?), || format!("{chi} minus"));
        if cfg.is_approx() {
            let ex = reps::bruhat_split(pe.clone(), me.clone(), chi).act_casimir()?;
            agreement(&mut prec, &ce.plus, &ex.plus, "casimir plus");
            agreement(&mut prec, &ce.minus, &ex.minus, "casimir minus");
        }

        let back = reps::BruhatElement::from_text(&e.to_text())?;
        rt.check(back.to_text() == e.to_text(), || format!("{chi}"));

        for x in Generator::ALL {
            for y in Generator::ALL {
                let bracket = PBWElement::generator(x).commutator(&PBWElement::generator(y));
                let xy = e.act_lie(y)?.act_lie(x)?;
                let yx = e.act_lie(x)?.act_lie(y)?;
                let want = e.act_pbw(&bracket)?;
                br.check(
                    same(&xy.plus.sub(&yx.plus)?, &want.plus) && same(&xy.minus.sub(&yx.minus)?, &want.minus),
                    || format!("{chi} [{}, {}]", x.name(), y.name()),
                );
            }
        }
        let ab = &units[0] * &units[1];
        let lhs = e.act_diag(&units[1])?.act_diag(&units[0])?;
        let rhs = e.act_diag(&ab)?;
        group.check(same(&lhs.plus, &rhs.plus) && same(&lhs.minus, &rhs.minus), || format!("{chi}"));
    }
    for c in [zero, cas, weyl, rt, br, group] {
        report.push(c);
    }
    push_precision_case(&mut report, prec);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::exact(4, 16).is_err());
        assert!(RunConfig::exact(5, 7).is_err());
        assert!(RunConfig::new(5, Backend::Approx { precision: 3 }, 16, 1).is_err());
        assert!(RunConfig::new(5, Backend::Approx { precision: 4 }, 16, 1).is_ok());
    }

    #[test]
    fn unknown_suite() {
        let cfg = RunConfig::exact(5, 8).unwrap();
        assert!(matches!(run_suite("nope", &cfg), Err(Error::Parse(_))));
    }

    #[test]
    fn stirling_table() {
        let s = stirling2(5);
        assert_eq!(s[5][2], BigInt::from(15));
        assert_eq!(s[4][4], BigInt::from(1));
    }

    #[test]
    fn all_suites_pass_exact() {
        for p in [2u64, 3, 5] {
            let cfg = RunConfig::exact(p, 16).unwrap();
            for name in SUITES {
                let r = run_suite(name, &cfg).unwrap();
                assert!(r.passed, "{}", r.render_text());
            }
        }
    }

    #[test]
    fn all_suites_pass_approx() {
        let cfg = RunConfig::new(3, Backend::Approx { precision: 12 }, 16, DEFAULT_SEED).unwrap();
        for name in SUITES {
            let r = run_suite(name, &cfg).unwrap();
            assert!(r.passed, "{}", r.render_text());
        }
    }
}
