//! Principal-series actions of `gl_2` and the Iwahori subgroup.
//!
//! Two pictures of the same modules:
//!
//! * **function side**: polynomials `f(a)` in the chart variable, acted on by
//!   the operators `rho` below (minus chart: `up = -d/da`; plus chart:
//!   `um = -d/da`);
//! * **Fourier side**: distributions, i.e. [`TruncatedSeries`], acted on
//!   contragrediently. A group element acts by `lambda -> lambda o g^-1` and
//!   a Lie element by `lambda -> -lambda o rho(x)`; with this convention the
//!   lower-unipotent generator acts on the minus side by `+log(1+T)`.
//!
//! Both sign choices are exported as constants and are checked against the
//! moment pairing `<F, a^k> = moment(F, k)` by the test-suite.
//!
//! Characters are algebraic: `chi(diag(t1, t2)) = t1^m1 t2^m2`, `c = m2 - m1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{factorial, rational_binom, rational_valuation, PadicScalar, Rational};
use crate::series::TruncatedSeries;
use crate::uea::{casimir, Generator, PBWElement};

/// Sign relating the Fourier-side Lie action to the transpose of the
/// function-side one: `x . lambda = DUAL_LIE_SIGN * lambda o rho(x)`.
pub const DUAL_LIE_SIGN: i64 = -1;

/// Sign in `dual_uplus(F) = DUAL_UPLUS_SIGN * log(1+T) F`.
pub const DUAL_UPLUS_SIGN: i64 = 1;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Character {
    pub m1: i64,
    pub m2: i64,
}

impl Character {
    pub fn new(m1: i64, m2: i64) -> Self {
        Character { m1, m2 }
    }

    pub fn c(&self) -> i64 {
        self.m2 - self.m1
    }

    /// `eps^k chi` with `eps(diag(t1,t2)) = t2/t1`.
    pub fn eps_twist(&self, k: i64) -> Self {
        Character::new(self.m1 - k, self.m2 + k)
    }

    pub fn weyl_twist(&self) -> Self {
        Character::new(self.m2, self.m1)
    }

    /// Value of `d/dt` of `chi(exp(t e))`, i.e. the action of `e`.
    pub fn central(&self) -> i64 {
        self.m1 + self.m2
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({},{})", self.m1, self.m2)
    }
}

impl FromStr for Character {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected chi(m1,m2), got `{s}`"));
        let inner = s
            .trim()
            .strip_prefix("chi(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Character::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// Chart of the big cell a module lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(Side::Plus),
            "minus" => Ok(Side::Minus),
            _ => Err(Error::Parse(format!("unknown side `{s}`"))),
        }
    }
}

/// Polynomial `f(a)` with exact coefficients and a degree budget.
///
/// Exact operators that would exceed the budget fail with
/// [`Error::DegreeOverflow`]; series expansions (the Moebius-type unipotent
/// actions) are cut at the budget and set `truncated`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFunction {
    coeffs: Vec<Rational>,
    budget: usize,
    truncated: bool,
}

impl PolyFunction {
    pub fn new(mut coeffs: Vec<Rational>, budget: usize) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > budget + 1 {
            return Err(Error::DegreeOverflow {
                needed: coeffs.len() - 1,
                budget,
            });
        }
        Ok(PolyFunction {
            coeffs,
            budget,
            truncated: false,
        })
    }

    pub fn from_ints(coeffs: &[i64], budget: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| q(c)).collect(), budget)
    }

    pub fn zero(budget: usize) -> Self {
        PolyFunction {
            coeffs: Vec::new(),
            budget,
            truncated: false,
        }
    }

    /// `a^k`.
    pub fn monomial(k: usize, budget: usize) -> Result<Self> {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        Self::new(c, budget)
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn with_flag(mut self, truncated: bool) -> Self {
        self.truncated |= truncated;
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Self::new(c, self.budget.max(other.budget))?.with_flag(self.truncated || other.truncated))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, x: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * x).collect(), self.budget)
            .expect("scaling keeps the degree")
            .with_flag(self.truncated)
    }

    /// `Theta f = a f(a)`.
    pub fn theta(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut c = vec![Rational::zero()];
        c.extend(self.coeffs.iter().cloned());
        Ok(Self::new(c, self.budget)?.with_flag(self.truncated))
    }

    /// `df/da`.
    pub fn deriv(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, x)| x * q(k as i64))
            .collect();
        Self::new(c, self.budget)
            .expect("derivative lowers the degree")
            .with_flag(self.truncated)
    }

    /// `f(lambda a)`.
    pub fn dilate(&self, lambda: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            c.push(x * &pw);
            pw *= lambda;
        }
        Self::new(c, self.budget)
            .expect("dilation keeps the degree")
            .with_flag(self.truncated)
    }

    /// `f(a - b)`.
    pub fn shift(&self, b: &Rational) -> Self {
        // Horner in the shifted variable
        let mut acc = Self::zero(self.budget);
        for x in self.coeffs.iter().rev() {
            let times_a = acc.theta().expect("degree stays within the original");
            let times_b = acc.scale(b);
            acc = times_a
                .sub(&times_b)
                .and_then(|s| s.add(&Self::new(vec![x.clone()], self.budget)?))
                .expect("degree stays within the original");
        }
        acc.with_flag(self.truncated)
    }

    /// `(d/da)^k f` evaluated at `0`.
    pub fn derivative_at_zero(&self, k: usize) -> Rational {
        self.coeff(k) * Rational::from_integer(factorial(k as u32))
    }
}

/// Truncated product of coefficient vectors, keeping degrees `<= budget`.
fn poly_mul(a: &[Rational], b: &[Rational], budget: usize) -> (Vec<Rational>, bool) {
    if a.is_empty() || b.is_empty() {
        return (Vec::new(), false);
    }
    let full = a.len() + b.len() - 2;
    let top = full.min(budget);
    let mut out = vec![Rational::zero(); top + 1];
    let mut dropped = false;
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= top {
                out[i + j] += x * y;
            } else if !(x.is_zero() || y.is_zero()) {
                dropped = true;
            }
        }
    }
    (out, dropped)
}

fn require_unit(p: u64, b: &Rational) -> Result<()> {
    if rational_valuation(b, p) != Some(0) {
        return Err(Error::Domain(format!("{b} is not a {p}-adic unit")));
    }
    Ok(())
}

fn require_integral(p: u64, b: &Rational, min_val: i64) -> Result<()> {
    if rational_valuation(b, p).is_some_and(|v| v < min_val) {
        return Err(Error::Domain(format!(
            "{b} needs {p}-adic valuation at least {min_val}"
        )));
    }
    Ok(())
}

/// Function-side action of a Lie generator on the given chart.
pub fn rho(side: Side, chi: Character, g: Generator, f: &PolyFunction) -> Result<PolyFunction> {
    let c = q(chi.c());
    let d = f.deriv();
    match (side, g) {
        (_, Generator::E) => Ok(f.scale(&q(chi.central()))),
        (Side::Minus, Generator::Up) | (Side::Plus, Generator::Um) => Ok(d.scale(&q(-1))),
        (Side::Minus, Generator::H) => f.scale(&-c).add(&d.theta()?.scale(&q(2))),
        (Side::Plus, Generator::H) => f.scale(&-c).sub(&d.theta()?.scale(&q(2))),
        (Side::Minus, Generator::Um) => rho_uminus_c(&c, f),
        (Side::Plus, Generator::Up) => f.theta()?.scale(&c).add(&d.theta()?.theta()?),
    }
}

pub fn rho_uplus(f: &PolyFunction) -> Result<PolyFunction> {
    rho(Side::Minus, Character::new(0, 0), Generator::Up, f)
}

pub fn rho_h(chi: Character, f: &PolyFunction) -> Result<PolyFunction> {
    rho(Side::Minus, chi, Generator::H, f)
}

pub fn rho_uminus(chi: Character, f: &PolyFunction) -> Result<PolyFunction> {
    rho(Side::Minus, chi, Generator::Um, f)
}

/// Minus-chart `um` for an arbitrary rational `c`: `-c Theta f - Theta^2 (up f)`.
pub fn rho_uminus_c(c: &Rational, f: &PolyFunction) -> Result<PolyFunction> {
    f.theta()?.scale(&-c.clone()).add(&f.deriv().theta()?.theta()?)
}

pub fn rho_theta(f: &PolyFunction) -> Result<PolyFunction> {
    f.theta()
}

/// Function-side action of a PBW element.
pub fn rho_pbw(side: Side, chi: Character, x: &PBWElement, f: &PolyFunction) -> Result<PolyFunction> {
    x.evaluate(
        f,
        PolyFunction::zero(f.budget()),
        &|g, v| rho(side, chi, g, v),
        &|a, b| a.add(b),
        &|c, v| Ok(v.scale(c)),
    )
}

/// `diag(1, b)` for a unit `b`: minus chart `b^m2 f(a/b)`, plus chart
/// `b^m2 f(ab)`.
pub fn rho_diag(p: u64, side: Side, chi: Character, b: &Rational, f: &PolyFunction) -> Result<PolyFunction> {
    require_unit(p, b)?;
    let lambda = match side {
        Side::Minus => b.recip(),
        Side::Plus => b.clone(),
    };
    Ok(f.dilate(&lambda).scale(&rational_pow(b, chi.m2)))
}

fn rational_pow(b: &Rational, e: i64) -> Rational {
    let base = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        base.recip()
    } else {
        base
    }
}

/// Unipotent element that acts by a translation on the chart: lower
/// unipotent on the minus chart, upper unipotent on the plus chart.
/// `f -> f(a - b)`, `b` in `Z_p`.
pub fn rho_translation(p: u64, b: &Rational, f: &PolyFunction) -> Result<PolyFunction> {
    require_integral(p, b, 0)?;
    Ok(f.shift(b))
}

/// Unipotent element that acts by a fractional linear map: upper unipotent
/// `(1 b; 0 1)` on the minus chart, lower unipotent on the plus chart.
/// `f -> (1 - ab)^(+-c) f(a / (1 - ab))`, expanded up to the degree budget;
/// requires `v(b) >= 1`.
pub fn rho_mobius(p: u64, side: Side, chi: Character, b: &Rational, f: &PolyFunction) -> Result<PolyFunction> {
    require_integral(p, b, 1)?;
    let budget = f.budget();
    let exponent = match side {
        Side::Minus => q(chi.c()),
        Side::Plus => q(-chi.c()),
    };
    // a / (1 - ab) = sum_j b^j a^(j+1)
    let mut inner = vec![Rational::zero()];
    let mut bj = Rational::one();
    for _ in 0..budget {
        inner.push(bj.clone());
        bj *= b;
    }
    let mut dropped = f.truncated();
    let mut composed = vec![Rational::zero(); budget + 1];
    let mut power = vec![Rational::one()];
    for (k, fk) in f.coeffs().iter().enumerate() {
        if k > 0 {
            let (pw, d) = poly_mul(&power, &inner, budget);
            power = pw;
            dropped |= d;
        }
        for (i, x) in power.iter().enumerate() {
            composed[i] += fk * x;
        }
    }
    // (1 - ab)^exponent = sum_j binom(exponent, j) (-b)^j a^j
    let neg_b = -b.clone();
    let factor: Vec<Rational> = (0..=budget)
        .map(|j| rational_binom(&exponent, j as u32) * rational_pow(&neg_b, j as i64))
        .collect();
    let (out, d) = poly_mul(&factor, &composed, budget);
    dropped |= d;
    // the expansion of (1-ab)^c itself is infinite unless c is a small
    // nonnegative integer or b = 0
    let exact_factor = b.is_zero()
        || (exponent >= Rational::zero()
            && exponent.to_integer().to_usize().is_some_and(|e| e <= budget));
    dropped |= !exact_factor && !f.is_zero();
    Ok(PolyFunction::new(out, budget)?.with_flag(dropped))
}

/// Minus-chart upper unipotent `(1 b; 0 1)`.
pub fn rho_upper_unip(p: u64, chi: Character, b: &Rational, f: &PolyFunction) -> Result<PolyFunction> {
    rho_mobius(p, Side::Minus, chi, b, f)
}

/// `c_i^(n) = (n!/i!) binom(c - i, n - i)`.
pub fn c_coeff(i: usize, n: usize, c: &Rational) -> Result<Rational> {
    if i > n {
        return Err(Error::Domain(format!("c_coeff needs i <= n, got i={i}, n={n}")));
    }
    let ratio = Rational::new(factorial(n as u32), factorial(i as u32));
    Ok(ratio * rational_binom(&(c - q(i as i64)), (n - i) as u32))
}

/// `<F, f> = sum_k f_k lambda(a^k)`.
pub fn pairing(f_series: &TruncatedSeries, f: &PolyFunction) -> Result<PadicScalar> {
    match f.degree() {
        None => Ok(PadicScalar::zero(f_series.prime())),
        Some(d) => pair_moments(f_series.prime(), &f_series.moments(d)?, f),
    }
}

/// Pairing against precomputed moments `m_0, m_1, ...`.
pub fn pair_moments(p: u64, moments: &[PadicScalar], f: &PolyFunction) -> Result<PadicScalar> {
    let mut acc = PadicScalar::zero(p);
    for (k, x) in f.coeffs().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let m = moments.get(k).ok_or(Error::OrderExhausted {
            needed: k,
            available: moments.len().saturating_sub(1),
        })?;
        acc = &acc + &(m * &PadicScalar::exact(p, x.clone()));
    }
    Ok(acc)
}

fn sc(f: &TruncatedSeries, n: i64) -> PadicScalar {
    PadicScalar::from_int(f.prime(), n)
}

/// Fourier-side action of a Lie generator.
pub fn dual_lie(side: Side, chi: Character, g: Generator, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c = sc(f, chi.c());
    match (side, g) {
        (_, Generator::E) => f.scale(&sc(f, -chi.central())),
        (Side::Minus, Generator::Up) | (Side::Plus, Generator::Um) => {
            f.lie_mult().scale(&sc(f, DUAL_UPLUS_SIGN))
        }
        (Side::Minus, Generator::Um) => dual_uminus_power(chi, 1, f),
        (Side::Plus, Generator::Up) => {
            // -c Delta F - log Delta^2 F
            let d = f.delta_op()?;
            d.scale(&-&c)?.sub(&d.delta_op()?.lie_mult())
        }
        (Side::Minus, Generator::H) => f.scale(&c)?.sub(&f.delta_op()?.lie_mult().scale(&sc(f, 2))?),
        (Side::Plus, Generator::H) => f.scale(&c)?.add(&f.delta_op()?.lie_mult().scale(&sc(f, 2))?),
    }
}

pub fn dual_uplus(f: &TruncatedSeries) -> TruncatedSeries {
    dual_lie(Side::Minus, Character::new(0, 0), Generator::Up, f).expect("multiplication by log")
}

/// `(um)^m` on the minus side:
/// `sum_{i=0}^m (-1)^i c_i^(m) log(1+T)^i Delta^(m+i) F`.
pub fn dual_uminus_power(chi: Character, m: usize, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c = q(chi.c());
    let p = f.prime();
    let mut delta = f.delta_pow(m)?;
    let mut acc = TruncatedSeries::zero(p, f.backend(), f.trunc());
    for i in 0..=m {
        if i > 0 {
            delta = delta.delta_op()?;
        }
        let mut term = delta.clone();
        for _ in 0..i {
            term = term.lie_mult();
        }
        let coeff = c_coeff(i, m, &c)? * q(if i % 2 == 0 { 1 } else { -1 });
        acc = acc.add(&term.scale(&PadicScalar::exact(p, coeff))?)?;
    }
    Ok(acc)
}

/// Fourier-side action of a PBW element.
pub fn dual_pbw(side: Side, chi: Character, x: &PBWElement, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let p = f.prime();
    x.evaluate(
        f,
        TruncatedSeries::zero(p, f.backend(), f.trunc()),
        &|g, v| dual_lie(side, chi, g, v),
        &|a, b| a.add(b),
        &|c, v| v.scale(&PadicScalar::exact(p, c.clone())),
    )
}

/// `diag(1, b)` on the Fourier side: `b^(-m2) F((1+T)^(b^(+-1)) - 1)`.
pub fn dual_diag(side: Side, chi: Character, b: &PadicScalar, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if b.valuation().finite() != Some(0) {
        return Err(Error::Domain(format!("{b} is not a unit")));
    }
    let push = match side {
        Side::Minus => b.clone(),
        Side::Plus => PadicScalar::one(f.prime()).checked_div(b)?,
    };
    f.pushforward(&push)?.scale(&b.powi(-chi.m2)?)
}

/// The translation-type unipotent on the Fourier side: `(1+T)^b F`.
pub fn dual_translation(b: &PadicScalar, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    f.translate(b)
}

/// `(c/2 - 1) c` on the plus side, `(c/2 + 1) c` on the minus side.
pub fn casimir_scalar(chi: Character, side: Side) -> Rational {
    let c = q(chi.c());
    let shift = match side {
        Side::Plus => -Rational::one(),
        Side::Minus => Rational::one(),
    };
    (&c / q(2) + shift) * c
}

/// Outcome of the coefficient recursion for the intertwiner equation.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub series: TruncatedSeries,
    /// `false` when only the zero solution exists.
    pub solvable: bool,
}

/// Runs `c a_0 = 0`, `(n - c) a_n = sum_{i=1}^{n-1} (-1)^i (n-i)/(i(i+1)) a_{n-i}`,
/// normalized by `a_c = 1` when `c` is a nonnegative integer.
pub fn solve_ode_recursion(p: u64, c: &Rational, trunc: usize) -> TruncatedSeries {
    solve_ode(p, c, trunc).series
}

pub fn solve_ode(p: u64, c: &Rational, trunc: usize) -> OdeSolution {
    let anchor = if c.is_integer() && !c.is_negative() {
        c.to_integer().to_usize()
    } else {
        None
    };
    let mut a: Vec<Rational> = vec![Rational::zero(); trunc + 1];
    if let Some(k) = anchor {
        for n in 0..=trunc {
            if n == k {
                a[n] = Rational::one();
                continue;
            }
            if n == 0 {
                continue;
            }
            let mut sum = Rational::zero();
            for i in 1..n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                sum += Rational::new(
                    BigInt::from(sign * (n - i) as i64),
                    BigInt::from((i * (i + 1)) as i64),
                ) * &a[n - i];
            }
            a[n] = sum / (q(n as i64) - c);
        }
    }
    let series = TruncatedSeries::from_rationals(p, crate::series::Backend::Exact, &a, trunc)
        .expect("length matches");
    OdeSolution {
        series,
        solvable: anchor.is_some(),
    }
}

/// `(c_dst - c_src)/2 F + (1+T) log(1+T) dF/dT`.
pub fn ode_residual(c_src: &Rational, c_dst: &Rational, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let half = PadicScalar::exact(f.prime(), (c_dst - c_src) / q(2));
    f.scale(&half)?.add(&f.delta_op()?.lie_mult())
}

/// Which module a hom-space refers to: one of the two Bruhat summands, or
/// the full induced module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleSide {
    Plus,
    Minus,
    Full,
}

impl FromStr for ModuleSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(ModuleSide::Plus),
            "minus" => Ok(ModuleSide::Minus),
            "full" => Ok(ModuleSide::Full),
            _ => Err(Error::Parse(format!("unknown module side `{s}`"))),
        }
    }
}

/// `dim Hom(M_chi', M_chi)` between the given summands.
pub fn hom_dim(source: ModuleSide, target: ModuleSide, chi_prime: Character, chi: Character) -> Result<u8> {
    use ModuleSide::*;
    let c = chi.c();
    let same = || -> Result<()> {
        if chi_prime == chi {
            Err(Error::Domain(format!("hom classification needs chi' != chi, both are {chi}")))
        } else {
            Ok(())
        }
    };
    match (source, target) {
        (Plus, Minus) | (Minus, Plus) => Ok(0),
        (Minus, Minus) => {
            same()?;
            Ok(u8::from(c >= 0 && chi_prime == chi.eps_twist(-1 - c)))
        }
        (Plus, Plus) | (Full, Full) => {
            same()?;
            Ok(u8::from(c <= 0 && chi_prime == chi.eps_twist(1 - c)))
        }
        _ => Err(Error::Domain(
            "hom between the full module and a single summand is not classified".into(),
        )),
    }
}

/// The individual conditions on `(chi', chi)` that a minus-side hom has to
/// satisfy, before the unipotent step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionBundle {
    /// Central characters agree.
    pub central: bool,
    /// `c(chi) - c(chi')` is an even nonnegative integer.
    pub even_gap: bool,
    /// `m2' = m2 + (c' - c)/2`.
    pub torus: bool,
    /// `chi' = eps^(-m) chi` for some `m >= 0` (returned).
    pub twist: Option<i64>,
}

pub fn condition_bundle(chi_prime: Character, chi: Character) -> ConditionBundle {
    let gap = chi.c() - chi_prime.c();
    let torus = gap % 2 == 0 && chi_prime.m2 == chi.m2 - gap / 2;
    let m = chi_prime.m1 - chi.m1;
    let twist = (m >= 0 && chi_prime == chi.eps_twist(-m)).then_some(m);
    ConditionBundle {
        central: chi.central() == chi_prime.central(),
        even_gap: gap >= 0 && gap % 2 == 0,
        torus,
        twist,
    }
}

/// Equivariance defects of the intertwiner `(-d/da)^(1-c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerReport {
    pub chi: Character,
    pub target: Character,
    pub power: usize,
    /// `(chart, operator label, defect vanishes on a^0..a^max_degree)`.
    pub defects: Vec<(Side, String, bool)>,
    pub max_degree: usize,
}

impl IntertwinerReport {
    pub fn all_vanish(&self) -> bool {
        self.defects.iter().all(|d| d.2)
    }
}

/// For `c = c(chi) <= 0`, checks that `Op = (-d/da)^(1-c)` commutes with
/// the actions of `up, h, e, um` and three torus elements, from `chi` to
/// `chi' = eps^(1-c) chi` on the plus chart and from `w chi` to `w chi'` on
/// the minus chart (where `Op` is the action of `um`, resp. `up`, raised to
/// the power `1 - c`).
pub fn intertwiner_residuals(p: u64, chi: Character, max_degree: usize) -> Result<IntertwinerReport> {
    let c = chi.c();
    if c > 0 {
        return Err(Error::Domain(format!(
            "intertwiner needs c(chi) <= 0, got c = {c}"
        )));
    }
    let power = (1 - c) as usize;
    let target = chi.eps_twist(1 - c);
    let budget = max_degree + 2;
    let op = |f: &PolyFunction| -> PolyFunction {
        let mut g = f.clone();
        for _ in 0..power {
            g = g.deriv().scale(&q(-1));
        }
        g
    };
    let units = [q(-1), q(1 + p as i64), Rational::new(BigInt::from(1), BigInt::from(1 + p as i64))];
    let mut defects = Vec::new();
    for (side, src, dst) in [
        (Side::Plus, chi, target),
        (Side::Minus, chi.weyl_twist(), target.weyl_twist()),
    ] {
        let mut check = |label: String, act: &dyn Fn(Character, &PolyFunction) -> Result<PolyFunction>| -> Result<()> {
            let mut ok = true;
            for k in 0..=max_degree {
                let f = PolyFunction::monomial(k, budget)?;
                let lhs = op(&act(src, &f)?);
                let rhs = act(dst, &op(&f))?;
                ok &= lhs == rhs;
            }
            defects.push((side, label, ok));
            Ok(())
        };
        for g in Generator::ALL {
            check(g.name().to_string(), &|ch, f| rho(side, ch, g, f))?;
        }
        for b in &units {
            check(format!("diag(1,{b})"), &|ch, f| rho_diag(p, side, ch, b, f))?;
        }
    }
    Ok(IntertwinerReport {
        chi,
        target,
        power,
        defects,
        max_degree,
    })
}

/// Element of `M_chi = M+_chi (+) M-_(w chi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BruhatElement {
    pub chi: Character,
    pub plus: TruncatedSeries,
    pub minus: TruncatedSeries,
}

pub fn bruhat_split(plus: TruncatedSeries, minus: TruncatedSeries, chi: Character) -> BruhatElement {
    BruhatElement { chi, plus, minus }
}

impl BruhatElement {
    /// Character of the minus summand.
    pub fn minus_character(&self) -> Character {
        self.chi.weyl_twist()
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    fn componentwise(
        &self,
        op: impl Fn(Side, Character, &TruncatedSeries) -> Result<TruncatedSeries>,
    ) -> Result<Self> {
        Ok(BruhatElement {
            chi: self.chi,
            plus: op(Side::Plus, self.chi, &self.plus)?,
            minus: op(Side::Minus, self.minus_character(), &self.minus)?,
        })
    }

    pub fn act_lie(&self, g: Generator) -> Result<Self> {
        self.componentwise(|s, ch, f| dual_lie(s, ch, g, f))
    }

    pub fn act_pbw(&self, x: &PBWElement) -> Result<Self> {
        self.componentwise(|s, ch, f| dual_pbw(s, ch, x, f))
    }

    pub fn act_diag(&self, b: &PadicScalar) -> Result<Self> {
        self.componentwise(|s, ch, f| dual_diag(s, ch, b, f))
    }

    pub fn act_casimir(&self) -> Result<Self> {
        self.act_pbw(&casimir())
    }

    /// Character header followed by the two series, plus summand first.
    pub fn to_text(&self) -> String {
        format!("{}\n{}{}", self.chi, self.plus.to_text(), self.minus.to_text())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (head, rest) = text
            .split_once('\n')
            .ok_or_else(|| Error::Parse("missing character header".into()))?;
        let chi: Character = head.parse()?;
        let split = rest
            .match_indices("PADIC-SERIES")
            .nth(1)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Parse("expected two series blocks".into()))?;
        let plus = TruncatedSeries::from_text(&rest[..split])?;
        let minus = TruncatedSeries::from_text(&rest[split..])?;
        Ok(BruhatElement { chi, plus, minus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Backend;

    fn mono(k: usize) -> PolyFunction {
        PolyFunction::monomial(k, 14).unwrap()
    }

    #[test]
    fn characters() {
        let chi = Character::new(3, -2);
        assert_eq!(chi.eps_twist(0), chi);
        assert_eq!(chi.eps_twist(4).c(), chi.c() + 8);
        let z = Character::new(0, 0);
        assert_eq!(z.eps_twist(-1), Character::new(1, -1));
        assert_eq!(z.eps_twist(-1).c(), -2);
        assert_eq!(chi.weyl_twist().c(), 5);
        assert_eq!(chi.to_string(), "chi(3,-2)");
        assert_eq!("chi(3,-2)".parse::<Character>().unwrap(), chi);
        assert!("chi(3;-2)".parse::<Character>().is_err());
    }

    #[test]
    fn function_side_examples() {
        assert!(rho_uplus(&mono(0)).unwrap().is_zero());
        let chi = Character::new(0, 2);
        assert_eq!(
            rho_uminus(chi, &mono(0)).unwrap(),
            PolyFunction::from_ints(&[0, -2], 14).unwrap()
        );
        let top = PolyFunction::monomial(3, 3).unwrap();
        assert!(matches!(rho_uminus(chi, &top), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn group_actions_identity() {
        let p = 5;
        let chi = Character::new(1, 3);
        let f = PolyFunction::from_ints(&[2, 0, -1, 4], 10).unwrap();
        assert_eq!(rho_diag(p, Side::Minus, chi, &q(1), &f).unwrap(), f);
        assert_eq!(rho_upper_unip(p, chi, &q(0), &f).unwrap(), f);
        assert!(rho_diag(p, Side::Minus, chi, &q(5), &f).is_err());
        assert!(rho_upper_unip(p, chi, &q(2), &f).is_err());
    }

    #[test]
    fn c_coeff_examples() {
        let c = Rational::new(BigInt::from(7), BigInt::from(3));
        for n in 0..6 {
            assert_eq!(c_coeff(n, n, &c).unwrap(), q(1));
            let falling = (0..n).fold(Rational::one(), |acc, i| acc * (&c - q(i as i64)));
            assert_eq!(c_coeff(0, n, &c).unwrap(), falling);
        }
        assert!(c_coeff(3, 2, &c).is_err());
    }

    #[test]
    fn casimir_scalars() {
        for side in [Side::Plus, Side::Minus] {
            assert_eq!(casimir_scalar(Character::new(0, 0), side), q(0));
        }
        let chi = Character::new(0, 2);
        assert_eq!(casimir_scalar(chi, Side::Plus), q(0));
        assert_eq!(casimir_scalar(chi, Side::Minus), q(4));
        for k in 0..=3 {
            let f = PolyFunction::monomial(k, 14).unwrap();
            let g = rho_pbw(Side::Minus, chi, &casimir(), &f).unwrap();
            assert_eq!(g, f.scale(&q(4)));
        }
    }

    #[test]
    fn ode_examples() {
        let p = 5;
        assert_eq!(solve_ode_recursion(p, &q(0), 6), TruncatedSeries::one(p, Backend::Exact, 6));
        assert_eq!(
            solve_ode_recursion(p, &q(1), 3),
            TruncatedSeries::log1p(p, Backend::Exact, 3)
        );
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let s = solve_ode(p, &half, 6);
        assert!(!s.solvable);
        assert!(s.series.is_zero());
    }

    #[test]
    fn ode_residual_examples() {
        let p = 3;
        let n = 12;
        let one = TruncatedSeries::one(p, Backend::Exact, n);
        assert!(ode_residual(&q(4), &q(4), &one).unwrap().is_zero());
        let l = TruncatedSeries::log1p(p, Backend::Exact, n);
        assert!(ode_residual(&q(2), &q(0), &l).unwrap().is_zero());
        let l2 = l.mul(&l).unwrap();
        assert!(!ode_residual(&q(2), &q(0), &l2).unwrap().is_zero());
    }

    #[test]
    fn hom_dim_examples() {
        use ModuleSide::*;
        let z = Character::new(0, 0);
        assert_eq!(hom_dim(Minus, Minus, z.eps_twist(-1), z).unwrap(), 1);
        assert_eq!(hom_dim(Minus, Minus, z.eps_twist(-2), z).unwrap(), 0);
        assert_eq!(hom_dim(Plus, Minus, Character::new(4, 1), z).unwrap(), 0);
        assert_eq!(hom_dim(Minus, Plus, z, Character::new(4, 1)).unwrap(), 0);
        assert_eq!(hom_dim(Full, Full, z.eps_twist(1), z).unwrap(), 1);
        assert!(hom_dim(Minus, Minus, z, z).is_err());
    }

    #[test]
    fn intertwiner_examples() {
        for c in [0, -1, -3] {
            let chi = Character::new(2, 2 + c);
            let r = intertwiner_residuals(5, chi, 10).unwrap();
            assert!(r.all_vanish(), "c = {c}: {:?}", r.defects);
            assert_eq!(r.power, (1 - c) as usize);
        }
        assert!(intertwiner_residuals(5, Character::new(0, 1), 10).is_err());
    }

    #[test]
    fn bruhat_round_trip() {
        let p = 3;
        let chi = Character::new(1, 4);
        let e = bruhat_split(
            TruncatedSeries::from_ints(p, Backend::Exact, &[1, 2], 8).unwrap(),
            TruncatedSeries::log1p(p, Backend::Exact, 8),
            chi,
        );
        let text = e.to_text();
        assert!(text.starts_with("chi(1,4)\nPADIC-SERIES"));
        assert_eq!(BruhatElement::from_text(&text).unwrap(), e);
        assert_eq!(e.minus_character().c(), -3);
    }
}
