//! Coefficient arithmetic over `Q_p`.
//!
//! A [`PadicScalar`] is either an exact rational number (with its exactly
//! computable `p`-adic valuation) or a capped-precision approximation
//! `p^v * u + O(p^M)`. The exact backend is used for algebraic identities,
//! the approximate one for long series pipelines.
//!
//! Precision model for the approximate backend:
//!
//! - `a + b` is known to `min(M_a, M_b)`;
//! - `a * b` is known to `min(M_a + v(b), M_b + v(a))`;
//! - `a / b` is known to `min(M_a - v(b), M_b + v(a) - 2 v(b))`, which is
//!   `M_a - v(b)` for an exact divisor.
//!
//! Exact operands never lower the precision of a mixed operation.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p`-adic valuation of a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// Zero to the available precision: the true valuation is at least this.
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    /// A guaranteed lower bound, `None` for an exact zero.
    pub fn lower_bound(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Exact(Rational),
    /// `p^valuation * unit + O(p^precision)`, `unit` reduced modulo
    /// `p^(precision - valuation)`. Zero is `valuation == precision, unit == 0`.
    Approx {
        valuation: i64,
        unit: BigInt,
        precision: i64,
    },
}

/// An element of `Q_p`, exact or known to finite absolute precision.
#[derive(Debug, Clone)]
pub struct PadicScalar {
    prime: u64,
    repr: Repr,
}

pub(crate) fn p_pow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    num_traits::pow(BigInt::from(p), k as usize)
}

pub(crate) fn rational_pow(p: u64, k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(p_pow(p, k))
    } else {
        Rational::new(BigInt::one(), p_pow(p, -k))
    }
}

/// Strips all factors of `p` from a nonzero integer.
fn split_int(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// `p`-adic valuation of a rational, `None` for zero.
pub fn rational_valuation(r: &Rational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let (vn, _) = split_int(r.numer(), p);
    let (vd, _) = split_int(r.denom(), p);
    Some(vn - vd)
}

/// Valuation of a nonzero machine integer.
pub fn int_valuation(n: i64, p: u64) -> Option<i64> {
    rational_valuation(&Rational::from_integer(BigInt::from(n)), p)
}

/// Largest `e` with `p^e <= n` (0 for `n <= 1`).
pub fn floor_log(n: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut q = p;
    while q <= n {
        e += 1;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    e
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let ext = a.mod_floor(m).extended_gcd(m);
    debug_assert!(ext.gcd.is_one());
    ext.x.mod_floor(m)
}

/// Unit part of a nonzero rational reduced modulo `p^k`.
fn unit_mod(r: &Rational, p: u64, k: i64) -> BigInt {
    if k <= 0 {
        return BigInt::zero();
    }
    let modulus = p_pow(p, k);
    let (_, n) = split_int(r.numer(), p);
    let (_, d) = split_int(r.denom(), p);
    (n * inverse_mod(&d, &modulus)).mod_floor(&modulus)
}

fn approx_repr(p: u64, valuation: i64, unit: BigInt, precision: i64) -> Repr {
    let zero = Repr::Approx {
        valuation: precision,
        unit: BigInt::zero(),
        precision,
    };
    if valuation >= precision {
        return zero;
    }
    let unit = unit.mod_floor(&p_pow(p, precision - valuation));
    if unit.is_zero() {
        return zero;
    }
    let (extra, unit) = split_int(&unit, p);
    let valuation = valuation + extra;
    if valuation >= precision {
        return zero;
    }
    Repr::Approx {
        valuation,
        unit,
        precision,
    }
}

impl PadicScalar {
    pub fn exact(prime: u64, value: Rational) -> Self {
        PadicScalar {
            prime,
            repr: Repr::Exact(value),
        }
    }

    pub fn from_int(prime: u64, n: i64) -> Self {
        Self::exact(prime, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(prime: u64, num: i64, den: i64) -> Self {
        Self::exact(prime, Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero(prime: u64) -> Self {
        Self::from_int(prime, 0)
    }

    pub fn one(prime: u64) -> Self {
        Self::from_int(prime, 1)
    }

    /// `p^valuation * unit + O(p^precision)`; `unit` need not be reduced.
    pub fn approx(prime: u64, valuation: i64, unit: BigInt, precision: i64) -> Self {
        PadicScalar {
            prime,
            repr: approx_repr(prime, valuation, unit, precision),
        }
    }

    pub fn approx_zero(prime: u64, precision: i64) -> Self {
        Self::approx(prime, precision, BigInt::zero(), precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// Absolute precision, `None` for exact values.
    pub fn precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { precision, .. } => Some(*precision),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Exact(r) => Some(r),
            Repr::Approx { .. } => None,
        }
    }

    /// Exact zero, or zero to the available precision.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(r) => r.is_zero(),
            Repr::Approx { unit, .. } => unit.is_zero(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Exact(r) => match rational_valuation(r, self.prime) {
                Some(v) => Valuation::Finite(v),
                None => Valuation::Infinite,
            },
            Repr::Approx {
                valuation,
                unit,
                precision,
            } => {
                if unit.is_zero() {
                    Valuation::AtLeast(*precision)
                } else {
                    Valuation::Finite(*valuation)
                }
            }
        }
    }

    /// The rational number this scalar stands for: the value itself when
    /// exact, the canonical representative `p^v * u` otherwise.
    pub fn lift(&self) -> Rational {
        match &self.repr {
            Repr::Exact(r) => r.clone(),
            Repr::Approx {
                valuation, unit, ..
            } => rational_pow(self.prime, *valuation) * Rational::from_integer(unit.clone()),
        }
    }

    /// Reduces to absolute precision `precision` (never raises it).
    pub fn to_approx(&self, precision: i64) -> Self {
        match &self.repr {
            Repr::Exact(r) => match rational_valuation(r, self.prime) {
                None => Self::approx_zero(self.prime, precision),
                Some(v) => Self::approx(
                    self.prime,
                    v,
                    unit_mod(r, self.prime, precision - v),
                    precision,
                ),
            },
            Repr::Approx {
                valuation,
                unit,
                precision: own,
            } => Self::approx(self.prime, *valuation, unit.clone(), min(*own, precision)),
        }
    }

    /// True if `exact` lies in the ball described by `self`.
    pub fn agrees_with(&self, exact: &Rational) -> bool {
        match &self.repr {
            Repr::Exact(r) => r == exact,
            Repr::Approx { precision, .. } => {
                let diff = self.lift() - exact;
                match rational_valuation(&diff, self.prime) {
                    None => true,
                    Some(v) => v >= *precision,
                }
            }
        }
    }

    /// Structural identity, including precision. Used for bit-exact
    /// round-trip checks; `==` compares values up to the available precision.
    pub fn is_identical(&self, other: &Self) -> bool {
        self.prime == other.prime && self.repr == other.repr
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(a + b),
            (Repr::Exact(_), Repr::Approx { precision, .. }) => {
                return self.to_approx(*precision).checked_add(other)
            }
            (Repr::Approx { precision, .. }, Repr::Exact(_)) => {
                return self.checked_add(&other.to_approx(*precision))
            }
            (
                Repr::Approx {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Approx {
                    valuation: vb,
                    unit: ub,
                    precision: pb,
                },
            ) => {
                let prec = min(*pa, *pb);
                let vmin = min(*va, *vb);
                if vmin >= prec {
                    approx_repr(p, prec, BigInt::zero(), prec)
                } else {
                    let k = prec - vmin;
                    let term = |v: i64, u: &BigInt| {
                        if v - vmin >= k {
                            BigInt::zero()
                        } else {
                            u * p_pow(p, v - vmin)
                        }
                    };
                    approx_repr(p, vmin, term(*va, ua) + term(*vb, ub), prec)
                }
            }
        };
        Ok(PadicScalar { prime: p, repr })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let repr = match &self.repr {
            Repr::Exact(r) => Repr::Exact(-r),
            Repr::Approx {
                valuation,
                unit,
                precision,
            } => approx_repr(self.prime, *valuation, -unit, *precision),
        };
        PadicScalar {
            prime: self.prime,
            repr,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(a * b),
            (Repr::Exact(_), Repr::Approx { .. }) => return other.checked_mul(self),
            (
                Repr::Approx {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Exact(b),
            ) => match rational_valuation(b, p) {
                None => Repr::Exact(Rational::zero()),
                Some(vb) => {
                    if ua.is_zero() {
                        approx_repr(p, pa + vb, BigInt::zero(), pa + vb)
                    } else {
                        let rel = pa - va;
                        approx_repr(p, va + vb, ua * unit_mod(b, p, rel), pa + vb)
                    }
                }
            },
            (
                Repr::Approx {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Approx {
                    valuation: vb,
                    unit: ub,
                    precision: pb,
                },
            ) => {
                // a zero operand carries its precision as a valuation bound
                let prec = min(pa + vb, pb + va);
                if ua.is_zero() || ub.is_zero() {
                    approx_repr(p, prec, BigInt::zero(), prec)
                } else {
                    approx_repr(p, va + vb, ua * ub, prec)
                }
            }
        };
        Ok(PadicScalar { prime: p, repr })
    }

    /// Division. An approximate divisor that is zero to its precision is a
    /// [`Error::PrecisionLoss`], an exact zero divisor [`Error::DivisionByZero`].
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (_, Repr::Exact(b)) if b.is_zero() => return Err(Error::DivisionByZero),
            (_, Repr::Approx { unit, precision, .. }) if unit.is_zero() => {
                return Err(Error::PrecisionLoss(format!(
                    "divisor is zero to precision {precision}"
                )))
            }
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(a / b),
            (
                Repr::Exact(a),
                Repr::Approx {
                    valuation: vb,
                    unit: ub,
                    precision: pb,
                },
            ) => match rational_valuation(a, p) {
                None => Repr::Exact(Rational::zero()),
                Some(va) => {
                    let rel = pb - vb;
                    let m = p_pow(p, rel);
                    approx_repr(
                        p,
                        va - vb,
                        unit_mod(a, p, rel) * inverse_mod(ub, &m),
                        va - vb + rel,
                    )
                }
            },
            (
                Repr::Approx {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Exact(b),
            ) => {
                let vb = rational_valuation(b, p).expect("nonzero divisor");
                if ua.is_zero() {
                    approx_repr(p, pa - vb, BigInt::zero(), pa - vb)
                } else {
                    let rel = pa - va;
                    let m = p_pow(p, rel);
                    approx_repr(
                        p,
                        va - vb,
                        ua * inverse_mod(&unit_mod(b, p, rel), &m),
                        pa - vb,
                    )
                }
            }
            (
                Repr::Approx {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Approx {
                    valuation: vb,
                    unit: ub,
                    precision: pb,
                },
            ) => {
                if ua.is_zero() {
                    approx_repr(p, pa - vb, BigInt::zero(), pa - vb)
                } else {
                    let rel = min(pa - va, pb - vb);
                    let m = p_pow(p, rel);
                    approx_repr(p, va - vb, ua * inverse_mod(ub, &m), va - vb + rel)
                }
            }
        };
        Ok(PadicScalar { prime: p, repr })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prime);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power allowing negative exponents.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Ok(base)
        } else {
            Self::one(self.prime).checked_div(&base)
        }
    }

    pub(crate) fn require_integral(&self, what: &str) -> Result<()> {
        match self.valuation() {
            Valuation::Finite(v) if v < 0 => Err(Error::Domain(format!(
                "{what} requires a p-adic integer, got valuation {v}"
            ))),
            _ => Ok(()),
        }
    }

    /// Generalized binomial coefficient `a (a-1) ... (a-n+1) / n!` for a
    /// `p`-adic integer `a`.
    ///
    /// For an approximate `a` the value is computed on the integer
    /// representative; `x -> binom(x, n)` moves valuations by at most
    /// `floor(log_p n)` (Vandermonde), which is the precision charged.
    pub fn binom(&self, n: u32) -> Result<Self> {
        self.require_integral("binom")?;
        let p = self.prime;
        match &self.repr {
            Repr::Exact(a) => Ok(Self::exact(p, rational_binom(a, n))),
            Repr::Approx { precision, .. } => {
                let lifted = rational_binom(&self.lift(), n);
                let loss = floor_log(n as u64, p);
                Ok(Self::exact(p, lifted).to_approx(precision - loss))
            }
        }
    }

    /// `log(1 + x)` for `v(x) >= 1`, to absolute precision at most `target`.
    ///
    /// Terms `(-1)^(n+1) x^n / n` are summed while `n v(x) - floor(log_p n)`,
    /// a lower bound for their valuation, is below the target; that bound is
    /// nondecreasing in `n` once `v(x) >= 1`, so everything dropped is
    /// `O(p^target)`. An input known to `M` yields an output known to
    /// `min(M, target)`.
    pub fn plog(&self, target: i64) -> Result<Self> {
        let p = self.prime;
        let v = match self.valuation() {
            Valuation::Infinite => return Ok(Self::zero(p)),
            Valuation::Finite(v) => v,
            Valuation::AtLeast(v) => v,
        };
        if v < 1 {
            return Err(Error::Domain(format!(
                "plog needs v(x) >= 1, got valuation {v}"
            )));
        }
        let target = match self.precision() {
            Some(m) => min(m, target),
            None => target,
        };
        let x = self.lift();
        let mut sum = Rational::zero();
        let mut power = Rational::one();
        let mut n: i64 = 1;
        while n * v - floor_log(n as u64, p) < target {
            power *= &x;
            let term = &power / Rational::from_integer(BigInt::from(n));
            if n % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            n += 1;
        }
        Ok(Self::exact(p, sum).to_approx(target))
    }

    /// Textual form: `num/den` for exact values, `v;u;M` otherwise.
    pub fn render(&self) -> String {
        match &self.repr {
            Repr::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Repr::Approx {
                valuation,
                unit,
                precision,
            } => format!("{valuation};{unit};{precision}"),
        }
    }

    /// Parses [`render`](Self::render) output; bare integers are accepted as
    /// exact values.
    pub fn parse(prime: u64, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed scalar `{s}`"));
        if s.contains(';') {
            let parts: Vec<&str> = s.split(';').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let v: i64 = parts[0].trim().parse().map_err(|_| bad())?;
            let u: BigInt = parts[1].trim().parse().map_err(|_| bad())?;
            let m: i64 = parts[2].trim().parse().map_err(|_| bad())?;
            if u.is_negative() {
                return Err(bad());
            }
            Ok(Self::approx(prime, v, u, m))
        } else if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Self::exact(prime, Rational::new(n, d)))
        } else {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Self::exact(prime, Rational::from_integer(n)))
        }
    }

    /// Lowest-index comparison key for Newton polygon work: the finite
    /// valuation as an `i64`, if any.
    pub fn finite_valuation(&self) -> Option<i64> {
        self.valuation().finite()
    }
}

/// `a (a-1) ... (a-n+1) / n!` over the rationals.
pub fn rational_binom(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..n {
        let j = Rational::from_integer(BigInt::from(j));
        acc = acc * (a - &j) / (j + Rational::one());
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => a == b,
            _ => self
                .checked_sub(other)
                .map(|d| d.is_zero())
                .unwrap_or(false),
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Operator forms panic on mixed primes; callers that cannot rule that out
// use the `checked_*` methods.
impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.checked_sub(rhs).expect("prime mismatch")
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_examples() {
        let p = 5;
        let a = PadicScalar::from_ratio(p, 1, 2);
        let s = &a + &a;
        assert_eq!(s, PadicScalar::one(p));
        assert_eq!(s.valuation(), Valuation::Finite(0));
        assert_eq!(&PadicScalar::zero(p) + &a, a);

        let a = PadicScalar::from_int(p, 5);
        let b = PadicScalar::from_int(p, 20);
        let s = &a + &b;
        assert_eq!(s, PadicScalar::from_int(p, 25));
        assert_eq!(s.valuation(), Valuation::Finite(2));

        // same sum on the capped backend
        let s = &a.to_approx(10) + &b.to_approx(10);
        assert_eq!(s.valuation(), Valuation::Finite(2));
        assert_eq!(s.precision(), Some(10));
    }

    #[test]
    fn mul_div_examples() {
        let a = PadicScalar::from_int(3, 3);
        let b = PadicScalar::from_int(3, 9);
        let prod = &a * &b;
        assert_eq!(prod, PadicScalar::from_int(3, 27));
        assert_eq!(prod.valuation(), Valuation::Finite(3));
        assert_eq!(&a * &PadicScalar::one(3), a);

        let r = PadicScalar::from_ratio(5, 1, 5)
            .checked_div(&PadicScalar::from_int(5, 5))
            .unwrap();
        assert_eq!(r, PadicScalar::from_ratio(5, 1, 25));
        assert_eq!(r.valuation(), Valuation::Finite(-2));
    }

    #[test]
    fn approximate_division_loses_divisor_valuation() {
        let a = PadicScalar::from_int(5, 7).to_approx(10);
        let b = PadicScalar::from_int(5, 25);
        let r = a.checked_div(&b).unwrap();
        assert_eq!(r.precision(), Some(8));
        assert!(r.agrees_with(&q(7, 25)));
    }

    #[test]
    fn division_by_zero_to_precision_is_an_error() {
        let a = PadicScalar::one(5).to_approx(6);
        let z = PadicScalar::from_int(5, 5 * 5 * 5 * 5 * 5 * 5 * 5).to_approx(6);
        assert!(z.is_zero());
        assert!(matches!(a.checked_div(&z), Err(Error::PrecisionLoss(_))));
        assert_eq!(
            a.checked_div(&PadicScalar::zero(5)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn prime_mismatch_is_reported() {
        let a = PadicScalar::one(3);
        let b = PadicScalar::one(5);
        assert_eq!(a.checked_add(&b), Err(Error::PrimeMismatch(3, 5)));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(PadicScalar::zero(5).valuation(), Valuation::Infinite);
        assert_eq!(PadicScalar::from_int(5, 50).valuation(), Valuation::Finite(2));
        assert_eq!(
            PadicScalar::from_ratio(2, 7, 12).valuation(),
            Valuation::Finite(-2)
        );
        let z = PadicScalar::from_int(5, 125).to_approx(3);
        assert_eq!(z.valuation(), Valuation::AtLeast(3));
        assert_eq!(z, PadicScalar::zero(5));
    }

    #[test]
    fn binom_examples() {
        let five = PadicScalar::from_int(7, 5);
        assert_eq!(five.binom(0).unwrap(), PadicScalar::one(7));
        assert_eq!(five.binom(2).unwrap(), PadicScalar::from_int(7, 10));
        assert!(PadicScalar::from_ratio(3, 1, 3).binom(2).is_err());
        // 1/2 is a 5-adic integer
        let half = PadicScalar::from_ratio(5, 1, 2);
        assert_eq!(half.binom(2).unwrap(), PadicScalar::from_ratio(5, -1, 8));
    }

    #[test]
    fn approximate_binom_is_within_charged_precision() {
        let p = 3;
        let a = PadicScalar::from_int(p, -17);
        for n in 0..30 {
            let exact = a.binom(n).unwrap();
            let approx = a.to_approx(12).binom(n).unwrap();
            assert!(approx.agrees_with(exact.as_exact().unwrap()), "n = {n}");
            assert_eq!(approx.precision(), Some(12 - floor_log(n as u64, p)));
        }
    }

    #[test]
    fn plog_examples() {
        assert_eq!(PadicScalar::zero(5).plog(20).unwrap(), PadicScalar::zero(5));
        let l = PadicScalar::from_int(5, 5).plog(20).unwrap();
        assert_eq!(l.valuation(), Valuation::Finite(1));
        assert_eq!(l.precision(), Some(20));
        assert!(PadicScalar::from_int(5, 1).plog(20).is_err());
        assert!(PadicScalar::from_int(5, 0).to_approx(4).plog(20).is_ok());
    }

    #[test]
    fn plog_of_minus_two_vanishes_2_adically() {
        // 1 + (-2) = -1 is a root of unity
        let l = PadicScalar::from_int(2, -2).plog(30).unwrap();
        assert!(l.is_zero());
    }

    #[test]
    fn render_and_parse() {
        let x = PadicScalar::from_ratio(5, -7, 12);
        assert_eq!(x.render(), "-7/12");
        let y = PadicScalar::from_int(5, 3).to_approx(4);
        assert_eq!(y.render(), "0;3;4");
        let z = PadicScalar::approx_zero(5, 4);
        assert_eq!(z.render(), "4;0;4");
        let w = PadicScalar::from_ratio(5, 1, 5).to_approx(3);
        assert_eq!(w.render(), "-1;1;3");
        for s in ["-7/12", "0;3;4", "4;0;4", "-1;1;3", "0/1"] {
            let parsed = PadicScalar::parse(5, s).unwrap();
            assert_eq!(parsed.render(), s);
        }
        assert_eq!(PadicScalar::parse(5, "12").unwrap().render(), "12/1");
        assert!(PadicScalar::parse(5, "1;2").is_err());
        assert!(PadicScalar::parse(5, "1/0").is_err());
        assert!(PadicScalar::parse(5, "abc").is_err());
    }

    #[test]
    fn negative_approx_renders_canonical_unit() {
        let x = PadicScalar::from_int(3, -1).to_approx(2);
        assert_eq!(x.render(), "0;8;2");
    }
}
