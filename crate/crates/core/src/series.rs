//! Distributions on `Z_p` in their Fourier picture.
//!
//! A distribution `lambda` is represented by its Fourier transform
//! `F(T) = sum c_n T^n`, truncated after `T^N`. Convolution of distributions is
//! the product of series, the Dirac distribution at `a` is `(1+T)^a`, and the
//! natural operators on distributions become explicit series operations:
//!
//! | distribution side            | series side                 |
//! |------------------------------|-----------------------------|
//! | translation by `b`           | multiply by `(1+T)^b`       |
//! | Lie generator of `Z_p`       | multiply by `log(1+T)`      |
//! | push-forward along `a -> ba` | substitute `(1+T)^b - 1`    |
//! | precompose with `f -> a f`   | `(1+T) d/dT`                |
//!
//! Every series carries a *reliable order*: the largest index `n` such that
//! `c_0 .. c_n` agree with the untruncated object. Operations that need
//! unknown coefficients (differentiation) lower it instead of shrinking the
//! coefficient vector; a product only loses reliability where an unknown
//! coefficient of one factor meets a possibly nonzero coefficient of the
//! other, so multiplying by a series of `T`-adic order `k` buys back `k`
//! orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Rational, Valuation};

/// Coefficient backend shared by all coefficients of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    Exact,
    /// Capped absolute precision `M`.
    Approx { precision: i64 },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Approx { .. } => "approx",
        }
    }

    /// Brings a scalar into this backend. Exact targets reject approximate
    /// inputs.
    pub fn coerce(&self, x: &PadicScalar) -> Result<PadicScalar> {
        match self {
            Backend::Exact => {
                if x.is_exact() {
                    Ok(x.clone())
                } else {
                    Err(Error::Domain(format!(
                        "approximate value {x} in an exact-backend series"
                    )))
                }
            }
            Backend::Approx { precision } => Ok(if x.is_exact() {
                x.to_approx(*precision)
            } else {
                x.clone()
            }),
        }
    }

    pub fn zero(&self, p: u64) -> PadicScalar {
        match self {
            Backend::Exact => PadicScalar::zero(p),
            Backend::Approx { precision } => PadicScalar::approx_zero(p, *precision),
        }
    }

    pub fn one(&self, p: u64) -> PadicScalar {
        self.coerce(&PadicScalar::one(p)).expect("exact one")
    }
}

/// `c_0 + c_1 T + ... + c_N T^N`, the Fourier transform of a distribution on
/// `Z_p` truncated at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    prime: u64,
    backend: Backend,
    coeffs: Vec<PadicScalar>,
    reliable: usize,
}

impl TruncatedSeries {
    pub fn zero(prime: u64, backend: Backend, trunc: usize) -> Self {
        TruncatedSeries {
            prime,
            backend,
            coeffs: vec![backend.zero(prime); trunc + 1],
            reliable: trunc,
        }
    }

    /// The unit `1`, i.e. the Dirac distribution at `0`.
    pub fn one(prime: u64, backend: Backend, trunc: usize) -> Self {
        let mut s = Self::zero(prime, backend, trunc);
        s.coeffs[0] = backend.one(prime);
        s
    }

    /// Builds a series from coefficients `c_0 .. c_N` (length `N + 1`).
    pub fn from_coeffs(prime: u64, backend: Backend, coeffs: Vec<PadicScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ShapeMismatch("a series needs at least c_0".into()));
        }
        let coeffs = coeffs
            .iter()
            .map(|c| {
                if c.prime() != prime {
                    return Err(Error::PrimeMismatch(prime, c.prime()));
                }
                backend.coerce(c)
            })
            .collect::<Result<Vec<_>>>()?;
        let reliable = coeffs.len() - 1;
        Ok(TruncatedSeries {
            prime,
            backend,
            coeffs,
            reliable,
        })
    }

    /// Polynomial with rational coefficients, zero-padded to order `trunc`.
    pub fn from_rationals(
        prime: u64,
        backend: Backend,
        coeffs: &[Rational],
        trunc: usize,
    ) -> Result<Self> {
        if coeffs.len() > trunc + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients exceed truncation order {trunc}",
                coeffs.len()
            )));
        }
        let mut all: Vec<PadicScalar> = coeffs
            .iter()
            .map(|c| PadicScalar::exact(prime, c.clone()))
            .collect();
        all.resize(trunc + 1, PadicScalar::zero(prime));
        Self::from_coeffs(prime, backend, all)
    }

    pub fn from_ints(prime: u64, backend: Backend, coeffs: &[i64], trunc: usize) -> Result<Self> {
        let r: Vec<Rational> = coeffs
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        Self::from_rationals(prime, backend, &r, trunc)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Truncation order `N`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn reliable(&self) -> usize {
        self.reliable
    }

    pub fn coeff(&self, n: usize) -> &PadicScalar {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    /// Lowers the reliable order (never raises it).
    pub fn with_reliable(mut self, reliable: usize) -> Self {
        self.reliable = self.reliable.min(reliable);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True if every coefficient through the reliable order vanishes.
    pub fn vanishes_reliably(&self) -> bool {
        self.coeffs.iter().take(self.reliable + 1).all(|c| c.is_zero())
    }

    /// Index of the first coefficient that is not zero, `None` for zero.
    pub fn t_adic_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Order used for reliability bookkeeping: coefficients below it are
    /// known to vanish.
    fn known_zero_prefix(&self) -> usize {
        let first = self.t_adic_order().unwrap_or(self.trunc() + 1);
        first.min(self.reliable + 1)
    }

    fn scalar(&self, x: &PadicScalar) -> Result<PadicScalar> {
        if x.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime, x.prime()));
        }
        self.backend.coerce(x)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.backend != other.backend {
            return Err(Error::ShapeMismatch(format!(
                "backend {:?} vs {:?}",
                self.backend, other.backend
            )));
        }
        if self.trunc() != other.trunc() {
            return Err(Error::ShapeMismatch(format!(
                "truncation {} vs {}",
                self.trunc(),
                other.trunc()
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&PadicScalar, &PadicScalar) -> PadicScalar,
    ) -> Result<Self> {
        self.check_shape(other)?;
        Ok(TruncatedSeries {
            prime: self.prime,
            backend: self.backend,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
            reliable: self.reliable.min(other.reliable),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, x: &PadicScalar) -> Result<Self> {
        let x = self.scalar(x)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * &x).collect(),
            ..self.clone()
        })
    }

    /// Cauchy product truncated at `N` (convolution of distributions).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let n = self.trunc();
        let mut coeffs = match (exact_numerators(&self.coeffs), exact_numerators(&other.coeffs)) {
            (Some(a), Some(b)) => exact_convolution(self.prime, &a, &b, n),
            _ => self.generic_convolution(other),
        };
        coeffs.truncate(n + 1);
        let reliable = (self.reliable + other.known_zero_prefix())
            .min(other.reliable + self.known_zero_prefix())
            .min(n);
        Ok(TruncatedSeries {
            prime: self.prime,
            backend: self.backend,
            coeffs,
            reliable,
        })
    }

    fn generic_convolution(&self, other: &Self) -> Vec<PadicScalar> {
        let n = self.trunc();
        let mut coeffs = vec![self.backend.zero(self.prime); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        coeffs
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.prime, self.backend, self.trunc());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Fourier transform of the Dirac distribution at `a`: `(1+T)^a`, i.e.
    /// `c_n = binom(a, n)`.
    pub fn dirac(prime: u64, backend: Backend, a: &PadicScalar, trunc: usize) -> Result<Self> {
        if a.prime() != prime {
            return Err(Error::PrimeMismatch(prime, a.prime()));
        }
        let a = backend.coerce(a)?;
        a.require_integral("dirac")?;
        let coeffs = match a.as_exact() {
            Some(r) => binomial_coefficients(r, trunc)
                .into_iter()
                .map(|c| PadicScalar::exact(prime, c))
                .collect(),
            None => (0..=trunc)
                .map(|n| a.binom(n as u32))
                .collect::<Result<Vec<_>>>()?,
        };
        Self::from_coeffs(prime, backend, coeffs)
    }

    /// `log(1+T) = T - T^2/2 + T^3/3 - ...`.
    pub fn log1p(prime: u64, backend: Backend, trunc: usize) -> Self {
        let coeffs = (0..=trunc)
            .map(|n| {
                if n == 0 {
                    PadicScalar::zero(prime)
                } else {
                    let sign = if n % 2 == 1 { 1 } else { -1 };
                    PadicScalar::from_ratio(prime, sign, n as i64)
                }
            })
            .collect();
        Self::from_coeffs(prime, backend, coeffs).expect("well-formed log series")
    }

    /// Translation of the distribution by `b`: `(1+T)^b F`.
    pub fn translate(&self, b: &PadicScalar) -> Result<Self> {
        Self::dirac(self.prime, self.backend, b, self.trunc())?.mul(self)
    }

    /// Action of the Lie generator of `Z_p`: `log(1+T) F`.
    pub fn lie_mult(&self) -> Self {
        Self::log1p(self.prime, self.backend, self.trunc())
            .mul(self)
            .expect("same shape")
    }

    /// Push-forward along multiplication by `b`: `F((1+T)^b - 1)`.
    ///
    /// The inner series has no constant term, so powers are accumulated
    /// incrementally and coefficient `n` only sees `c_0 .. c_n`.
    pub fn pushforward(&self, b: &PadicScalar) -> Result<Self> {
        let n = self.trunc();
        let one = Self::one(self.prime, self.backend, n);
        let inner = Self::dirac(self.prime, self.backend, b, n)?.sub(&one)?;
        let mut power = one;
        let mut acc = power.scale(&self.coeffs[0])?;
        for k in 1..=n {
            power = power.mul(&inner)?;
            acc = acc.add(&power.scale(&self.coeffs[k])?)?;
        }
        acc.reliable = self.reliable;
        Ok(acc)
    }

    /// `(1+T) dF/dT`, the transpose of `f(a) -> a f(a)`.
    ///
    /// `c_{N+1}` is unknown and taken as zero, so the result is reliable one
    /// order less than `F`.
    pub fn delta_op(&self) -> Result<Self> {
        if self.reliable == 0 {
            return Err(Error::OrderExhausted {
                needed: 1,
                available: 0,
            });
        }
        let n = self.trunc();
        let coeffs = (0..=n)
            .map(|k| {
                let here = &self.coeffs[k] * &PadicScalar::from_int(self.prime, k as i64);
                if k < n {
                    let next =
                        &self.coeffs[k + 1] * &PadicScalar::from_int(self.prime, k as i64 + 1);
                    &here + &next
                } else {
                    here
                }
            })
            .collect();
        Ok(TruncatedSeries {
            prime: self.prime,
            backend: self.backend,
            coeffs,
            reliable: self.reliable - 1,
        })
    }

    pub fn delta_pow(&self, k: usize) -> Result<Self> {
        if k > self.reliable {
            return Err(Error::OrderExhausted {
                needed: k,
                available: self.reliable,
            });
        }
        let mut acc = self.clone();
        for _ in 0..k {
            acc = acc.delta_op()?;
        }
        Ok(acc)
    }

    /// `lambda(a^k) = (Delta^k F)(0)`.
    pub fn moment(&self, k: usize) -> Result<PadicScalar> {
        Ok(self.moments(k)?.pop().expect("nonempty"))
    }

    /// Moments `0..=kmax` from a single chain of `Delta` applications.
    /// `(Delta^k F)(0)` only involves `c_0..c_k`, so the working prefix
    /// shrinks by one coefficient per step.
    pub fn moments(&self, kmax: usize) -> Result<Vec<PadicScalar>> {
        if kmax > self.reliable {
            return Err(Error::OrderExhausted {
                needed: kmax,
                available: self.reliable,
            });
        }
        let mut work: Vec<PadicScalar> = self.coeffs[..=kmax].to_vec();
        let mut out = Vec::with_capacity(kmax + 1);
        for step in 0..=kmax {
            out.push(work[0].clone());
            let len = kmax - step;
            work = (0..len)
                .map(|j| {
                    let here = &work[j] * &PadicScalar::from_int(self.prime, j as i64);
                    let next = &work[j + 1] * &PadicScalar::from_int(self.prime, j as i64 + 1);
                    &here + &next
                })
                .collect();
        }
        Ok(out)
    }

    /// Gauss norm on the disk of radius `p^(-s)` in `log_p` scale:
    /// `max_n (-v(c_n) - n s)`. Coefficients that are zero to precision are
    /// skipped.
    pub fn gauss_norm(&self, s: Rational64) -> Result<Rational64> {
        if s <= Rational64::zero() {
            return Err(Error::Domain(format!(
                "radius p^(-{s}) is not below 1"
            )));
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(n, c)| match c.valuation() {
                Valuation::Finite(v) => Some(Rational64::from_integer(-v) - s * n as i64),
                _ => None,
            })
            .max()
            .ok_or_else(|| Error::Domain("Gauss norm of the zero series".into()))
    }

    /// `sum_k b_k log(1+T)^k F` for `k <= min(K, N)`; higher terms vanish at
    /// this truncation because `log(1+T)^k` has `T`-adic order `k`.
    pub fn entire_series_apply(&self, b: &[PadicScalar]) -> Result<Self> {
        let mut term = self.clone();
        let mut acc = Self::zero(self.prime, self.backend, self.trunc());
        for (k, bk) in b.iter().enumerate() {
            if k > self.trunc() {
                break;
            }
            if k > 0 {
                term = term.lie_mult();
            }
            acc = acc.add(&term.scale(bk)?)?;
        }
        Ok(acc)
    }

    /// `T`-adic division `self / divisor`. Fails with a domain error when
    /// `T^ord(divisor)` does not divide `self`.
    pub fn t_adic_divide(&self, divisor: &Self) -> Result<Self> {
        self.check_shape(divisor)?;
        let n = self.trunc();
        let k = divisor
            .t_adic_order()
            .filter(|&k| k <= divisor.reliable)
            .ok_or_else(|| Error::Domain("division by a series with no known unit term".into()))?;
        if let Some(i) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::Domain(format!(
                "not divisible: coefficient {i} is {} but the divisor has order {k}",
                self.coeffs[i]
            )));
        }
        if self.reliable < k {
            return Err(Error::OrderExhausted {
                needed: k,
                available: self.reliable,
            });
        }
        let shift = |s: &Self| {
            let mut c: Vec<PadicScalar> = s.coeffs[k..].to_vec();
            c.resize(n + 1, self.backend.zero(self.prime));
            c
        };
        let num = shift(self);
        let den = shift(divisor);
        // q = num / den by forward substitution
        let mut q: Vec<PadicScalar> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = num[i].clone();
            for j in 1..=i {
                acc = &acc - &(&den[j] * &q[i - j]);
            }
            q.push(acc.checked_div(&den[0])?);
        }
        Ok(TruncatedSeries {
            prime: self.prime,
            backend: self.backend,
            coeffs: q,
            reliable: (self.reliable - k).min(divisor.reliable - k),
        })
    }

    /// Coefficientwise equality for indices `0..=order`.
    pub fn agrees_through(&self, other: &Self, order: usize) -> bool {
        order <= self.trunc()
            && order <= other.trunc()
            && (0..=order).all(|i| self.coeffs[i] == other.coeffs[i])
    }

    /// Coefficientwise equality over the jointly reliable range.
    pub fn agrees_reliably(&self, other: &Self) -> bool {
        self.prime == other.prime
            && self.agrees_through(other, self.reliable.min(other.reliable))
    }

    /// True if every coefficient of this (approximate) series contains the
    /// corresponding coefficient of `exact`, over the jointly reliable range.
    pub fn contains_exact(&self, exact: &Self) -> bool {
        let order = self.reliable.min(exact.reliable).min(self.trunc()).min(exact.trunc());
        (0..=order).all(|i| match exact.coeffs[i].as_exact() {
            Some(r) => self.coeffs[i].agrees_with(r),
            None => false,
        })
    }

    /// Re-truncates at `trunc`, padding with zeros (which are not reliable).
    pub fn with_trunc(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc + 1, self.backend.zero(self.prime));
        TruncatedSeries {
            prime: self.prime,
            backend: self.backend,
            coeffs,
            reliable: self.reliable.min(trunc),
        }
    }

    /// Same coefficients on the approximate backend with precision `m`.
    pub fn to_approx(&self, m: i64) -> Self {
        TruncatedSeries {
            prime: self.prime,
            backend: Backend::Approx { precision: m },
            coeffs: self.coeffs.iter().map(|c| c.to_approx(m)).collect(),
            reliable: self.reliable,
        }
    }

    /// Serializes in the `PADIC-SERIES v1` text format.
    pub fn to_text(&self) -> String {
        let prec = match self.backend {
            Backend::Exact => "inf".to_string(),
            Backend::Approx { precision } => precision.to_string(),
        };
        let mut out = format!(
            "PADIC-SERIES v1 p={} backend={} prec={} trunc={}\n",
            self.prime,
            self.backend.name(),
            prec,
            self.trunc()
        );
        if self.reliable < self.trunc() {
            // optional field, only present when derivatives lowered the horizon
            out.insert_str(out.len() - 1, &format!(" reliable={}", self.reliable));
        }
        let implicit = self.backend.zero(self.prime);
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_identical(&implicit) {
                out.push_str(&format!("{n}: {}\n", c.render()));
            }
        }
        out
    }

    /// Parses the `PADIC-SERIES v1` text format. Missing indices are zero.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty series file".into()))?;
        let (prime, backend, trunc, reliable) = parse_header(header)?;
        let mut coeffs = vec![backend.zero(prime); trunc + 1];
        let mut seen = vec![false; trunc + 1];
        for line in lines {
            let (idx, val) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("malformed line `{line}`")))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in `{line}`")))?;
            if idx > trunc {
                return Err(Error::Parse(format!("index {idx} beyond trunc={trunc}")));
            }
            if seen[idx] {
                return Err(Error::Parse(format!("duplicate index {idx}")));
            }
            seen[idx] = true;
            let x = PadicScalar::parse(prime, val)?;
            coeffs[idx] = backend
                .coerce(&x)
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let f = Self::from_coeffs(prime, backend, coeffs)?;
        Ok(match reliable {
            Some(r) => f.with_reliable(r),
            None => f,
        })
    }
}

fn parse_header(header: &str) -> Result<(u64, Backend, usize, Option<usize>)> {
    let bad = || Error::Parse(format!("malformed series header `{header}`"));
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if !(6..=7).contains(&tokens.len()) || tokens[0] != "PADIC-SERIES" || tokens[1] != "v1" {
        return Err(bad());
    }
    let field = |tok: &str, key: &str| -> Result<String> {
        tok.strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .map(str::to_string)
            .ok_or_else(bad)
    };
    let prime: u64 = field(tokens[2], "p")?.parse().map_err(|_| bad())?;
    if prime < 2 {
        return Err(bad());
    }
    let backend_name = field(tokens[3], "backend")?;
    let prec = field(tokens[4], "prec")?;
    let trunc: usize = field(tokens[5], "trunc")?.parse().map_err(|_| bad())?;
    let backend = match backend_name.as_str() {
        "exact" => Backend::Exact,
        "approx" => Backend::Approx {
            precision: prec.parse().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    let reliable = match tokens.get(6) {
        None => None,
        Some(tok) => {
            let r: usize = field(tok, "reliable")?.parse().map_err(|_| bad())?;
            if r >= trunc {
                return Err(bad());
            }
            Some(r)
        }
    };
    Ok((prime, backend, trunc, reliable))
}

/// Dimension of the kernel of `F -> translate(b, F) - F` on series of order
/// `trunc`. The images are computed at order `trunc + 1`, so the map is
/// represented without truncation loss; the rank comes from Gaussian
/// elimination (pivoting on minimal valuation for approximate entries).
pub fn translation_kernel_dim(
    prime: u64,
    backend: Backend,
    b: &PadicScalar,
    trunc: usize,
) -> Result<usize> {
    let mut columns = Vec::with_capacity(trunc + 1);
    for j in 0..=trunc {
        let mut basis = TruncatedSeries::zero(prime, backend, trunc + 1);
        basis.coeffs[j] = backend.one(prime);
        let image = basis.translate(b)?.sub(&basis)?;
        columns.push(image.coeffs);
    }
    Ok(columns.len() - rank(columns)?)
}

/// Rank of the matrix with the given columns.
pub fn rank(mut columns: Vec<Vec<PadicScalar>>) -> Result<usize> {
    let rows = columns.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..columns.len() {
        let pivot = (rank..rows)
            .filter(|&r| !columns[col][r].is_zero())
            .min_by_key(|&r| columns[col][r].valuation().lower_bound());
        let Some(pr) = pivot else { continue };
        for c in columns.iter_mut() {
            c.swap(rank, pr);
        }
        let pv = columns[col][rank].clone();
        for other in col + 1..columns.len() {
            let factor = columns[other][rank].checked_div(&pv)?;
            if factor.is_zero() && factor.is_exact() {
                continue;
            }
            for r in rank..rows {
                let delta = &factor * &columns[col][r];
                columns[other][r] = &columns[other][r] - &delta;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// `(1+T)^a` coefficients straight from the rational binomial, independent of
/// the scalar layer; handy for oracles.
pub fn binomial_coefficients(a: &Rational, trunc: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(trunc + 1);
    let mut c = Rational::one();
    for n in 0..=trunc {
        out.push(c.clone());
        let n = Rational::from_integer(BigInt::from(n));
        c = c * (a - &n) / (n + Rational::one());
    }
    out
}

/// Common-denominator form `(numerators, denominator)` of exact coefficients.
fn exact_numerators(coeffs: &[PadicScalar]) -> Option<(Vec<BigInt>, BigInt)> {
    let mut den = BigInt::one();
    for c in coeffs {
        let r = c.as_exact()?;
        if !r.is_zero() {
            den = den.lcm(r.denom());
        }
    }
    let nums = coeffs
        .iter()
        .map(|c| {
            let r = c.as_exact().expect("checked above");
            r.numer() * (&den / r.denom())
        })
        .collect();
    Some((nums, den))
}

/// Integer convolution followed by one normalization per coefficient.
fn exact_convolution(
    prime: u64,
    a: &(Vec<BigInt>, BigInt),
    b: &(Vec<BigInt>, BigInt),
    n: usize,
) -> Vec<PadicScalar> {
    let den = &a.1 * &b.1;
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, x) in a.0.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.0.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                acc[i + j] += x * y;
            }
        }
    }
    acc.into_iter()
        .map(|num| PadicScalar::exact(prime, Rational::new(num, den.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: Backend = Backend::Exact;

    fn int(p: u64, n: i64) -> PadicScalar {
        PadicScalar::from_int(p, n)
    }

    fn poly(p: u64, c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(p, EX, c, n).unwrap()
    }

    #[test]
    fn dirac_examples() {
        let p = 5;
        assert_eq!(
            TruncatedSeries::dirac(p, EX, &int(p, 0), 6).unwrap(),
            TruncatedSeries::one(p, EX, 6)
        );
        assert_eq!(
            TruncatedSeries::dirac(p, EX, &int(p, 1), 6).unwrap(),
            poly(p, &[1, 1], 6)
        );
        let prod = TruncatedSeries::dirac(p, EX, &int(p, 2), 16)
            .unwrap()
            .mul(&TruncatedSeries::dirac(p, EX, &int(p, 3), 16).unwrap())
            .unwrap();
        assert_eq!(prod, TruncatedSeries::dirac(p, EX, &int(p, 5), 16).unwrap());
        assert!(TruncatedSeries::dirac(p, EX, &PadicScalar::from_ratio(p, 1, 5), 4).is_err());
    }

    #[test]
    fn mul_examples() {
        let p = 3;
        let f = poly(p, &[2, -1, 7], 8);
        assert_eq!(f.mul(&TruncatedSeries::one(p, EX, 8)).unwrap(), f);
        let x = poly(p, &[1, 1], 8);
        assert_eq!(x.mul(&x).unwrap(), poly(p, &[1, 2, 1], 8));
        assert!(x.mul(&poly(p, &[1], 9)).is_err());
        assert!(x.mul(&poly(5, &[1], 8)).is_err());
    }

    #[test]
    fn translate_examples() {
        let p = 7;
        let f = poly(p, &[3, 0, 2], 10);
        assert_eq!(f.translate(&int(p, 0)).unwrap(), f);
        assert_eq!(
            TruncatedSeries::one(p, EX, 10).translate(&int(p, 1)).unwrap(),
            poly(p, &[1, 1], 10)
        );
        let twice = f.translate(&int(p, 4)).unwrap().translate(&int(p, -9)).unwrap();
        assert_eq!(twice, f.translate(&int(p, -5)).unwrap());
    }

    #[test]
    fn log1p_and_lie_mult() {
        let p = 5;
        let l = TruncatedSeries::log1p(p, EX, 6);
        let expected = [0, 1, -1, 1, -1, 1, -1];
        for (n, s) in expected.iter().enumerate() {
            let want = if n == 0 {
                PadicScalar::zero(p)
            } else {
                PadicScalar::from_ratio(p, *s, n as i64)
            };
            assert_eq!(l.coeff(n), &want);
        }
        assert_eq!(TruncatedSeries::one(p, EX, 6).lie_mult(), l);
        assert!(TruncatedSeries::zero(p, EX, 6).lie_mult().is_zero());
    }

    #[test]
    fn pushforward_examples() {
        let p = 5;
        let f = poly(p, &[4, -2, 0, 9, 1], 12);
        assert_eq!(f.pushforward(&int(p, 1)).unwrap(), f);
        assert_eq!(f.pushforward(&int(p, 0)).unwrap(), poly(p, &[4], 12));
        assert!(f.pushforward(&PadicScalar::from_ratio(p, 1, 5)).is_err());
    }

    #[test]
    fn delta_examples() {
        let p = 3;
        let n = 16;
        assert!(TruncatedSeries::one(p, EX, n).delta_op().unwrap().is_zero());
        assert_eq!(poly(p, &[0, 1], n).delta_op().unwrap(), poly(p, &[1, 1], n).with_reliable(n - 1));
        for a in [-4, 0, 3, 11] {
            let d = TruncatedSeries::dirac(p, EX, &int(p, a), n).unwrap();
            let lhs = d.delta_op().unwrap();
            assert_eq!(lhs.reliable(), n - 1);
            assert!(lhs.agrees_reliably(&d.scale(&int(p, a)).unwrap()));
        }
    }

    #[test]
    fn delta_of_log_is_one() {
        let p = 2;
        let d = TruncatedSeries::log1p(p, EX, 20).delta_op().unwrap();
        assert!(d.agrees_reliably(&TruncatedSeries::one(p, EX, 20)));
    }

    #[test]
    fn log_times_delta_keeps_full_reliability() {
        let p = 5;
        let f = poly(p, &[1, 2, 3], 10);
        let g = f.delta_op().unwrap().lie_mult();
        assert_eq!(g.reliable(), 10);
    }

    #[test]
    fn moment_examples() {
        let p = 5;
        let n = 12;
        assert_eq!(TruncatedSeries::one(p, EX, n).moment(0).unwrap(), int(p, 1));
        let d = TruncatedSeries::dirac(p, EX, &int(p, 3), n).unwrap();
        for k in 0..=n {
            assert_eq!(d.moment(k).unwrap(), int(p, 3i64.pow(k as u32)));
        }
        assert!(matches!(d.moment(n + 1), Err(Error::OrderExhausted { .. })));
        let l = TruncatedSeries::one(p, EX, n).lie_mult();
        assert_eq!(l.moment(1).unwrap(), int(p, 1));
    }

    #[test]
    fn gauss_norm_examples() {
        let p = 3;
        let f = poly(p, &[1, 1], 8);
        assert_eq!(f.gauss_norm(Rational64::new(1, 2)).unwrap(), Rational64::zero());
        // 9 + T: max(-2, -s)
        let g = poly(p, &[9, 1], 8);
        assert_eq!(g.gauss_norm(Rational64::new(5, 2)).unwrap(), Rational64::from_integer(-2));
        assert_eq!(g.gauss_norm(Rational64::new(1, 2)).unwrap(), Rational64::new(-1, 2));
        assert!(g.gauss_norm(Rational64::zero()).is_err());
        assert!(TruncatedSeries::zero(p, EX, 4).gauss_norm(Rational64::one()).is_err());
    }

    #[test]
    fn entire_series_examples() {
        let p = 5;
        let f = poly(p, &[2, 1, 3], 10);
        assert_eq!(f.entire_series_apply(&[int(p, 1)]).unwrap(), f);
        assert_eq!(
            f.entire_series_apply(&[int(p, 0), int(p, 1)]).unwrap(),
            f.lie_mult()
        );
    }

    #[test]
    fn t_adic_division() {
        let p = 5;
        let n = 10;
        let f = poly(p, &[1, 4, 0, 2], n);
        let l = TruncatedSeries::log1p(p, EX, n);
        let g = f.mul(&l).unwrap();
        let q = g.t_adic_divide(&l).unwrap();
        assert!(q.agrees_reliably(&f));
        assert_eq!(q.reliable(), n - 1);
        assert!(f.t_adic_divide(&l).is_err());
    }

    #[test]
    fn haar_kernel_is_trivial() {
        for backend in [EX, Backend::Approx { precision: 6 }] {
            assert_eq!(translation_kernel_dim(3, backend, &int(3, 1), 20).unwrap(), 0);
        }
        assert_eq!(translation_kernel_dim(3, EX, &int(3, 0), 5).unwrap(), 6);
    }

    #[test]
    fn text_format_layout() {
        let p = 5;
        let f = poly(p, &[1, 0, -3], 4);
        assert_eq!(
            f.to_text(),
            "PADIC-SERIES v1 p=5 backend=exact prec=inf trunc=4\n0: 1/1\n2: -3/1\n"
        );
        let g = f.to_approx(3);
        assert_eq!(
            g.to_text(),
            "PADIC-SERIES v1 p=5 backend=approx prec=3 trunc=4\n0: 0;1;3\n2: 0;122;3\n"
        );
        assert_eq!(TruncatedSeries::from_text(&g.to_text()).unwrap().to_text(), g.to_text());
    }

    #[test]
    fn text_format_errors() {
        for bad in [
            "",
            "PADIC-SERIES v2 p=5 backend=exact prec=inf trunc=4\n",
            "PADIC-SERIES v1 p=5 backend=fuzzy prec=inf trunc=4\n",
            "PADIC-SERIES v1 p=5 backend=exact prec=inf trunc=4\n7: 1/1\n",
            "PADIC-SERIES v1 p=5 backend=exact prec=inf trunc=4\n1: 1/1\n1: 2/1\n",
            "PADIC-SERIES v1 p=5 backend=exact prec=inf trunc=4\n1 1/1\n",
            "PADIC-SERIES v1 p=5 backend=exact prec=inf trunc=4\n1: 0;1;3\n",
        ] {
            assert!(
                matches!(TruncatedSeries::from_text(bad), Err(Error::Parse(_))),
                "{bad:?}"
            );
        }
    }
}
