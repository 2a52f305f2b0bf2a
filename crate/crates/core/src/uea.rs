//! `U(gl_2)` in the PBW basis `up^a h^b e^c um^d`.
//!
//! The generators are the matrices `up = E21`, `um = E12`, `h = diag(1,-1)`
//! and `e = I`. Their brackets are not hard-coded: they are read off from
//! literal 2x2 matrix commutators, which fixes
//! `[up, um] = -h`, `[h, up] = -2 up`, `[h, um] = 2 um`, `e` central.
//! Products are straightened by moving one generator at a time into place,
//! memoized per (monomial, generator).

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Up,
    H,
    E,
    Um,
}

impl Generator {
    /// PBW order.
    pub const ALL: [Generator; 4] = [Generator::Up, Generator::H, Generator::E, Generator::Um];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Up => "up",
            Generator::H => "h",
            Generator::E => "e",
            Generator::Um => "um",
        }
    }

    /// The 2x2 matrix of the generator, rows first.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Generator::Up => [[0, 0], [1, 0]],
            Generator::Um => [[0, 1], [0, 0]],
            Generator::H => [[1, 0], [0, -1]],
            Generator::E => [[1, 0], [0, 1]],
        }
    }
}

/// Exponents of `(up, h, e, um)`.
pub type Monomial = [u32; 4];

type Mat = [[Rational; 2]; 2];

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn mat_of(g: Generator) -> Mat {
    g.matrix().map(|row| row.map(q))
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let cell = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]
}

/// Coordinates of a 2x2 matrix in the basis `(up, h, e, um)`.
pub fn decompose(m: &[[Rational; 2]; 2]) -> [Rational; 4] {
    let two = q(2);
    [
        m[1][0].clone(),
        (&m[0][0] - &m[1][1]) / &two,
        (&m[0][0] + &m[1][1]) / &two,
        m[0][1].clone(),
    ]
}

/// `[x, y]` in the basis `(up, h, e, um)`, via the matrix commutator.
pub fn structure_constants(x: Generator, y: Generator) -> [Rational; 4] {
    let (a, b) = (mat_of(x), mat_of(y));
    let ab = mat_mul(&a, &b);
    let ba = mat_mul(&b, &a);
    let diff = [
        [&ab[0][0] - &ba[0][0], &ab[0][1] - &ba[0][1]],
        [&ab[1][0] - &ba[1][0], &ab[1][1] - &ba[1][1]],
    ];
    decompose(&diff)
}

/// Element of `U(gl_2)`: nonzero rational coefficients on PBW monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PBWElement {
    terms: BTreeMap<Monomial, Rational>,
}

thread_local! {
    static MUL_GEN_CACHE: RefCell<HashMap<(Monomial, Generator), PBWElement>> =
        RefCell::new(HashMap::new());
}

impl PBWElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0; 4], Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    pub fn generator(g: Generator) -> Self {
        let mut m = [0; 4];
        m[g.index()] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn up() -> Self {
        Self::generator(Generator::Up)
    }
    pub fn h() -> Self {
        Self::generator(Generator::H)
    }
    pub fn e() -> Self {
        Self::generator(Generator::E)
    }
    pub fn um() -> Self {
        Self::generator(Generator::Um)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (mb, cb) in &other.terms {
            let mut acc = self.scale(cb);
            for g in Generator::ALL {
                for _ in 0..mb[g.index()] {
                    acc = acc.mul_generator(g);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn mul_generator(&self, g: Generator) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out = out.add(&monomial_times(*m, g).scale(c));
        }
        out
    }

    /// The anti-automorphism extending `x -> -x` on `gl_2`.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let total: u32 = m.iter().sum();
            let sign = if total % 2 == 0 { 1 } else { -1 };
            let mut acc = Self::scalar(c * q(sign));
            for g in Generator::ALL.iter().rev() {
                for _ in 0..m[g.index()] {
                    acc = acc.mul_generator(*g);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Evaluates the element in a representation: `gen(g, v)` applies a
    /// generator, `add`/`scale` combine results. Monomials act right to left.
    pub fn evaluate<V: Clone>(
        &self,
        v: &V,
        zero: V,
        gen: &dyn Fn(Generator, &V) -> Result<V>,
        add: &dyn Fn(&V, &V) -> Result<V>,
        scale: &dyn Fn(&Rational, &V) -> Result<V>,
    ) -> Result<V> {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut w = v.clone();
            for g in Generator::ALL.iter().rev() {
                for _ in 0..m[g.index()] {
                    w = gen(*g, &w)?;
                }
            }
            acc = add(&acc, &scale(c, &w)?)?;
        }
        Ok(acc)
    }

    /// Text form `q up^a h^b e^c um^d + ...`; `0` for the zero element.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut s = c.to_string();
                for g in Generator::ALL {
                    match m[g.index()] {
                        0 => {}
                        1 => {
                            s.push(' ');
                            s.push_str(g.name());
                        }
                        k => s.push_str(&format!(" {}^{k}", g.name())),
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the text form. Factors may appear in any order and are
    /// multiplied out left to right, so any word is accepted.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in s.split(" + ") {
            let mut tokens = term.split_whitespace();
            let coeff = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("empty term in `{s}`")))?;
            let coeff: Rational = coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{coeff}`")))?;
            let mut acc = Self::scalar(coeff);
            for tok in tokens {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
                    ),
                    None => (tok, 1),
                };
                let g = Generator::ALL
                    .into_iter()
                    .find(|g| g.name() == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
                for _ in 0..exp {
                    acc = acc.mul_generator(g);
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Normal form of `m * g` for a PBW monomial `m`.
fn monomial_times(m: Monomial, g: Generator) -> PBWElement {
    if let Some(hit) = MUL_GEN_CACHE.with(|c| c.borrow().get(&(m, g)).cloned()) {
        return hit;
    }
    let last = Generator::ALL.iter().rev().find(|x| m[x.index()] > 0).copied();
    let result = match last {
        Some(x) if x > g => {
            // m' x g = (m' g) x + m' [x, g]
            let mut prefix = m;
            prefix[x.index()] -= 1;
            let mut out = monomial_times(prefix, g).mul_generator(x);
            for (k, c) in Generator::ALL.iter().zip(structure_constants(x, g)) {
                if !c.is_zero() {
                    out = out.add(&monomial_times(prefix, *k).scale(&c));
                }
            }
            out
        }
        _ => {
            let mut next = m;
            next[g.index()] += 1;
            PBWElement::monomial(next, Rational::one())
        }
    };
    MUL_GEN_CACHE.with(|c| c.borrow_mut().insert((m, g), result.clone()));
    result
}

/// `1/2 h^2 + up um + um up`.
pub fn casimir() -> PBWElement {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    PBWElement::h()
        .pow(2)
        .scale(&half)
        .add(&PBWElement::up().mul(&PBWElement::um()))
        .add(&PBWElement::um().mul(&PBWElement::up()))
}

/// `[up, um^(1-m)] - (m-1) um^(-m) (h - m)`; zero for every `m <= 0`.
pub fn ad_identity_check(m: i64) -> Result<PBWElement> {
    if m > 0 {
        return Err(Error::Domain(format!("ad identity needs m <= 0, got {m}")));
    }
    let d = (1 - m) as u32;
    let lhs = PBWElement::up().commutator(&PBWElement::um().pow(d));
    let rhs = PBWElement::um()
        .pow(d - 1)
        .mul(&PBWElement::h().sub(&PBWElement::scalar(q(m))))
        .scale(&q(m - 1));
    Ok(lhs.sub(&rhs))
}

/// All PBW monomials of total degree at most `deg`.
pub fn monomials_up_to(deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=deg {
        for b in 0..=deg - a {
            for c in 0..=deg - a - b {
                for d in 0..=deg - a - b - c {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: Generator) -> PBWElement {
        PBWElement::generator(x)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn brackets_from_matrices() {
        assert_eq!(
            g(Generator::Up).commutator(&g(Generator::Um)),
            PBWElement::h().scale(&q(-1))
        );
        assert_eq!(
            g(Generator::H).commutator(&g(Generator::Up)),
            PBWElement::up().scale(&q(-2))
        );
        assert_eq!(
            g(Generator::H).commutator(&g(Generator::Um)),
            PBWElement::um().scale(&q(2))
        );
        for x in Generator::ALL {
            assert!(PBWElement::e().commutator(&g(x)).is_zero());
        }
    }

    #[test]
    fn unit_is_neutral() {
        let x = PBWElement::parse("3 up h + -1/2 um^2").unwrap();
        assert_eq!(PBWElement::one().mul(&x), x);
        assert_eq!(x.mul(&PBWElement::one()), x);
    }

    #[test]
    fn casimir_normal_form() {
        let c = casimir();
        assert_eq!(c.coeff(&[0, 2, 0, 0]), r(1, 2));
        assert_eq!(c.coeff(&[1, 0, 0, 1]), q(2));
        assert_eq!(c.coeff(&[0, 1, 0, 0]), q(1));
        assert_eq!(c.terms().count(), 3);
        for x in Generator::ALL {
            assert!(c.commutator(&g(x)).is_zero());
        }
    }

    #[test]
    fn ad_identity_vanishes() {
        for m in [0, -1, -2, -3, -5] {
            assert!(ad_identity_check(m).unwrap().is_zero(), "m = {m}");
        }
        assert!(ad_identity_check(1).is_err());
    }

    #[test]
    fn straightening_example() {
        // um^2 up = up um^2 + 2 um (h + 1)
        let lhs = PBWElement::um().pow(2).mul(&PBWElement::up());
        let rhs = PBWElement::up()
            .mul(&PBWElement::um().pow(2))
            .add(&PBWElement::um().mul(&PBWElement::h().add(&PBWElement::one())).scale(&q(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn render_parse_round_trip() {
        let c = casimir();
        assert_eq!(c.render(), "1 h + 1/2 h^2 + 2 up um");
        assert_eq!(PBWElement::parse(&c.render()).unwrap(), c);
        assert_eq!(PBWElement::zero().render(), "0");
        assert!(PBWElement::parse("1 x").is_err());
        assert!(PBWElement::parse("a h").is_err());
        // words in non-normal order are straightened
        assert_eq!(
            PBWElement::parse("1 um up").unwrap(),
            PBWElement::parse("1 up um + 1 h").unwrap()
        );
    }

    #[test]
    fn antipode_is_an_anti_involution() {
        let x = PBWElement::parse("2 up h + 1 um").unwrap();
        let y = PBWElement::parse("1 h um + -3 e").unwrap();
        assert_eq!(x.antipode().antipode(), x);
        assert_eq!(x.mul(&y).antipode(), y.antipode().mul(&x.antipode()));
        assert_eq!(PBWElement::up().antipode(), PBWElement::up().scale(&q(-1)));
    }
}
