use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;

use padicrep_core::newton::{self, NewtonPolygon};
use padicrep_core::padic::Valuation;
use padicrep_core::{Backend, PadicScalar, Rational, TruncatedSeries};

const PRIMES: [u64; 3] = [2, 3, 5];

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-5000i64..5000, 1i64..400).prop_map(|(n, d)| rat(n, d))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

fn val(x: &PadicScalar) -> Option<i64> {
    match x.valuation() {
        Valuation::Finite(v) => Some(v),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![Just(Op::Add), Just(Op::Sub), Just(Op::Mul), Just(Op::Div)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ultrametric(p in prime(), a in rational(), b in rational()) {
        let (x, y) = (PadicScalar::exact(p, a), PadicScalar::exact(p, b));
        let s = &x + &y;
        if let (Some(va), Some(vb)) = (val(&x), val(&y)) {
            if let Some(vs) = val(&s) {
                prop_assert!(vs >= va.min(vb));
            }
            if va != vb {
                prop_assert_eq!(val(&s), Some(va.min(vb)));
            }
        }
    }

    #[test]
    fn exact_ring_laws(p in prime(), a in rational(), b in rational(), c in rational()) {
        let (x, y, z) = (PadicScalar::exact(p, a), PadicScalar::exact(p, b), PadicScalar::exact(p, c));
        prop_assert!((&(&x * &y) * &z).is_identical(&(&x * &(&y * &z))));
        prop_assert!((&x * &(&y + &z)).is_identical(&(&(&x * &y) + &(&x * &z))));
        prop_assert!((&x + &y).is_identical(&(&y + &x)));
    }

    #[test]
    fn approximate_ring_laws_to_precision(
        p in prime(), a in rational(), b in rational(), c in rational(), m in 4i64..30,
    ) {
        let (xa, ya, za) = (
            PadicScalar::exact(p, a.clone()).to_approx(m),
            PadicScalar::exact(p, b.clone()).to_approx(m),
            PadicScalar::exact(p, c.clone()).to_approx(m),
        );
        let lhs = &xa * &(&ya + &za);
        let rhs = &(&xa * &ya) + &(&xa * &za);
        let exact = &a * (&b + &c);
        prop_assert!(lhs.agrees_with(&exact));
        prop_assert!(rhs.agrees_with(&exact));
        prop_assert!(lhs == rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Approximate results always contain the exact answer.
    #[test]
    fn approximate_chains_agree_with_exact(
        p in prime(),
        m in 4i64..40,
        start in rational(),
        steps in prop::collection::vec((op(), rational()), 10),
    ) {
        let mut exact = start.clone();
        let mut approx = PadicScalar::exact(p, start).to_approx(m);
        for (o, r) in steps {
            let operand = PadicScalar::exact(p, r.clone()).to_approx(m);
            let next = match o {
                Op::Add => approx.checked_add(&operand).map(|v| (v, &exact + &r)),
                Op::Sub => approx.checked_sub(&operand).map(|v| (v, &exact - &r)),
                Op::Mul => approx.checked_mul(&operand).map(|v| (v, &exact * &r)),
                Op::Div => {
                    if r.is_zero() {
                        continue;
                    }
                    approx.checked_div(&operand).map(|v| (v, &exact / &r))
                }
            };
            match next {
                Ok((a, e)) => {
                    prop_assert!(a.agrees_with(&e), "{} vs {}", a.render(), e);
                    approx = a;
                    exact = e;
                }
                // precision exhausted: a refusal, never a wrong answer
                Err(err) => {
                    prop_assert_eq!(err.kind(), padicrep_core::ErrorKind::Precision);
                    break;
                }
            }
        }
    }
}

fn series(p: u64, backend: Backend, coeffs: Vec<(i64, i64)>, trunc: usize) -> TruncatedSeries {
    let c: Vec<Rational> = coeffs.into_iter().map(|(n, d)| rat(n, d)).collect();
    let s = TruncatedSeries::from_rationals(p, Backend::Exact, &c[..c.len().min(trunc + 1)], trunc).unwrap();
    match backend {
        Backend::Exact => s,
        Backend::Approx { precision } => s.to_approx(precision),
    }
}

fn coeff_list() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-200i64..200, 1i64..30), 1..20)
}

fn int_list(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip_is_bit_exact(
        p in prime(), coeffs in coeff_list(), trunc in 1usize..24,
        approx in any::<bool>(), m in 4i64..30, drop in 0usize..3,
    ) {
        let backend = if approx { Backend::Approx { precision: m } } else { Backend::Exact };
        let f = series(p, backend, coeffs, trunc);
        let f = f.clone().with_reliable(f.reliable().saturating_sub(drop));
        let text = f.to_text();
        let back = TruncatedSeries::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.reliable(), f.reliable());
        prop_assert!(back.coeffs().iter().zip(f.coeffs()).all(|(a, b)| a.is_identical(b)));
    }

    #[test]
    fn series_ring_axioms(p in prime(), a in int_list(1..17), b in int_list(1..17), c in int_list(1..17)) {
        let n = 16;
        let mk = |v: &[i64]| TruncatedSeries::from_ints(p, Backend::Exact, v, n).unwrap();
        let (f, g, h) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&TruncatedSeries::one(p, Backend::Exact, n)).unwrap(), f.clone());
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn dirac_group_law_and_translation_action(p in prime(), a in -10_000i64..10_000, b in -10_000i64..10_000, f in int_list(1..17)) {
        let n = 16;
        let s = |x: i64| PadicScalar::from_int(p, x);
        let d = |x: i64| TruncatedSeries::dirac(p, Backend::Exact, &s(x), n).unwrap();
        prop_assert_eq!(d(a).mul(&d(b)).unwrap(), d(a + b));
        let f = TruncatedSeries::from_ints(p, Backend::Exact, &f, n).unwrap();
        prop_assert_eq!(
            f.translate(&s(a)).unwrap().translate(&s(b)).unwrap(),
            f.translate(&s(a + b)).unwrap()
        );
    }

    #[test]
    fn approximate_series_contain_exact_products(
        p in prime(), a in coeff_list(), b in coeff_list(), m in 6i64..30,
    ) {
        let n = 12;
        let (fe, ge) = (series(p, Backend::Exact, a, n), series(p, Backend::Exact, b, n));
        let prod = fe.to_approx(m).mul(&ge.to_approx(m)).unwrap();
        prop_assert!(prod.contains_exact(&fe.mul(&ge).unwrap()));
        let log = TruncatedSeries::log1p(p, Backend::Approx { precision: m }, n);
        let lm = fe.to_approx(m).mul(&log).unwrap();
        prop_assert!(lm.contains_exact(&fe.lie_mult()));
    }
}

/// Random polynomial `sum p^e_i u_i T^i` with nonzero constant and leading terms.
fn padic_poly(p: u64) -> impl Strategy<Value = Vec<i64>> {
    let unit = move || (1i64..(p as i64)).prop_union(-(p as i64 - 1)..0);
    prop::collection::vec((0u32..4, unit(), any::<bool>()), 2..6).prop_map(move |terms| {
        let last = terms.len() - 1;
        terms
            .into_iter()
            .enumerate()
            .map(|(i, (e, u, keep))| {
                if keep || i == 0 || i == last {
                    (p as i64).pow(e) * u
                } else {
                    0
                }
            })
            .collect()
    })
}

/// Certified zero counts with positive valuation.
fn certified_counts(poly: &NewtonPolygon) -> Vec<(Rational64, usize)> {
    newton::counts_of(poly)
        .into_iter()
        .filter(|c| c.certified && c.valuation > Rational64::zero())
        .map(|c| (c.valuation, c.multiplicity))
        .collect()
}

fn all_positive_certified(poly: &NewtonPolygon) -> bool {
    newton::counts_of(poly)
        .iter()
        .filter(|c| c.valuation > Rational64::zero())
        .all(|c| c.certified)
}

fn count_at(counts: &[(Rational64, usize)], v: Rational64) -> usize {
    counts.iter().filter(|c| c.0 == v).map(|c| c.1).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn polygon_additivity(p in prime(), a in padic_poly(2), b in padic_poly(3)) {
        let n = 16;
        let f = TruncatedSeries::from_ints(p, Backend::Exact, &a, n).unwrap();
        let g = TruncatedSeries::from_ints(p, Backend::Exact, &b, n).unwrap();
        let (pf, pg) = (newton::polygon(&f).unwrap(), newton::polygon(&g).unwrap());
        let pfg = newton::polygon(&f.mul(&g).unwrap()).unwrap();
        prop_assert_eq!(pfg.t_adic_order, pf.t_adic_order + pg.t_adic_order);
        if all_positive_certified(&pf) && all_positive_certified(&pg) && all_positive_certified(&pfg) {
            let (cf, cg, cfg) = (certified_counts(&pf), certified_counts(&pg), certified_counts(&pfg));
            let mut vals: Vec<Rational64> = cf.iter().chain(&cg).chain(&cfg).map(|c| c.0).collect();
            vals.sort();
            vals.dedup();
            for v in vals {
                prop_assert_eq!(count_at(&cfg, v), count_at(&cf, v) + count_at(&cg, v), "valuation {}", v);
            }
        }
    }

    #[test]
    fn units_do_not_move_zeros(p in prime(), a in padic_poly(3), b in -20i64..20) {
        let n = 16;
        let f = TruncatedSeries::from_ints(p, Backend::Exact, &a, n).unwrap();
        let d = TruncatedSeries::dirac(p, Backend::Exact, &PadicScalar::from_int(p, b), n).unwrap();
        let pf = newton::polygon(&f).unwrap();
        let pdf = newton::polygon(&d.mul(&f).unwrap()).unwrap();
        let (cf, cdf) = (certified_counts(&pf), certified_counts(&pdf));
        for &(v, k) in &cf {
            if pdf.certified_through.is_some_and(|t| v >= t) {
                prop_assert_eq!(count_at(&cdf, v), k, "valuation {}", v);
            }
        }
        for &(v, k) in &cdf {
            if pf.certified_through.is_some_and(|t| v >= t) {
                prop_assert_eq!(count_at(&cf, v), k, "valuation {}", v);
            }
        }
    }

    #[test]
    fn certification_survives_doubling(p in prime(), a in padic_poly(5), n in 8usize..20) {
        let f = TruncatedSeries::from_ints(p, Backend::Exact, &a, n).unwrap();
        let small = newton::polygon(&f).unwrap();
        let big = newton::polygon(&f.with_trunc(2 * n)).unwrap();
        for s in small.segments.iter().filter(|s| s.certified) {
            prop_assert!(big.segments.iter().any(|t| t.certified && t.slope == s.slope && t.length == s.length));
        }
    }
}

#[test]
fn log_certification_survives_doubling() {
    for p in PRIMES {
        for n in [8usize, 20, (p * p * p) as usize] {
            let small = newton::polygon(&TruncatedSeries::log1p(p, Backend::Exact, n)).unwrap();
            let big = newton::polygon(&TruncatedSeries::log1p(p, Backend::Exact, 2 * n)).unwrap();
            for s in small.segments.iter().filter(|s| s.certified) {
                assert!(
                    big.segments.iter().any(|t| t.slope == s.slope && t.length == s.length),
                    "p={p} N={n} slope {}",
                    s.slope
                );
            }
        }
    }
}
