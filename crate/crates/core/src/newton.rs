//! Newton polygons of truncated series, with a certification horizon.
//!
//! Only coefficients up to the reliable order of a series are known. The
//! polygon is the lower convex hull of the known nonzero points `(n, v(c_n))`;
//! a segment of slope `-s` (zeros of valuation `s`) is *certified* when no
//! unknown coefficient could dip below its extended line:
//!
//! * coefficients beyond the reliable order are assumed to have valuation at
//!   least a tail floor (by default one less than the smallest known
//!   valuation, overridable per call);
//! * approximate zeros inside the reliable range are bounded below by their
//!   precision.
//!
//! Zeros at `T = 0` are reported through `t_adic_order`, not as a segment.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational64,
    pub length: usize,
    pub certified: bool,
}

impl Segment {
    /// Valuation of the zeros this segment accounts for.
    pub fn zero_valuation(&self) -> Rational64 {
        -self.slope
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
    pub t_adic_order: usize,
    /// Smallest zero valuation `s` such that every segment of slope `<= -s`
    /// is certified; `None` if not even the steepest segment is.
    pub certified_through: Option<Rational64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCount {
    pub valuation: Rational64,
    pub multiplicity: usize,
    pub certified: bool,
}

pub fn polygon(f: &TruncatedSeries) -> Result<NewtonPolygon> {
    polygon_with_floor(f, None)
}

/// As [`polygon`], with an explicit lower bound for the valuations of the
/// coefficients beyond the reliable order.
pub fn polygon_with_floor(f: &TruncatedSeries, tail_floor: Option<i64>) -> Result<NewtonPolygon> {
    let rel = f.reliable().min(f.trunc());
    let mut points: Vec<(usize, i64)> = Vec::new();
    // (index, lower bound) for approximate zeros
    let mut fuzzy: Vec<(usize, i64)> = Vec::new();
    for n in 0..=rel {
        match f.coeff(n).valuation() {
            Valuation::Finite(v) => points.push((n, v)),
            Valuation::AtLeast(m) => fuzzy.push((n, m)),
            Valuation::Infinite => {}
        }
    }
    if points.is_empty() {
        return Err(Error::Domain(
            "Newton polygon of a series that is zero to available precision".into(),
        ));
    }
    let floor = tail_floor
        .unwrap_or_else(|| points.iter().map(|&(_, v)| v).min().expect("nonempty") - 1);

    let vertices = lower_hull(&points);
    let t_adic_order = vertices[0].0;
    let segments: Vec<Segment> = vertices
        .windows(2)
        .map(|w| {
            let (n0, v0) = w[0];
            let (n1, v1) = w[1];
            let slope = Rational64::new(v1 - v0, (n1 - n0) as i64);
            let line = |n: usize| Rational64::from_integer(v0) + slope * (n as i64 - n0 as i64);
            let tail_ok = slope < Rational64::zero()
                && Rational64::from_integer(floor) > line(rel + 1);
            let fuzzy_ok = fuzzy
                .iter()
                .all(|&(n, m)| Rational64::from_integer(m) > line(n));
            Segment {
                slope,
                length: n1 - n0,
                certified: tail_ok && fuzzy_ok,
            }
        })
        .collect();

    let mut certified_through = None;
    for s in segments.iter().take_while(|s| s.slope < Rational64::zero()) {
        if !s.certified {
            break;
        }
        certified_through = Some(s.zero_valuation());
    }
    Ok(NewtonPolygon {
        vertices,
        segments,
        t_adic_order,
        certified_through,
    })
}

/// Lower convex hull of points sorted by `n`, without collinear vertices.
fn lower_hull(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b unless a -> b -> p turns strictly upward
            let cross = (b.0 as i128 - a.0 as i128) * (p.1 as i128 - a.1 as i128)
                - (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Zeros of nonnegative valuation, one entry per segment of slope `<= 0`.
pub fn zero_counts(f: &TruncatedSeries) -> Result<Vec<ZeroCount>> {
    Ok(counts_of(&polygon(f)?))
}

pub fn counts_of(poly: &NewtonPolygon) -> Vec<ZeroCount> {
    poly.segments
        .iter()
        .filter(|s| s.slope <= Rational64::zero())
        .map(|s| ZeroCount {
            valuation: s.zero_valuation(),
            multiplicity: s.length,
            certified: s.slope < Rational64::zero()
                && poly.certified_through.is_some_and(|t| s.zero_valuation() >= t),
        })
        .collect()
}

/// Certified disjointness of the zero sets of `f` and `g`, compared by
/// valuation class (and the point `T = 0`). Sound but incomplete: distinct
/// zeros of equal valuation make this return `false`.
pub fn common_zero_free(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<bool> {
    let classes = |s: &TruncatedSeries, name: &str| -> Result<(bool, Vec<Rational64>)> {
        let poly = polygon(s)?;
        let counts = counts_of(&poly);
        if let Some(c) = counts
            .iter()
            .find(|c| c.valuation > Rational64::zero() && !c.certified)
        {
            return Err(Error::Uncertified(format!(
                "{name}: zeros of valuation {} are not certified",
                c.valuation
            )));
        }
        Ok((
            poly.t_adic_order > 0,
            counts
                .iter()
                .filter(|c| c.valuation > Rational64::zero())
                .map(|c| c.valuation)
                .collect(),
        ))
    };
    let (f0, fv) = classes(f, "first series")?;
    let (g0, gv) = classes(g, "second series")?;
    Ok(!(f0 && g0) && !fv.iter().any(|v| gv.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Backend;

    fn poly(p: u64, c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(p, Backend::Exact, c, n).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn linear_polynomial() {
        let np = polygon(&poly(5, &[5, 1], 8)).unwrap();
        assert_eq!(np.segments.len(), 1);
        assert_eq!(np.segments[0].slope, r(-1, 1));
        assert_eq!(np.segments[0].length, 1);
        assert!(np.segments[0].certified);
        assert_eq!(np.certified_through, Some(r(1, 1)));
    }

    #[test]
    fn constant_has_no_zeros() {
        let np = polygon(&poly(5, &[1], 8)).unwrap();
        assert!(np.segments.is_empty());
        assert_eq!(np.t_adic_order, 0);
        assert!(zero_counts(&poly(5, &[1], 8)).unwrap().is_empty());
    }

    #[test]
    fn zero_series_is_an_error() {
        assert!(polygon(&TruncatedSeries::zero(5, Backend::Exact, 8)).is_err());
    }

    #[test]
    fn log_polygon() {
        for p in [2u64, 3, 5] {
            let n = (p * p * p) as usize;
            let np = polygon(&TruncatedSeries::log1p(p, Backend::Exact, n)).unwrap();
            let p = p as i64;
            let want = [
                (r(-1, p - 1), (p - 1) as usize),
                (r(-1, p * p - p), (p * p - p) as usize),
                (r(-1, p * p * p - p * p), (p * p * p - p * p) as usize),
            ];
            let got: Vec<_> = np.segments.iter().map(|s| (s.slope, s.length)).collect();
            assert_eq!(got, want);
            let cert: Vec<_> = np.segments.iter().map(|s| s.certified).collect();
            assert_eq!(cert, [true, true, false]);
            assert_eq!(np.t_adic_order, 1);
            assert_eq!(np.certified_through, Some(r(1, p * p - p)));
        }
    }

    #[test]
    fn t_squared_times_t_minus_p() {
        // T^2 (T - 3) = -3 T^2 + T^3
        let counts = zero_counts(&poly(3, &[0, 0, -3, 1], 10)).unwrap();
        let np = polygon(&poly(3, &[0, 0, -3, 1], 10)).unwrap();
        assert_eq!(np.t_adic_order, 2);
        assert_eq!(
            counts,
            vec![ZeroCount {
                valuation: r(1, 1),
                multiplicity: 1,
                certified: true
            }]
        );
    }

    #[test]
    fn dirac_of_positive_integer() {
        let p = 3;
        let d = TruncatedSeries::dirac(p, Backend::Exact, &crate::PadicScalar::from_int(p, 4), 10)
            .unwrap();
        let np = polygon(&d).unwrap();
        assert_eq!(np.t_adic_order, 0);
        assert_eq!(np.segments.len(), 1);
        assert_eq!(np.segments[0].slope, r(0, 1));
        assert_eq!(np.segments[0].length, 4);
    }

    #[test]
    fn log_2_adic_valuation_one() {
        let counts = zero_counts(&TruncatedSeries::log1p(2, Backend::Exact, 16)).unwrap();
        let c = counts.iter().find(|c| c.valuation == r(1, 1)).unwrap();
        assert_eq!(c.multiplicity, 1);
        assert!(c.certified);
    }

    #[test]
    fn common_zero_free_examples() {
        let p = 5;
        let a = poly(p, &[5, 1], 8);
        let b = poly(p, &[1, 1], 8);
        let c = poly(p, &[25, 1], 8);
        assert!(common_zero_free(&a, &b).unwrap());
        assert!(!common_zero_free(&a, &a).unwrap());
        assert!(common_zero_free(&a, &c).unwrap());
        let l = TruncatedSeries::log1p(p, Backend::Exact, 125);
        assert!(matches!(
            common_zero_free(&l, &a.with_trunc(125)),
            Err(Error::Uncertified(_))
        ));
    }

    #[test]
    fn approximate_zero_blocks_certification() {
        use crate::PadicScalar;
        let p = 3;
        let backend = Backend::Approx { precision: 6 };
        // 81 + O(3^m) T + T^2: the hull line passes through valuation 2 at n = 1
        let build = |m| {
            let mut c = vec![PadicScalar::from_int(p, 81), PadicScalar::approx_zero(p, m)];
            c.push(PadicScalar::one(p));
            c.resize(13, PadicScalar::zero(p));
            TruncatedSeries::from_coeffs(p, backend, c).unwrap()
        };
        assert!(!polygon(&build(2)).unwrap().segments[0].certified);
        assert!(polygon(&build(3)).unwrap().segments[0].certified);
    }
}
