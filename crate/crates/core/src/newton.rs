//! Newton polygons of polynomials over the Hahn field, the count of roots
//! in the valuation ring, and the valuative Rolle theorem.
//!
//! Vertices are the points `(i, val(aᵢ))`; a segment of slope `s` and
//! horizontal length `ℓ` accounts for `ℓ` roots of valuation `−s`.  Slopes
//! live in the divisible hull of the value group, which is harmless here
//! because group elements already carry rational coordinates.

use std::cmp::Ordering;
use std::fmt;

use crate::coeffield::KElem;
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::ordgroup::{GroupElem, Value, ValueGroupDesc};
use crate::rational::Q;

/// `a₀ + a₁x + ⋯ + a_n xⁿ` with `a_n ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedPoly {
    coeffs: Vec<HahnSeries>,
}

impl ValuedPoly {
    /// Coefficients from the constant term up.  Trailing exact zeros are dropped.
    pub fn new(mut coeffs: Vec<HahnSeries>) -> Result<Self> {
        while coeffs.last().is_some_and(HahnSeries::is_exact_zero) {
            coeffs.pop();
        }
        let Some(lead) = coeffs.last() else {
            return Err(Error::domain("the zero polynomial has no Newton polygon"));
        };
        if coeffs.len() < 2 {
            return Err(Error::domain("a polynomial of degree >= 1 is required"));
        }
        if lead.has_no_terms() {
            return Err(Error::precision(format!("leading coefficient {lead} is not known to be nonzero")));
        }
        for c in &coeffs[1..] {
            coeffs[0].check_rank(c)?;
        }
        Ok(Self { coeffs })
    }

    /// `∏ (x − rᵢ)`.
    pub fn from_roots(roots: &[HahnSeries]) -> Result<Self> {
        let rank = roots.first().map(HahnSeries::rank).ok_or_else(|| Error::domain("no roots given"))?;
        let mut coeffs = vec![HahnSeries::one(rank)];
        for r in roots {
            // Multiply by (x − r).
            let mut next = vec![HahnSeries::zero(rank); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * r);
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[HahnSeries] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.coeffs[0].rank()
    }

    /// Coefficients of `P′` (a single constant for linear `P`).
    pub fn derivative_coeffs(&self) -> Vec<HahnSeries> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&KElem::from_int(i as i64)))
            .collect()
    }

    /// `P′` as a polynomial; needs degree ≥ 2.
    pub fn derivative(&self) -> Result<ValuedPoly> {
        ValuedPoly::new(self.derivative_coeffs())
    }

    /// `P(x)` by Horner's rule.
    pub fn eval(&self, x: &HahnSeries) -> HahnSeries {
        self.coeffs.iter().rev().fold(HahnSeries::zero(self.rank()), |acc, c| &(&acc * x) + c)
    }

    /// `Q(x) = P(c·x + b)`.
    pub fn compose_affine(&self, c: &HahnSeries, b: &HahnSeries) -> Result<ValuedPoly> {
        let rank = self.rank();
        let lin = [b.clone(), c.clone()];
        let mut acc: Vec<HahnSeries> = vec![HahnSeries::zero(rank)];
        for a in self.coeffs.iter().rev() {
            // acc ← acc·(b + c·x) + a
            let mut next = vec![HahnSeries::zero(rank); acc.len() + 1];
            for (i, x) in acc.iter().enumerate() {
                for (j, y) in lin.iter().enumerate() {
                    next[i + j] = &next[i + j] + &(x * y);
                }
            }
            next[0] = &next[0] + a;
            acc = next;
        }
        ValuedPoly::new(acc)
    }

    fn valuations(&self) -> Result<Vec<Value>> {
        self.coeffs.iter().map(HahnSeries::val).collect()
    }
}

impl fmt::Display for ValuedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: GroupElem,
    pub length: usize,
}

impl Segment {
    /// The common valuation `−slope` of the roots this segment accounts for.
    pub fn root_valuation(&self) -> GroupElem {
        -&self.slope
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, GroupElem)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Root valuations with multiplicity, in increasing order of slope.
    pub fn root_valuations(&self) -> Vec<GroupElem> {
        self.segments.iter().flat_map(|s| std::iter::repeat_n(s.root_valuation(), s.length)).collect()
    }
}

/// Is `(i₂, v₂)` on or below the chord from `(i₁, v₁)` to `(i₃, v₃)`?
/// Cross-multiplied by the positive widths, so it stays in the group.
fn not_above(p1: &(usize, GroupElem), p2: &(usize, GroupElem), p3: &(usize, GroupElem)) -> bool {
    let w12 = (p2.0 - p1.0) as i64;
    let w23 = (p3.0 - p2.0) as i64;
    // slope(p1,p2) ≥ slope(p2,p3)  ⟺  (v2−v1)·w23 ≥ (v3−v2)·w12
    let lhs = (&p2.1 - &p1.1).mul_int(w23);
    let rhs = (&p3.1 - &p2.1).mul_int(w12);
    lhs >= rhs
}

/// The lower convex hull of `{(i, val(aᵢ))}` over the finite valuations.
pub fn polygon(p: &ValuedPoly) -> Result<NewtonPolygon> {
    let points: Vec<(usize, GroupElem)> = p
        .valuations()?
        .into_iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|g| (i, g.clone())))
        .collect();
    let mut hull: Vec<(usize, GroupElem)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 && not_above(&hull[hull.len() - 2], &hull[hull.len() - 1], &pt) {
            hull.pop();
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            let slope = (&w[1].1 - &w[0].1).scale(&Q::new(1.into(), (len as i64).into()));
            Segment { slope, length: len }
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Number of roots (with multiplicity) of valuation ≥ 0: after scaling the
/// coefficients to minimum valuation 0, the largest `i` with `val(aᵢ) = 0`.
pub fn count_roots_in_o(p: &ValuedPoly) -> Result<usize> {
    let vals = p.valuations()?;
    let min = vals.iter().min().expect("degree >= 1").clone();
    if min.is_infinite() {
        return Err(Error::domain("all coefficients vanish"));
    }
    Ok(vals.iter().rposition(|v| *v == min).expect("minimum is attained"))
}

/// Outcome of the valuative Rolle check on the ball `{val(x − b) ≥ γ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RolleVerdict {
    pub roots_in_ball: usize,
    pub derivative_roots_in_ball: usize,
}

impl RolleVerdict {
    pub fn holds(&self) -> bool {
        self.derivative_roots_in_ball >= 1
    }
}

/// Counts roots of `P` and `P′` in `{val(x − center) ≥ radius}` through
/// `Q(x) = P(t^radius·x + center)`.
pub fn rolle_check(p: &ValuedPoly, center: &HahnSeries, radius: &GroupElem) -> Result<RolleVerdict> {
    let c = HahnSeries::t_pow(radius.clone());
    let roots_in_ball = count_roots_in_o(&p.compose_affine(&c, center)?)?;
    if roots_in_ball < 2 {
        return Err(Error::Precondition(format!(
            "only {roots_in_ball} root(s) of the polynomial lie in the ball; two are needed"
        )));
    }
    let derivative_roots_in_ball = count_roots_in_o(&p.derivative()?.compose_affine(&c, center)?)?;
    Ok(RolleVerdict { roots_in_ball, derivative_roots_in_ball })
}

/// `a = b·cⁿ` with `val(b), val(c) > 0`, and `e = b·c^{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalSplit {
    pub b: HahnSeries,
    pub c: HahnSeries,
    pub e: HahnSeries,
    pub gamma: GroupElem,
}

/// Splits `a` (with `val(a) > 0`) as `b·cⁿ` in a ℤ-less group.
///
/// With `γ` strictly between `(n−1)/n·val(a)` and `val(a)`, take
/// `e = a·t^{γ−val(a)}` (valuation `γ`), `c = a/e` and `b = eⁿ/a^{n−1}`;
/// both quotients are monomial shifts, so the split is exact.
pub fn split_radical(group: &ValueGroupDesc, a: &HahnSeries, n: u32) -> Result<RadicalSplit> {
    if n < 2 {
        return Err(Error::domain(format!("split_radical needs n >= 2, got {n}")));
    }
    let va = a.val_finite()?;
    let nq = Q::from_integer(i64::from(n).into());
    let gamma = group.strict_between(&va, &((&nq - Q::from_integer(1.into())) / &nq), &Q::from_integer(1.into()))?;
    let delta = &gamma - &va;
    let e = a.shift(&delta);
    let c = HahnSeries::t_pow(-&delta);
    let b = a.shift(&delta.mul_int(i64::from(n)));
    debug_assert_eq!(b.val_lower_bound().cmp_zero(), Ordering::Greater);
    Ok(RadicalSplit { b, c, e, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::rational::q;

    fn s(x: &str) -> HahnSeries {
        parse_series(x, 1).unwrap()
    }

    fn poly(cs: &[&str]) -> ValuedPoly {
        ValuedPoly::new(cs.iter().map(|c| s(c)).collect()).unwrap()
    }

    fn g(n: i64, d: i64) -> GroupElem {
        GroupElem::new(vec![q(n, d)])
    }

    #[test]
    fn polygon_examples() {
        let p = poly(&["1", "-1 - t", "t"]);
        let np = polygon(&p).unwrap();
        assert_eq!(np.vertices, vec![(0, g(0, 1)), (1, g(0, 1)), (2, g(1, 1))]);
        assert_eq!(np.segments, vec![Segment { slope: g(0, 1), length: 1 }, Segment { slope: g(1, 1), length: 1 }]);
        assert_eq!(count_roots_in_o(&p).unwrap(), 1);

        let p = poly(&["-t", "0", "1"]);
        let np = polygon(&p).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: g(-1, 2), length: 2 }]);
        assert_eq!(np.root_valuations(), vec![g(1, 2), g(1, 2)]);
        assert_eq!(count_roots_in_o(&p).unwrap(), 2);

        let p = poly(&["-5", "1"]);
        assert_eq!(polygon(&p).unwrap().segments, vec![Segment { slope: g(0, 1), length: 1 }]);
        assert_eq!(count_roots_in_o(&poly(&["-t^-1", "0", "1"])).unwrap(), 0);
    }

    #[test]
    fn zero_root_counts() {
        let p = ValuedPoly::from_roots(&[s("0"), s("t")]).unwrap();
        assert_eq!(count_roots_in_o(&p).unwrap(), 2);
        assert_eq!(polygon(&p).unwrap().vertices[0].0, 1);
    }

    #[test]
    fn rolle_examples() {
        let p = poly(&["2*t^2", "-3*t", "1"]);
        let v = rolle_check(&p, &s("0"), &g(1, 1)).unwrap();
        assert_eq!(v, RolleVerdict { roots_in_ball: 2, derivative_roots_in_ball: 1 });
        let v = rolle_check(&poly(&["-t", "0", "1"]), &s("0"), &g(0, 1)).unwrap();
        assert!(v.holds());
        let one_root = ValuedPoly::from_roots(&[s("t"), s("t^-1")]).unwrap();
        assert!(matches!(rolle_check(&one_root, &s("0"), &g(1, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn split_radical_examples() {
        let grp = ValueGroupDesc::rationals();
        let r = split_radical(&grp, &s("t"), 2).unwrap();
        assert_eq!(r.gamma, g(3, 4));
        assert_eq!((r.e.to_string(), r.b.to_string(), r.c.to_string()), ("t^3/4".into(), "t^1/2".into(), "t^1/4".into()));
        let r = split_radical(&grp, &s("t^4"), 2).unwrap();
        assert_eq!(r.gamma, g(3, 1));
        assert_eq!(&r.b * &r.c.pow(2), s("t^4"));
        assert_eq!(&r.b * &r.c, r.e);
        assert!(split_radical(&grp, &s("t"), 1).is_err());
        assert!(matches!(split_radical(&ValueGroupDesc::integers(), &s("t"), 2), Err(Error::UnsupportedGroup(_))));
    }
}
