//! Truncated Hahn series `Σ c_g t^g + O(t^π)` over k with exponents in a lex
//! value group.
//!
//! Every series carries its precision cap π explicitly (`None` means exact),
//! in the spirit of big-oh p-adic arithmetic: results of `+` and `·` are only
//! claimed below the cap that the inputs can justify.

mod residue;

pub use residue::{separating_rational, ResidueClass};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeffield::KElem;
use crate::error::{Error, Result};
use crate::ordgroup::{ConvexSubgroup, GroupElem, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HahnSeries {
    rank: usize,
    terms: Vec<(GroupElem, KElem)>,
    precision: Option<GroupElem>,
}

fn min_prec(a: &Option<GroupElem>, b: &Option<GroupElem>) -> Option<GroupElem> {
    match (a, b) {
        (None, p) | (p, None) => p.clone(),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

fn value_to_prec(v: Value) -> Option<GroupElem> {
    match v {
        Value::Finite(g) => Some(g),
        Value::Infinity => None,
    }
}

fn prec_to_value(p: &Option<GroupElem>) -> Value {
    match p {
        Some(g) => Value::Finite(g.clone()),
        None => Value::Infinity,
    }
}

impl HahnSeries {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: Vec::new(), precision: None }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(KElem::one(), rank)
    }

    /// `O(t^p)`: a series known to vanish below `p`.
    pub fn big_o(p: GroupElem) -> Self {
        Self { rank: p.rank(), terms: Vec::new(), precision: Some(p) }
    }

    pub fn constant(c: KElem, rank: usize) -> Self {
        Self::monomial(c, GroupElem::zero(rank))
    }

    pub fn from_int(n: i64, rank: usize) -> Self {
        Self::constant(KElem::from_int(n), rank)
    }

    /// `c·t^g`, exact.
    pub fn monomial(c: KElem, g: GroupElem) -> Self {
        let rank = g.rank();
        let terms = if c.is_zero() { Vec::new() } else { vec![(g, c)] };
        Self { rank, terms, precision: None }
    }

    /// `t^g`, exact.
    pub fn t_pow(g: GroupElem) -> Self {
        Self::monomial(KElem::one(), g)
    }

    /// Builds a canonical series: sorts, merges duplicate exponents, drops
    /// zero coefficients and anything at or above the precision cap.
    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = (GroupElem, KElem)>,
        precision: Option<GroupElem>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<GroupElem, KElem> = BTreeMap::new();
        for (g, c) in terms {
            if g.rank() != rank {
                return Err(Error::Structural(format!("exponent {g} does not have rank {rank}")));
            }
            accumulate(&mut acc, g, c);
        }
        if let Some(p) = &precision {
            if p.rank() != rank {
                return Err(Error::Structural(format!("precision {p} does not have rank {rank}")));
            }
        }
        Ok(Self::from_map(rank, acc, precision))
    }

    fn from_map(rank: usize, acc: BTreeMap<GroupElem, KElem>, precision: Option<GroupElem>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(g, c)| !c.is_zero() && precision.as_ref().is_none_or(|p| g < p))
            .collect();
        Self { rank, terms, precision }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(GroupElem, KElem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn precision(&self) -> Option<&GroupElem> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// Zero with infinite precision.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// No known terms (the series may still be nonzero beyond its cap).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_one(&self) -> bool {
        self.is_exact() && matches!(self.terms.as_slice(), [(g, c)] if g.is_zero() && c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Caps the precision at `p`, discarding terms at or above it.
    pub fn truncate(&self, p: &GroupElem) -> HahnSeries {
        let precision = min_prec(&self.precision, &Some(p.clone()));
        let terms = self.terms.iter().filter(|(g, _)| g < p).cloned().collect();
        Self { rank: self.rank, terms, precision }
    }

    /// Same terms, declared exact.
    pub fn to_exact(&self) -> HahnSeries {
        Self { rank: self.rank, terms: self.terms.clone(), precision: None }
    }

    pub fn coeff(&self, g: &GroupElem) -> KElem {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(g))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<&(GroupElem, KElem)> {
        self.terms.first()
    }

    /// Largest value the series is known to be bounded below by.
    pub fn val_lower_bound(&self) -> Value {
        match (self.terms.first(), &self.precision) {
            (Some((g, _)), _) => Value::Finite(g.clone()),
            (None, p) => prec_to_value(p),
        }
    }

    /// The valuation; undecidable when no term survives below a finite cap.
    pub fn val(&self) -> Result<Value> {
        match (self.terms.first(), &self.precision) {
            (Some((g, _)), _) => Ok(Value::Finite(g.clone())),
            (None, None) => Ok(Value::Infinity),
            (None, Some(p)) => Err(Error::precision(format!(
                "series is O(t^{p}); its valuation is not determined"
            ))),
        }
    }

    /// The valuation of a series that must be nonzero.
    pub fn val_finite(&self) -> Result<GroupElem> {
        match self.val()? {
            Value::Finite(g) => Ok(g),
            Value::Infinity => Err(Error::domain("the zero series has no finite valuation")),
        }
    }

    /// Sign of `val(x)` relative to 0 (`Greater` includes `+∞`).
    pub fn val_sign(&self) -> Result<Ordering> {
        if let Some((g, _)) = self.terms.first() {
            if !g.is_positive() || self.precision.as_ref().is_none_or(|p| g < p) {
                return Ok(Value::Finite(g.clone()).cmp_zero());
            }
        }
        match &self.precision {
            None => Ok(Ordering::Greater),
            Some(p) if p.is_positive() => Ok(Ordering::Greater),
            Some(p) => Err(Error::precision(format!(
                "series is O(t^{p}) below its first term; sign of val undecidable"
            ))),
        }
    }

    /// Whether `val(x) ≥ 0`, decided at the stored precision.
    pub fn in_valuation_ring(&self) -> Result<bool> {
        Ok(self.val_sign()? != Ordering::Less)
    }

    /// The residue `res(x)`: the coefficient of `t^0`.
    pub fn res(&self) -> Result<KElem> {
        if let Some((g, _)) = self.terms.first() {
            if g.is_negative() {
                return Err(Error::domain(format!("res needs val >= 0, but val = {g}")));
            }
        }
        match &self.precision {
            Some(p) if !p.is_positive() => Err(Error::precision(format!(
                "precision O(t^{p}) does not determine the constant term"
            ))),
            _ => Ok(self.coeff(&GroupElem::zero(self.rank))),
        }
    }

    /// Image of `val(x)` under a coarsening.
    pub fn coarse_val(&self, sub: ConvexSubgroup) -> Result<Value> {
        Ok(match self.val()? {
            Value::Finite(g) => Value::Finite(g.coarsen(sub)),
            Value::Infinity => Value::Infinity,
        })
    }

    pub fn symbols(&self) -> BTreeSet<usize> {
        self.terms.iter().flat_map(|(_, c)| c.symbols()).collect()
    }

    pub fn check_rank(&self, other: &HahnSeries) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "series of rank {} and rank {} cannot be combined",
                self.rank, other.rank
            )))
        }
    }

    pub fn try_add(&self, other: &HahnSeries) -> Result<HahnSeries> {
        self.check_rank(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &HahnSeries) -> Result<HahnSeries> {
        self.check_rank(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &KElem) -> HahnSeries {
        if c.is_zero() {
            return Self { rank: self.rank, terms: Vec::new(), precision: self.precision.clone() };
        }
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(g, a)| (g.clone(), a * c)).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiplication by `t^g`.
    pub fn shift(&self, g: &GroupElem) -> HahnSeries {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + g, c.clone())).collect(),
            precision: self.precision.as_ref().map(|p| p + g),
        }
    }

    pub fn pow(&self, n: u32) -> HahnSeries {
        let mut out = HahnSeries::one(self.rank);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Inverse of a single-term series; exact when the input is.
    pub fn inverse_monomial(&self) -> Result<HahnSeries> {
        let [(v, c)] = self.terms.as_slice() else {
            return Err(Error::domain(format!("{self} is not a single term")));
        };
        let inv = HahnSeries::monomial(c.inv()?, -v);
        Ok(match &self.precision {
            None => inv,
            // c t^v (1 + O(t^{p-v}))  ⇒  inverse known to O(t^{p-2v}).
            Some(p) => inv.truncate(&(p - &v.mul_int(2))),
        })
    }

    /// `x⁻¹ + O(t^target)`, by the geometric series of the unit part.
    ///
    /// Writes `x = c·t^v·(1 + m)` with `val(m) > 0`; the result precision is
    /// `min(target, π − 2v)` where π is the precision of `x`.  Fails when
    /// `x` is indistinguishable from 0, or when powers of `m` can never
    /// reach the requested precision (for instance `m` of valuation `[0;1]`
    /// against a target `[1;0]`).
    pub fn invert(&self, target: &GroupElem) -> Result<HahnSeries> {
        let (v, c) = self.terms.first().cloned().ok_or_else(|| match &self.precision {
            None => Error::domain("inverse of zero"),
            Some(p) => Error::precision(format!("cannot invert O(t^{p})")),
        })?;
        if self.terms.len() == 1 {
            return Ok(self.inverse_monomial()?.truncate(target));
        }
        let lead_inv = HahnSeries::monomial(c.inv()?, -&v);
        // m = x / (c t^v) - 1
        let unit = &lead_inv * self;
        let m = &unit - &HahnSeries::one(self.rank);
        let rel = match m.precision() {
            Some(pm) => (target + &v).min(pm.clone()),
            None => target + &v,
        };
        let mu = match m.terms.first() {
            Some((g, _)) => g.clone(),
            None => return Ok((&lead_inv * &unit).truncate(target)),
        };
        if rel.is_positive() && !reachable(&mu, &rel) {
            return Err(Error::precision(format!(
                "powers of a t^{mu} correction never reach relative precision t^{rel}"
            )));
        }
        let neg_m = (-&m).truncate(&rel);
        let mut sum = HahnSeries::one(self.rank).truncate(&rel);
        let mut power = HahnSeries::one(self.rank);
        loop {
            power = (&power * &neg_m).truncate(&rel);
            if power.has_no_terms() {
                break;
            }
            sum = &sum + &power;
        }
        Ok((&lead_inv * &sum).truncate(target))
    }

    /// Both series exact with identical terms.
    pub fn definitely_equal(&self, other: &HahnSeries) -> bool {
        self.is_exact() && other.is_exact() && self.terms == other.terms
    }

    /// Agreement below the smaller of the two caps.
    pub fn agrees_with(&self, other: &HahnSeries) -> bool {
        self.rank == other.rank && (self - other).has_no_terms()
    }

    pub fn map_coeffs(&self, f: impl Fn(&KElem) -> KElem) -> HahnSeries {
        let acc: BTreeMap<_, _> = self.terms.iter().map(|(g, c)| (g.clone(), f(c))).collect();
        Self::from_map(self.rank, acc, self.precision.clone())
    }

    /// Terms whose exponent satisfies `keep`, with the same cap.
    pub fn filter_terms(&self, keep: impl Fn(&GroupElem) -> bool) -> HahnSeries {
        Self {
            rank: self.rank,
            terms: self.terms.iter().filter(|(g, _)| keep(g)).cloned().collect(),
            precision: self.precision.clone(),
        }
    }
}

/// Whether some multiple `n·mu` (with `mu > 0`) reaches `rel > 0`.
fn reachable(mu: &GroupElem, rel: &GroupElem) -> bool {
    match (mu.leading_index(), rel.leading_index()) {
        (Some(i), Some(j)) => i <= j,
        _ => true,
    }
}

fn accumulate(acc: &mut BTreeMap<GroupElem, KElem>, g: GroupElem, c: KElem) {
    if c.is_zero() {
        return;
    }
    match acc.entry(g) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl Add for &HahnSeries {
    type Output = HahnSeries;
    /// Panics on rank mismatch; see [`HahnSeries::try_add`].
    fn add(self, rhs: &HahnSeries) -> HahnSeries {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in series addition");
        let precision = min_prec(&self.precision, &rhs.precision);
        let mut acc: BTreeMap<GroupElem, KElem> = self.terms.iter().cloned().collect();
        for (g, c) in &rhs.terms {
            accumulate(&mut acc, g.clone(), c.clone());
        }
        HahnSeries::from_map(self.rank, acc, precision)
    }
}

impl Neg for &HahnSeries {
    type Output = HahnSeries;
    fn neg(self) -> HahnSeries {
        HahnSeries {
            rank: self.rank,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
            precision: self.precision.clone(),
        }
    }
}

impl Sub for &HahnSeries {
    type Output = HahnSeries;
    fn sub(self, rhs: &HahnSeries) -> HahnSeries {
        self + &(-rhs)
    }
}

impl Mul for &HahnSeries {
    type Output = HahnSeries;
    /// Panics on rank mismatch; see [`HahnSeries::try_mul`].
    fn mul(self, rhs: &HahnSeries) -> HahnSeries {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in series multiplication");
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return HahnSeries::zero(self.rank);
        }
        let a = prec_to_value(&self.precision).add(&rhs.val_lower_bound());
        let b = prec_to_value(&rhs.precision).add(&self.val_lower_bound());
        let precision = value_to_prec(a.min(b));
        let mut acc = BTreeMap::new();
        for (g, c) in &self.terms {
            for (h, d) in &rhs.terms {
                let e = g + h;
                if precision.as_ref().is_none_or(|p| &e < p) {
                    accumulate(&mut acc, e, c * d);
                }
            }
        }
        HahnSeries::from_map(self.rank, acc, precision)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for HahnSeries {
            type Output = HahnSeries;
            fn $m(self, rhs: HahnSeries) -> HahnSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for HahnSeries {
    type Output = HahnSeries;
    fn neg(self) -> HahnSeries {
        -&self
    }
}

/// Exponent text after `t^`.
pub(crate) fn fmt_exponent(g: &GroupElem) -> String {
    g.to_string()
}

fn is_negative_atom(c: &KElem) -> bool {
    let n = c.numer();
    c.denom().is_one() && n.num_terms() == 1 && n.leading().is_some_and(|(_, v)| crate::rational::is_negative(v))
}

impl fmt::Display for HahnSeries {
    /// Prints in the grammar accepted by [`crate::parse::parse_series`], e.g.
    /// `3/2*t^[0;2] + th1*t^[1;0] + O(t^[2;0])`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in &self.terms {
            let (neg, c) = if is_negative_atom(c) { (true, -c) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let leading = first;
            first = false;
            if g.is_zero() {
                if leading {
                    write!(f, "{c}")?;
                } else {
                    f.write_str(&c.to_factor_string())?;
                }
            } else if c.is_one() {
                write!(f, "t^{}", fmt_exponent(g))?;
            } else {
                write!(f, "{}*t^{}", c.to_factor_string(), fmt_exponent(g))?;
            }
        }
        if let Some(p) = &self.precision {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "O(t^{})", fmt_exponent(p))?;
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn t(n: i64) -> HahnSeries {
        HahnSeries::t_pow(GroupElem::from_ints(&[n]))
    }

    fn k(n: i64) -> HahnSeries {
        HahnSeries::from_int(n, 1)
    }

    fn g1(n: i64) -> GroupElem {
        GroupElem::from_ints(&[n])
    }

    #[test]
    fn difference_of_squares() {
        let x = &k(1) + &t(1);
        let y = &k(1) - &t(1);
        assert!((&x * &y).definitely_equal(&(&k(1) - &t(2))));
    }

    #[test]
    fn exponents_add() {
        let a = HahnSeries::t_pow(GroupElem::from_ints(&[1, 0]));
        let b = HahnSeries::t_pow(GroupElem::from_ints(&[0, -1]));
        assert!((&a * &b).definitely_equal(&HahnSeries::t_pow(GroupElem::from_ints(&[1, -1]))));
    }

    #[test]
    fn coefficient_cancellation() {
        let th = KElem::symbol(1);
        let x = &HahnSeries::monomial(th.clone(), g1(1)) + &t(2);
        let y = HahnSeries::monomial(-&th, g1(1));
        assert!((&x + &y).definitely_equal(&t(2)));
    }

    #[test]
    fn invert_examples() {
        let inv = (&k(1) + &t(1)).invert(&g1(3)).unwrap();
        let expected = HahnSeries::from_terms(
            1,
            [(g1(0), KElem::one()), (g1(1), KElem::from_int(-1)), (g1(2), KElem::one())],
            Some(g1(3)),
        )
        .unwrap();
        assert_eq!(inv, expected);

        let inv = t(2).invert(&g1(5)).unwrap();
        assert_eq!(inv.to_string(), "t^-2 + O(t^5)");

        let x = &k(2) - &t(1);
        let inv = x.invert(&g1(2)).unwrap();
        assert_eq!(inv.to_string(), "1/2 + 1/4*t^1 + O(t^2)");
        assert!((&x * &inv).agrees_with(&k(1)));
        assert_eq!((&x * &inv).precision(), Some(&g1(2)));
    }

    #[test]
    fn invert_zero_fails() {
        assert!(matches!(HahnSeries::big_o(g1(3)).invert(&g1(5)), Err(Error::InsufficientPrecision(_))));
        assert!(matches!(HahnSeries::zero(1).invert(&g1(5)), Err(Error::Domain(_))));
    }

    #[test]
    fn invert_unreachable_target() {
        let one = HahnSeries::one(2);
        let x = &one + &HahnSeries::t_pow(GroupElem::from_ints(&[0, 1]));
        assert!(matches!(x.invert(&GroupElem::from_ints(&[1, 0])), Err(Error::InsufficientPrecision(_))));
        assert!(x.invert(&GroupElem::from_ints(&[0, 4])).is_ok());
    }

    #[test]
    fn multiplication_precision() {
        // (1 + O(t^2)) · t^3 = t^3 + O(t^5)
        let x = k(1).truncate(&g1(2));
        let p = &x * &t(3);
        assert_eq!(p.precision(), Some(&g1(5)));
        assert_eq!(p.val().unwrap(), Value::Finite(g1(3)));
    }

    #[test]
    fn residue() {
        let x = &k(5) + &HahnSeries::monomial(KElem::from_int(2), g1(1));
        assert_eq!(x.res().unwrap(), KElem::from_int(5));
        assert!(matches!(t(-1).res(), Err(Error::Domain(_))));
        assert!(matches!(HahnSeries::big_o(g1(0)).res(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn rational_exponents_print() {
        let x = HahnSeries::monomial(KElem::from_rational(q(3, 2)), GroupElem::new(vec![q(1, 2)]));
        assert_eq!(x.to_string(), "3/2*t^1/2");
        assert_eq!((-&x).to_string(), "-3/2*t^1/2");
    }
}
