//! The quotient module D = K/𝔪 and the separating rationals of several
//! coarsened valuations.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::HahnSeries;
use crate::coeffield::KElem;
use crate::error::{Error, Result};
use crate::ordgroup::{ConvexSubgroup, GroupElem, Value};
use crate::rational::{factorial_reciprocal, Q};

/// An element of D = K/𝔪, represented by its exponent-≤0 truncation.
///
/// `k` embeds as the classes of `s·t⁰`; the valuation on D is the valuation
/// of the representative, capped to `+∞` above 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    rep: HahnSeries,
}

impl ResidueClass {
    pub fn zero(rank: usize) -> Self {
        Self { rep: HahnSeries::zero(rank) }
    }

    /// Class of `s ∈ k` under `k ↪ D`.
    pub fn from_residue(s: KElem, rank: usize) -> Self {
        Self { rep: HahnSeries::constant(s, rank) }
    }

    /// The canonical representative (exact, exponents ≤ 0).
    pub fn rep(&self) -> &HahnSeries {
        &self.rep
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.has_no_terms()
    }

    /// `val_D`: `+∞` for the zero class, otherwise the least exponent (≤ 0).
    pub fn dval(&self) -> Value {
        self.rep.val_lower_bound()
    }

    /// The component in `k`: the coefficient of `t⁰`.
    pub fn res2(&self) -> KElem {
        self.rep.coeff(&GroupElem::zero(self.rank()))
    }

    /// Whether the class lies in the image of `k ↪ D` (equivalently `dval ≥ 0`).
    pub fn in_residue_field(&self) -> bool {
        self.rep.terms().iter().all(|(g, _)| g.is_zero())
    }

    /// The 𝒪-action `a·d`.  Needs `a` known beyond `-val_D(d)`.
    pub fn scale_by(&self, a: &HahnSeries) -> Result<ResidueClass> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if !a.in_valuation_ring()? {
            return Err(Error::domain("D is an O-module; the scalar must have val >= 0"));
        }
        (&self.rep * a).dclass()
    }

    /// Some `x` with `a·x = self`, for nonzero `a ∈ 𝒪` (D is divisible).
    pub fn divide_by(&self, a: &HahnSeries) -> Result<ResidueClass> {
        if !a.in_valuation_ring()? {
            return Err(Error::domain("divisor must lie in the valuation ring"));
        }
        let Value::Finite(v) = self.dval() else { return Ok(self.clone()) };
        let unit = GroupElem::least_unit(self.rank());
        let inv = a.invert(&(&(-&v) + &unit))?;
        (&self.rep * &inv).dclass()
    }
}

impl Add for &ResidueClass {
    type Output = ResidueClass;
    fn add(self, rhs: &ResidueClass) -> ResidueClass {
        ResidueClass { rep: &self.rep + &rhs.rep }
    }
}

impl Sub for &ResidueClass {
    type Output = ResidueClass;
    fn sub(self, rhs: &ResidueClass) -> ResidueClass {
        ResidueClass { rep: &self.rep - &rhs.rep }
    }
}

impl Neg for &ResidueClass {
    type Output = ResidueClass;
    fn neg(self) -> ResidueClass {
        ResidueClass { rep: -&self.rep }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl HahnSeries {
    /// The quotient map `K ↠ K/𝔪`.  Needs precision above 0.
    pub fn dclass(&self) -> Result<ResidueClass> {
        if let Some(p) = self.precision() {
            if !p.is_positive() {
                return Err(Error::precision(format!(
                    "precision O(t^{p}) does not determine the class modulo the maximal ideal"
                )));
            }
        }
        let kept = self.filter_terms(|g| !g.is_positive()).to_exact();
        Ok(ResidueClass { rep: kept })
    }
}

/// A nonzero rational `q` with `val(b − q)` non-positive under every listed
/// coarsening, so that `1/(b − q)` is integral for all of them at once.
///
/// Candidates are scanned in the order `1, 1/2, 1/6, …, 1/n!`; each
/// coarsening excludes at most one of them.
pub fn separating_rational(b: &HahnSeries, coarsenings: &[ConvexSubgroup]) -> Result<Q> {
    const MAX_CANDIDATES: u32 = 24;
    for n in 1..=MAX_CANDIDATES {
        let q = factorial_reciprocal(n);
        let diff = b - &HahnSeries::constant(KElem::from_rational(q.clone()), b.rank());
        let Ok(Value::Finite(v)) = diff.val() else { continue };
        if coarsenings.iter().all(|c| !v.coarsen(*c).is_positive()) {
            return Ok(q);
        }
    }
    Err(Error::precision(format!(
        "no rational among 1/n!, n <= {MAX_CANDIDATES}, separates {b} at its precision"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn g(c: &[i64]) -> GroupElem {
        GroupElem::from_ints(c)
    }

    fn mono(c: i64, e: i64) -> HahnSeries {
        HahnSeries::monomial(KElem::from_int(c), g(&[e]))
    }

    #[test]
    fn dclass_drops_positive_tail() {
        let x = &(&mono(2, -1) + &mono(3, 0)) + &mono(1, 1);
        let d = x.dclass().unwrap();
        assert_eq!(d.rep().to_string(), "2*t^-1 + 3");
        assert_eq!(d.dval(), Value::Finite(g(&[-1])));
    }

    #[test]
    fn scaling_into_the_maximal_ideal_vanishes() {
        let d = (&mono(2, -1) + &mono(3, 0)).dclass().unwrap();
        let a = mono(1, 2);
        let ad = d.scale_by(&a).unwrap();
        assert!(ad.is_zero());
        assert_eq!(ad.dval(), Value::Infinity);
    }

    #[test]
    fn divisibility() {
        let d = (&mono(2, -1) + &mono(3, 0)).dclass().unwrap();
        let a = &mono(1, 2) + &mono(1, 3);
        let x = d.divide_by(&a).unwrap();
        assert_eq!(x.scale_by(&a).unwrap(), d);
    }

    #[test]
    fn separating_rational_examples() {
        let full = ConvexSubgroup::new(1);
        assert_eq!(separating_rational(&mono(1, -1), &[full]).unwrap(), qi(1));
        assert_eq!(separating_rational(&mono(5, 0), &[full]).unwrap(), qi(1));
        assert_eq!(separating_rational(&mono(1, 0), &[full]).unwrap(), Q::new(1.into(), 2.into()));

        let b = &HahnSeries::from_int(3, 2) + &HahnSeries::t_pow(g(&[0, 1]));
        let subs = [ConvexSubgroup::new(2), ConvexSubgroup::new(1)];
        assert_eq!(separating_rational(&b, &subs).unwrap(), qi(1));
    }
}
