//! Lexicographically ordered value groups.
//!
//! A value group here is a finite lex product `C_0 × C_1 × … × C_{k-1}` where
//! each factor is ℤ or ℚ and coordinate 0 is the most significant.  The group
//! ℤ + ℤω used by the unliftability game is the rank-2 descriptor
//! `(Integers, Integers)`, with `ω = [1;0]` and `1 = [0;1]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordKind {
    Integers,
    Rationals,
}

/// Shape of a lex value group: one [`CoordKind`] per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueGroupDesc {
    kinds: Vec<CoordKind>,
}

impl ValueGroupDesc {
    pub fn new(kinds: Vec<CoordKind>) -> Result<Self> {
        if kinds.is_empty() {
            return Err(Error::Structural("value group rank must be at least 1".into()));
        }
        Ok(Self { kinds })
    }

    /// Rank-1 ℤ.
    pub fn integers() -> Self {
        Self { kinds: vec![CoordKind::Integers] }
    }

    /// Rank-1 ℚ.
    pub fn rationals() -> Self {
        Self { kinds: vec![CoordKind::Rationals] }
    }

    /// ℤ + ℤω, ordered so that ω exceeds every integer.
    pub fn z_plus_z_omega() -> Self {
        Self { kinds: vec![CoordKind::Integers, CoordKind::Integers] }
    }

    pub fn rank(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[CoordKind] {
        &self.kinds
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem::zero(self.rank())
    }

    /// One unit in the least significant coordinate: the smallest "step"
    /// used when a strictly larger exponent is needed.
    pub fn least_unit(&self) -> GroupElem {
        GroupElem::least_unit(self.rank())
    }

    /// Whether `g` is an element of this group (right rank, integral where required).
    pub fn contains(&self, g: &GroupElem) -> bool {
        g.rank() == self.rank()
            && g
                .coords
                .iter()
                .zip(&self.kinds)
                .all(|(c, k)| *k == CoordKind::Rationals || c.is_integer())
    }

    pub fn check(&self, g: &GroupElem) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::Structural(format!("{g} is not an element of {self}")))
        }
    }

    /// Total order on elements of this group, with a descriptor check.
    pub fn compare(&self, a: &GroupElem, b: &GroupElem) -> Result<Ordering> {
        if a.rank() != self.rank() || b.rank() != self.rank() {
            return Err(Error::Structural(format!(
                "cannot compare {a} and {b} in a rank-{} group",
                self.rank()
            )));
        }
        Ok(a.cmp(b))
    }

    /// Every archimedean rung of a lex product is one of its coordinate
    /// factors, so the group is ℤ-less exactly when no factor is ℤ.
    pub fn is_z_less(&self) -> bool {
        self.kinds.iter().all(|k| *k == CoordKind::Rationals)
    }

    /// Returns some `b` in the group with `p·a < b < q·a`.
    ///
    /// The scalar multiples live in the divisible hull; for a ℤ-less lex
    /// product the midpoint `((p+q)/2)·a` always lies in the group.
    pub fn strict_between(&self, a: &GroupElem, p: &Q, q: &Q) -> Result<GroupElem> {
        self.check(a)?;
        if !self.is_z_less() {
            return Err(Error::UnsupportedGroup(format!(
                "{self} is not Z-less; strict_between needs a divisible rung at every level"
            )));
        }
        if !a.is_positive() {
            return Err(Error::domain(format!("strict_between needs a > 0, got {a}")));
        }
        if p.is_negative() || p >= q {
            return Err(Error::domain(format!("strict_between needs 0 <= p < q, got p={p}, q={q}")));
        }
        let mid = (p + q) / Q::from_integer(2.into());
        Ok(a.scale(&mid))
    }

    /// Quotient descriptor by a convex subgroup (keeps the first `cut` factors).
    pub fn quotient(&self, sub: ConvexSubgroup) -> Result<ValueGroupDesc> {
        if sub.cut_index > self.rank() {
            return Err(Error::Structural(format!(
                "convex subgroup cut {} exceeds rank {}",
                sub.cut_index,
                self.rank()
            )));
        }
        Ok(ValueGroupDesc { kinds: self.kinds[..sub.cut_index].to_vec() })
    }
}

impl fmt::Display for ValueGroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .kinds
            .iter()
            .map(|k| match k {
                CoordKind::Integers => "Z",
                CoordKind::Rationals => "Q",
            })
            .collect();
        write!(f, "lex({})", parts.join(","))
    }
}

/// Element of a lex value group, most significant coordinate first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    coords: Vec<Q>,
}

impl GroupElem {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|c| Q::from_integer((*c).into())).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![Q::zero(); rank] }
    }

    pub fn least_unit(rank: usize) -> Self {
        let mut coords = vec![Q::zero(); rank];
        if let Some(last) = coords.last_mut() {
            *last = Q::one();
        }
        Self { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }

    pub fn is_negative(&self) -> bool {
        self.coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative())
    }

    /// Scalar multiple in the divisible hull.
    pub fn scale(&self, s: &Q) -> GroupElem {
        Self { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn mul_int(&self, n: i64) -> GroupElem {
        self.scale(&Q::from_integer(n.into()))
    }

    /// Image in the quotient by a convex subgroup.
    pub fn coarsen(&self, sub: ConvexSubgroup) -> GroupElem {
        let cut = sub.cut_index.min(self.rank());
        Self { coords: self.coords[..cut].to_vec() }
    }

    /// Index of the most significant nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }

    fn assert_rank(&self, other: &GroupElem) {
        assert_eq!(
            self.rank(),
            other.rank(),
            "group elements of different rank: {self} vs {other}"
        );
    }
}

impl Add for &GroupElem {
    type Output = GroupElem;
    fn add(self, rhs: &GroupElem) -> GroupElem {
        self.assert_rank(rhs);
        GroupElem { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Add for GroupElem {
    type Output = GroupElem;
    fn add(self, rhs: GroupElem) -> GroupElem {
        &self + &rhs
    }
}

impl Sub for &GroupElem {
    type Output = GroupElem;
    fn sub(self, rhs: &GroupElem) -> GroupElem {
        self.assert_rank(rhs);
        GroupElem { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Sub for GroupElem {
    type Output = GroupElem;
    fn sub(self, rhs: GroupElem) -> GroupElem {
        &self - &rhs
    }
}

impl Neg for &GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        GroupElem { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        -&self
    }
}

impl fmt::Display for GroupElem {
    /// Bracketed form `[j;i]`; rank-1 elements print as a bare rational.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return f.write_str(&fmt_rational(&self.coords[0]));
        }
        let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(";"))
    }
}

/// The convex subgroup of elements whose first `cut_index` coordinates vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexSubgroup {
    pub cut_index: usize,
}

impl ConvexSubgroup {
    pub fn new(cut_index: usize) -> Self {
        Self { cut_index }
    }

    /// The subgroup spanned by the least significant coordinate of a rank-`rank` group.
    pub fn drop_minor(rank: usize) -> Self {
        Self { cut_index: rank.saturating_sub(1) }
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.coords.iter().take(self.cut_index).all(Zero::is_zero)
    }
}

/// A valuation value: a group element or +∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(GroupElem),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&GroupElem> {
        match self {
            Value::Finite(g) => Some(g),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    /// Sum with the convention `∞ + x = ∞`.
    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }

    pub fn add_elem(&self, g: &GroupElem) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(a + g),
            Value::Infinity => Value::Infinity,
        }
    }

    pub fn neg_finite(&self) -> Option<GroupElem> {
        self.finite().map(|g| -g)
    }

    /// Compare against the zero of the group.
    pub fn cmp_zero(&self) -> Ordering {
        match self {
            Value::Infinity => Ordering::Greater,
            Value::Finite(g) => {
                if g.is_positive() {
                    Ordering::Greater
                } else if g.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }
}

impl From<GroupElem> for Value {
    fn from(g: GroupElem) -> Self {
        Value::Finite(g)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(g) => g.fmt(f),
            Value::Infinity => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: &[i64]) -> GroupElem {
        GroupElem::from_ints(c)
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn omega_dominates_integers() {
        let desc = ValueGroupDesc::z_plus_z_omega();
        assert_eq!(desc.compare(&g(&[1, 0]), &g(&[0, 1000])).unwrap(), Ordering::Greater);
        assert_eq!(desc.compare(&g(&[0, 0]), &g(&[0, 0])).unwrap(), Ordering::Equal);
        assert_eq!(desc.compare(&g(&[2, -3]), &g(&[2, -2])).unwrap(), Ordering::Less);
    }

    #[test]
    fn compare_rejects_rank_mismatch() {
        let desc = ValueGroupDesc::z_plus_z_omega();
        assert!(matches!(desc.compare(&g(&[1]), &g(&[0, 1])), Err(Error::Structural(_))));
    }

    #[test]
    fn z_less_is_structural() {
        assert!(ValueGroupDesc::rationals().is_z_less());
        assert!(!ValueGroupDesc::integers().is_z_less());
        assert!(!ValueGroupDesc::z_plus_z_omega().is_z_less());
        // A ℤ factor anywhere is a ℤ rung, not only in the tail.
        let zq = ValueGroupDesc::new(vec![CoordKind::Integers, CoordKind::Rationals]).unwrap();
        assert!(!zq.is_z_less());
    }

    #[test]
    fn coarsen_drops_minor() {
        let sub = ConvexSubgroup::drop_minor(2);
        assert_eq!(g(&[3, -7]).coarsen(sub), g(&[3]));
        assert_eq!(g(&[0, 5]).coarsen(sub), g(&[0]));
        assert_eq!(g(&[-2, 9]).coarsen(sub), g(&[-2]));
        assert!(sub.contains(&g(&[0, 5])));
        assert!(!sub.contains(&g(&[1, 0])));
    }

    #[test]
    fn strict_between_examples() {
        let desc = ValueGroupDesc::rationals();
        let one = g(&[1]);
        assert_eq!(desc.strict_between(&one, &q(1, 3), &q(2, 3)).unwrap(), GroupElem::new(vec![q(1, 2)]));
        assert_eq!(desc.strict_between(&one, &q(1, 2), &q(1, 1)).unwrap(), GroupElem::new(vec![q(3, 4)]));
        assert_eq!(desc.strict_between(&g(&[4]), &q(0, 1), &q(1, 8)).unwrap(), GroupElem::new(vec![q(1, 4)]));
    }

    #[test]
    fn strict_between_errors() {
        let z = ValueGroupDesc::integers();
        assert!(matches!(z.strict_between(&g(&[1]), &q(1, 3), &q(2, 3)), Err(Error::UnsupportedGroup(_))));
        let qd = ValueGroupDesc::rationals();
        assert!(matches!(qd.strict_between(&g(&[0]), &q(1, 3), &q(2, 3)), Err(Error::Domain(_))));
        assert!(matches!(qd.strict_between(&g(&[-1]), &q(1, 3), &q(2, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_two_integer_sandwich_has_no_witness() {
        // a = [0;1]: any b with a < 3b < 2a would need 1 < 3·b_minor < 2 with b_major = 0.
        let a = g(&[0, 1]);
        for major in -3i64..=3 {
            for minor in -10i64..=10 {
                let b = g(&[major, minor]);
                let three_b = b.mul_int(3);
                assert!(!(a < three_b && three_b < a.mul_int(2)), "unexpected witness {b}");
            }
        }
    }
}
