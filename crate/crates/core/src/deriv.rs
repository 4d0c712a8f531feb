//! Derivations on Hahn series given by an exponent character, a table of
//! coefficient derivatives, and a multiplier.
//!
//! On a monomial, `δ(c·t^g) = (Σ_m ∂c/∂th_m · dth_m)·t^g + c·t^g·L(g)` where
//! `L(g) = Σ g_i·ℓ_i`; the derivation actually applied is `u·δ`.  Because
//! `L` is additive and coefficients are differentiated by the quotient rule,
//! Leibniz holds by construction.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeffield::KElem;
use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, ResidueClass};
use crate::ordgroup::{GroupElem, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    character: Vec<HahnSeries>,
    coeff_table: BTreeMap<usize, HahnSeries>,
    multiplier: HahnSeries,
    margin: GroupElem,
}

impl DerivationSpec {
    /// A derivation with `ℓ_i = character[i]`, no declared generators and `u = 1`.
    pub fn new(character: Vec<HahnSeries>) -> Result<Self> {
        let rank = character.len();
        if rank == 0 {
            return Err(Error::Structural("a character needs one entry per coordinate".into()));
        }
        if let Some(bad) = character.iter().find(|l| l.rank() != rank) {
            return Err(Error::Structural(format!("character entry {bad} is not of rank {rank}")));
        }
        Ok(Self {
            character,
            coeff_table: BTreeMap::new(),
            multiplier: HahnSeries::one(rank),
            margin: GroupElem::least_unit(rank),
        })
    }

    /// `∂₀` on ℤ + ℤω: `ℓ_ω = t^[-1;0]`, `ℓ_1 = 0`, so
    /// `∂₀ Σ a_{i,j} t^{i+jω} = Σ a_{i,j}·j·t^{i+(j−1)ω}`.
    pub fn partial_zero() -> Self {
        Self::new(vec![HahnSeries::t_pow(GroupElem::from_ints(&[-1, 0])), HahnSeries::zero(2)])
            .expect("well-formed character")
    }

    /// The rank-1 analogue of `d/dt`: `ℓ_1 = t⁻¹`.
    pub fn d_dt() -> Self {
        Self::new(vec![HahnSeries::t_pow(GroupElem::from_ints(&[-1]))]).expect("well-formed character")
    }

    pub fn rank(&self) -> usize {
        self.character.len()
    }

    pub fn character(&self) -> &[HahnSeries] {
        &self.character
    }

    pub fn coeff_table(&self) -> &BTreeMap<usize, HahnSeries> {
        &self.coeff_table
    }

    pub fn multiplier(&self) -> &HahnSeries {
        &self.multiplier
    }

    /// Extra precision requested when dividing inside [`Self::dlog`].
    pub fn margin(&self) -> &GroupElem {
        &self.margin
    }

    pub fn set_margin(&mut self, margin: GroupElem) -> Result<()> {
        if margin.rank() != self.rank() || !margin.is_positive() {
            return Err(Error::domain(format!("margin {margin} must be a positive element of rank {}", self.rank())));
        }
        self.margin = margin;
        Ok(())
    }

    /// Declares `d(th_m) = value`.  Use the zero series for a constant.
    pub fn set_coeff(&mut self, m: usize, value: HahnSeries) -> Result<()> {
        if m == 0 {
            return Err(Error::Structural("generators are numbered from th1".into()));
        }
        if value.rank() != self.rank() {
            return Err(Error::Structural(format!("d(th{m}) = {value} has the wrong rank")));
        }
        self.coeff_table.insert(m, value);
        Ok(())
    }

    pub fn with_coeff(mut self, m: usize, value: HahnSeries) -> Result<Self> {
        self.set_coeff(m, value)?;
        Ok(self)
    }

    /// Replaces `u`; it must be a unit (`val(u) = 0`).
    pub fn set_multiplier(&mut self, u: HahnSeries) -> Result<()> {
        if u.rank() != self.rank() {
            return Err(Error::Structural(format!("multiplier {u} has the wrong rank")));
        }
        match u.val()? {
            Value::Finite(g) if g.is_zero() => {}
            v => return Err(Error::domain(format!("multiplier must have valuation 0, got {v}"))),
        }
        self.multiplier = u;
        Ok(())
    }

    pub fn with_multiplier(mut self, u: HahnSeries) -> Result<Self> {
        self.set_multiplier(u)?;
        Ok(self)
    }

    /// `L(g) = Σ g_i·ℓ_i`.
    pub fn char_value(&self, g: &GroupElem) -> HahnSeries {
        let mut out = HahnSeries::zero(self.rank());
        for (gi, li) in g.coords().iter().zip(&self.character) {
            if !gi.is_zero() {
                out = &out + &li.scale(&KElem::from_rational(gi.clone()));
            }
        }
        out
    }

    /// Least valuation among the nonzero ℓ_i and dth_m: how far δ can lower
    /// the valuation of an unknown tail.
    pub fn weight(&self) -> Value {
        self.character
            .iter()
            .chain(self.coeff_table.values())
            .filter(|s| !s.is_exact_zero())
            .map(HahnSeries::val_lower_bound)
            .min()
            .unwrap_or(Value::Infinity)
    }

    fn coeff_derivative(&self, c: &KElem, g: &GroupElem) -> Result<HahnSeries> {
        let mut out = HahnSeries::zero(self.rank());
        for m in c.symbols() {
            let dth = self.coeff_table.get(&m).ok_or(Error::UndeclaredGenerator(m))?;
            let dc = c.partial(m);
            if !dc.is_zero() && !dth.is_exact_zero() {
                out = &out + &dth.scale(&dc);
            }
        }
        Ok(out.shift(g))
    }

    /// `δ` without the multiplier.
    pub fn apply_raw(&self, x: &HahnSeries) -> Result<HahnSeries> {
        self.check_rank(x)?;
        let mut out = HahnSeries::zero(self.rank());
        for (g, c) in x.terms() {
            out = &out + &self.coeff_derivative(c, g)?;
            let lg = self.char_value(g);
            if !lg.is_exact_zero() {
                out = &out + &lg.scale(c).shift(g);
            }
        }
        if let (Some(p), Value::Finite(w)) = (x.precision(), self.weight()) {
            out = out.truncate(&(p + &w));
        }
        Ok(out)
    }

    /// `δ_u(x) = u·δ(x)`.
    pub fn apply_delta(&self, x: &HahnSeries) -> Result<HahnSeries> {
        let raw = self.apply_raw(x)?;
        if self.multiplier.is_exact_one() {
            return Ok(raw);
        }
        Ok(&self.multiplier * &raw)
    }

    /// The truncated derivative `∂x ∈ K/𝔪` of an element of 𝒪.
    pub fn apply_partial(&self, x: &HahnSeries) -> Result<ResidueClass> {
        if !x.in_valuation_ring()? {
            return Err(Error::domain(format!("∂ is defined on the valuation ring; val({x}) < 0")));
        }
        self.apply_delta(x)?.dclass()
    }

    /// `∂log(x) = δ_u(x)/x` reduced modulo 𝔪.
    pub fn dlog(&self, x: &HahnSeries) -> Result<ResidueClass> {
        if x.val()?.is_infinite() {
            return Err(Error::domain("dlog of zero"));
        }
        let dx = self.apply_delta(x)?;
        let vd = match dx.val_lower_bound() {
            Value::Infinity => return Ok(ResidueClass::zero(self.rank())),
            Value::Finite(g) => g,
        };
        // The error of x⁻¹ must stay above 0 after multiplying by δx.
        let inv = x.invert(&(&(-&vd) + &self.margin))?;
        (&dx * &inv).dclass()
    }

    /// Lemma: if `val(x − y) ≤ max(val x, val y)` then
    /// `∂log(x−y) = x/(x−y)·∂log x − y/(x−y)·∂log y`.  Evaluates both sides.
    pub fn check_diffs_identity(&self, x: &HahnSeries, y: &HahnSeries) -> Result<IdentityCheck> {
        let d = x - y;
        let vd = match d.val() {
            Ok(Value::Finite(v)) => v,
            _ => return Err(Error::Precondition(format!("val({x} - ({y})) is not a decidable finite value"))),
        };
        let (vx, vy) = match (x.val(), y.val()) {
            (Ok(Value::Finite(a)), Ok(Value::Finite(b))) => (a, b),
            _ => return Err(Error::Precondition("x and y must be nonzero at their precision".into())),
        };
        if vd > vx.clone().max(vy.clone()) {
            return Err(Error::Precondition(format!("val(x - y) = {vd} exceeds max(val x, val y)")));
        }
        let lhs = self.dlog(&d)?;
        let dx = self.dlog(x)?;
        let dy = self.dlog(y)?;
        let sx = self.quotient(x, &d, &dx)?;
        let sy = self.quotient(y, &d, &dy)?;
        let rhs = &dx.scale_by(&sx)? - &dy.scale_by(&sy)?;
        Ok(IdentityCheck { holds: lhs == rhs, lhs, rhs })
    }

    /// The log-derivation axiom `(x+y)∂log(x+y) = x∂log x + y∂log y` on 𝒪.
    pub fn check_log_axiom(&self, x: &HahnSeries, y: &HahnSeries) -> Result<IdentityCheck> {
        let s = x + y;
        let lhs = self.dlog(&s)?.scale_by(&s)?;
        let rhs = &self.dlog(x)?.scale_by(x)? + &self.dlog(y)?.scale_by(y)?;
        Ok(IdentityCheck { holds: lhs == rhs, lhs, rhs })
    }

    /// `a/d`, known precisely enough to act on `class`.
    fn quotient(&self, a: &HahnSeries, d: &HahnSeries, class: &ResidueClass) -> Result<HahnSeries> {
        let va = a.val_finite()?;
        let need = match class.dval() {
            Value::Finite(g) => &(-&g) + &self.margin,
            Value::Infinity => self.margin.clone(),
        };
        let inv = d.invert(&(&need - &va))?;
        Ok((a * &inv).truncate(&need))
    }

    fn check_rank(&self, x: &HahnSeries) -> Result<()> {
        if x.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::Structural(format!("series of rank {} under a rank-{} derivation", x.rank(), self.rank())))
        }
    }
}

/// Both sides of an identity evaluated in D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: ResidueClass,
    pub rhs: ResidueClass,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn s2(x: &str) -> HahnSeries {
        parse_series(x, 2).unwrap()
    }

    fn s1(x: &str) -> HahnSeries {
        parse_series(x, 1).unwrap()
    }

    fn theta_model() -> DerivationSpec {
        DerivationSpec::partial_zero().with_coeff(1, s2("t^-3")).unwrap()
    }

    #[test]
    fn partial_zero_formula() {
        let d = DerivationSpec::partial_zero();
        assert!(d.apply_delta(&s2("t^[3;2]")).unwrap().definitely_equal(&s2("3*t^[2;2]")));
        assert!(d.apply_delta(&s2("t^5")).unwrap().is_exact_zero());
        assert!(d.apply_delta(&s2("t^[1;0]")).unwrap().definitely_equal(&s2("1")));
    }

    #[test]
    fn coefficient_derivative() {
        let d = theta_model();
        assert!(d.apply_delta(&s2("th1*t")).unwrap().definitely_equal(&s2("t^-2")));
        assert_eq!(DerivationSpec::partial_zero().apply_delta(&s2("th1*t")), Err(Error::UndeclaredGenerator(1)));
    }

    #[test]
    fn truncated_derivative() {
        let d = DerivationSpec::partial_zero();
        let c = d.apply_partial(&s2("t^[1;0]")).unwrap();
        assert_eq!(c.dval(), Value::Finite(GroupElem::zero(2)));
        assert!(d.apply_partial(&s2("3/7")).unwrap().is_zero());
        let c = theta_model().apply_partial(&s2("th1*t")).unwrap();
        assert_eq!(c.dval(), Value::Finite(GroupElem::from_ints(&[0, -2])));
    }

    #[test]
    fn dlog_examples() {
        let d = DerivationSpec::partial_zero();
        assert_eq!(d.dlog(&s2("t^[1;0]")).unwrap().rep(), &s2("t^[-1;0]"));
        assert!(d.dlog(&s2("5")).unwrap().is_zero());
        let dt = DerivationSpec::d_dt();
        assert_eq!(dt.dlog(&s1("1 - t")).unwrap().rep(), &s1("-1"));
    }

    #[test]
    fn diffs_examples() {
        let dt = DerivationSpec::d_dt();
        let c = dt.check_diffs_identity(&s1("1"), &s1("t")).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs.rep(), &s1("-1"));
        let d = DerivationSpec::partial_zero();
        assert!(d.check_diffs_identity(&s2("t^[1;0]"), &s2("1")).unwrap().holds);
        let x = s2("1 + t");
        assert!(matches!(d.check_diffs_identity(&x, &x), Err(Error::Precondition(_))));
    }

    #[test]
    fn multiplier_must_be_unit() {
        let d = DerivationSpec::partial_zero();
        assert!(d.clone().with_multiplier(s2("1 + t")).is_ok());
        assert!(matches!(d.with_multiplier(s2("t")), Err(Error::Domain(_))));
    }
}
