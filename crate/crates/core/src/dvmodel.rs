//! A finite stage of a dense diffeovalued field.
//!
//! The model is a value group, a derivation, and an append-only log of
//! adjoined transcendentals.  Density is never asserted of the model as a
//! whole: a query `val(x − a) > γ, δx = b` is answered by adjoining a fresh
//! `th` with a prescribed derivative, so that `x = a + th·t^g` meets it
//! exactly.  Earlier series never mention the new symbol, so their
//! derivatives are untouched.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::coeffield::KElem;
use crate::deriv::DerivationSpec;
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::ordgroup::{GroupElem, Value, ValueGroupDesc};

/// Where an element sits in the chain `I ⊂ Q ⊂ R ⊂ 𝒪 ⊂ K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RingTag {
    InI,
    InQNotI,
    InRNotQ,
    InONotR,
    NotInO,
    /// The stored precision cannot resolve a needed sign.
    Undecidable(String),
}

impl RingTag {
    pub fn in_o(&self) -> bool {
        matches!(self, RingTag::InI | RingTag::InQNotI | RingTag::InRNotQ | RingTag::InONotR)
    }

    pub fn in_r(&self) -> bool {
        matches!(self, RingTag::InI | RingTag::InQNotI | RingTag::InRNotQ)
    }

    pub fn in_q(&self) -> bool {
        matches!(self, RingTag::InI | RingTag::InQNotI)
    }

    pub fn in_i(&self) -> bool {
        matches!(self, RingTag::InI)
    }

    /// Snake-case name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            RingTag::InI => "in_I",
            RingTag::InQNotI => "in_Q_not_I",
            RingTag::InRNotQ => "in_R_not_Q",
            RingTag::InONotR => "in_O_not_R",
            RingTag::NotInO => "not_in_O",
            RingTag::Undecidable(_) => "undecidable",
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One adjoined generator: `d(th_index) = dtheta`, introduced at exponent `exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub index: usize,
    pub exponent: Option<GroupElem>,
    pub dtheta: HahnSeries,
    pub purpose: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvModel {
    group: ValueGroupDesc,
    deriv: DerivationSpec,
    generators: Vec<GeneratorRecord>,
    precision: GroupElem,
}

/// Result of a density query: the witness and the generator it consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityWitness {
    pub x: HahnSeries,
    pub generator: usize,
    pub exponent: GroupElem,
}

/// A neutralizer `a†` together with the generator adjoined to build it, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neutralizer {
    pub a_dagger: HahnSeries,
    pub adjoined: Option<usize>,
}

/// `elements[target] = q1·elements[first] + rest`, where `rest = q2·elements[second]`
/// with `q1, q2 ∈ Q`.  Both `q1` and `rest` are exact; `q2` itself is a finite
/// series only when `elements[second]` is a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleRelation {
    pub target: usize,
    pub first: usize,
    pub second: usize,
    pub q1: HahnSeries,
    pub rest: HahnSeries,
    pub q2: Option<HahnSeries>,
    pub adjoined: Vec<usize>,
}

/// `n/d` scaled so that `d` becomes a monic unit: `n' = n·s`, `d' = d·s`, and
/// `e = d'δn' − n'δd'`.  Then `val(n/d) = val(n')`, `δ(n/d) = e/d'²`, and the
/// constant terms of `n/d` and `δ(n/d)` are those of `n'` and `e`.
pub(crate) struct Quotient {
    pub n: HahnSeries,
    pub e: HahnSeries,
}

impl Quotient {
    pub fn tag(&self) -> Result<RingTag> {
        let sx = self.n.val_sign()?;
        if sx == Ordering::Less {
            return Ok(RingTag::NotInO);
        }
        Ok(match (self.e.val_sign()?, sx) {
            (Ordering::Less, _) => RingTag::InONotR,
            (Ordering::Equal, _) => RingTag::InRNotQ,
            (Ordering::Greater, Ordering::Greater) => RingTag::InI,
            (Ordering::Greater, _) => RingTag::InQNotI,
        })
    }
}

/// A violation of the V-topology axiom for `U = R`, `V = aR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTopologyRefutation {
    pub x: HahnSeries,
    pub y: HahnSeries,
    pub generator: usize,
}

impl DvModel {
    pub fn new(group: ValueGroupDesc, deriv: DerivationSpec, precision: GroupElem) -> Result<Self> {
        if group.rank() != deriv.rank() {
            return Err(Error::Structural(format!(
                "group {group} and derivation of rank {} disagree",
                deriv.rank()
            )));
        }
        group.check(&precision)?;
        let generators = deriv
            .coeff_table()
            .iter()
            .map(|(m, d)| GeneratorRecord { index: *m, exponent: None, dtheta: d.clone(), purpose: "declared".into() })
            .collect();
        Ok(Self { group, deriv, generators, precision })
    }

    /// ℤ + ℤω with `∂₀`, working precision `[4;0]`.
    pub fn partial_zero() -> Self {
        Self::new(ValueGroupDesc::z_plus_z_omega(), DerivationSpec::partial_zero(), GroupElem::from_ints(&[4, 0]))
            .expect("consistent base model")
    }

    /// ℤ with `d/dt`, working precision `12`.
    pub fn d_dt() -> Self {
        Self::new(ValueGroupDesc::integers(), DerivationSpec::d_dt(), GroupElem::from_ints(&[12]))
            .expect("consistent base model")
    }

    pub fn group(&self) -> &ValueGroupDesc {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn deriv(&self) -> &DerivationSpec {
        &self.deriv
    }

    pub fn generators(&self) -> &[GeneratorRecord] {
        &self.generators
    }

    pub fn precision(&self) -> &GroupElem {
        &self.precision
    }

    pub fn set_precision(&mut self, p: GroupElem) -> Result<()> {
        self.group.check(&p)?;
        self.precision = p;
        Ok(())
    }

    pub fn unit(&self) -> GroupElem {
        self.group.least_unit()
    }

    /// Declares a generator by hand (as a model file does).
    pub fn declare_generator(&mut self, index: usize, dtheta: HahnSeries, purpose: &str) -> Result<()> {
        if self.deriv.coeff_table().contains_key(&index) {
            return Err(Error::Model(format!("th{index} is already declared")));
        }
        self.check_series(&dtheta)?;
        self.deriv.set_coeff(index, dtheta.clone())?;
        self.generators.push(GeneratorRecord { index, exponent: None, dtheta, purpose: purpose.into() });
        Ok(())
    }

    /// Default working precision: `[4;0;…;0]` in rank ≥ 2, `12` in rank 1.
    pub fn default_precision(rank: usize) -> GroupElem {
        let mut c = vec![0; rank];
        c[0] = if rank == 1 { 12 } else { 4 };
        GroupElem::from_ints(&c)
    }

    /// Changes `d th_index` of a declared generator.
    pub(crate) fn redefine_generator(&mut self, index: usize, dtheta: HahnSeries) -> Result<()> {
        self.check_series(&dtheta)?;
        let rec = self
            .generators
            .iter_mut()
            .find(|r| r.index == index)
            .ok_or(Error::UndeclaredGenerator(index))?;
        rec.dtheta = dtheta.clone();
        self.deriv.set_coeff(index, dtheta)
    }

    /// Overwrites purpose and exponent of already-declared generators (model files keep them).
    pub(crate) fn annotate_generator(&mut self, index: usize, exponent: Option<GroupElem>, purpose: &str) -> Result<()> {
        let rec = self
            .generators
            .iter_mut()
            .find(|r| r.index == index)
            .ok_or(Error::UndeclaredGenerator(index))?;
        rec.exponent = exponent;
        rec.purpose = purpose.into();
        Ok(())
    }

    /// Replaces the multiplier `u` of the lifted derivation.
    pub fn set_multiplier(&mut self, u: HahnSeries) -> Result<()> {
        self.check_series(&u)?;
        self.deriv.set_multiplier(u)
    }

    /// Checks exponents against the group and symbols against the generator table.
    pub fn check_series(&self, x: &HahnSeries) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::Structural(format!("series of rank {} in a rank-{} model", x.rank(), self.rank())));
        }
        for (g, _) in x.terms() {
            self.group.check(g)?;
        }
        if let Some(p) = x.precision() {
            self.group.check(p)?;
        }
        for m in x.symbols() {
            if !self.deriv.coeff_table().contains_key(&m) {
                return Err(Error::UndeclaredGenerator(m));
            }
        }
        Ok(())
    }

    fn next_generator(&self) -> usize {
        self.deriv.coeff_table().keys().next_back().map_or(1, |m| m + 1)
    }

    pub fn delta(&self, x: &HahnSeries) -> Result<HahnSeries> {
        self.deriv.apply_delta(x)
    }

    /// Tag from the signs of `val(x)` and `val(δx)`; `val(∂x) > 0` means `∂x = 0` in K/𝔪.
    pub fn classify_ring(&self, x: &HahnSeries) -> Result<RingTag> {
        let sx = match x.val_sign() {
            Ok(s) => s,
            Err(e) => return Ok(RingTag::Undecidable(e.to_string())),
        };
        if sx == Ordering::Less {
            return Ok(RingTag::NotInO);
        }
        let dx = self.delta(x)?;
        let sd = match dx.val_sign() {
            Ok(s) => s,
            Err(e) => return Ok(RingTag::Undecidable(e.to_string())),
        };
        Ok(match (sd, sx) {
            (Ordering::Less, _) => RingTag::InONotR,
            (Ordering::Equal, _) => RingTag::InRNotQ,
            (Ordering::Greater, Ordering::Greater) => RingTag::InI,
            (Ordering::Greater, _) => RingTag::InQNotI,
        })
    }

    /// `val_∂(x) = val_D(∂x)`: a value ≤ 0, or `+∞` exactly when `x ∈ Q`.
    pub fn val_partial(&self, x: &HahnSeries) -> Result<Value> {
        Ok(self.deriv.apply_partial(x)?.dval())
    }

    /// A neutralizer that needs no new generator: `1` on `R∖Q`, else a monomial
    /// `t^g ∈ Q` with `g = −val_∂(x)` pushing `x` into `R∖Q`.
    pub fn find_neutralizer(&self, x: &HahnSeries) -> Result<Option<HahnSeries>> {
        let g = self.neutralizer_exponent(x)?;
        if g.is_zero() {
            return Ok(Some(HahnSeries::one(self.rank())));
        }
        let cand = HahnSeries::t_pow(g);
        if self.is_neutralizer(x, &cand)? {
            return Ok(Some(cand));
        }
        Ok(None)
    }

    fn neutralizer_exponent(&self, x: &HahnSeries) -> Result<GroupElem> {
        match self.classify_ring(x)? {
            RingTag::InRNotQ | RingTag::InONotR => {}
            RingTag::InI | RingTag::InQNotI => {
                return Err(Error::NoNeutralizer(format!("{x} lies in Q")));
            }
            RingTag::NotInO => return Err(Error::domain(format!("{x} is not in the valuation ring"))),
            RingTag::Undecidable(why) => return Err(Error::precision(why)),
        }
        match self.val_partial(x)? {
            Value::Finite(v) => Ok(-v),
            Value::Infinity => Err(Error::NoNeutralizer(format!("{x} lies in Q"))),
        }
    }

    /// Checks the defining property: `a† ∈ Q` and `x·a† ∈ R∖Q`.
    pub fn is_neutralizer(&self, x: &HahnSeries, a_dagger: &HahnSeries) -> Result<bool> {
        Ok(self.classify_ring(a_dagger)?.in_q() && self.classify_ring(&(x * a_dagger))? == RingTag::InRNotQ)
    }

    /// A neutralizer, adjoining `th` with `d th = −th·L(g)` (so `th·t^g ∈ Q`)
    /// when no monomial of the model works.
    pub fn neutralizer(&mut self, x: &HahnSeries) -> Result<Neutralizer> {
        if let Some(a) = self.find_neutralizer(x)? {
            return Ok(Neutralizer { a_dagger: a, adjoined: None });
        }
        let g = self.neutralizer_exponent(x)?;
        let m = self.next_generator();
        let th = KElem::symbol(m);
        let dtheta = (-&self.deriv.char_value(&g)).scale(&th);
        self.push_generator(m, Some(g.clone()), dtheta, "neutralizer")?;
        let a = HahnSeries::monomial(th, g);
        if !self.is_neutralizer(x, &a)? {
            return Err(Error::precision(format!("could not certify {a} as a neutralizer of {x}")));
        }
        Ok(Neutralizer { a_dagger: a, adjoined: Some(m) })
    }

    fn push_generator(&mut self, m: usize, exponent: Option<GroupElem>, dtheta: HahnSeries, purpose: &str) -> Result<()> {
        self.deriv.set_coeff(m, dtheta.clone())?;
        self.generators.push(GeneratorRecord { index: m, exponent, dtheta, purpose: purpose.into() });
        Ok(())
    }

    /// `b/u`, exact when `u = 1` or a single term.
    fn divide_by_multiplier(&self, b: &HahnSeries) -> Result<HahnSeries> {
        let u = self.deriv.multiplier();
        if u.is_exact_one() {
            return Ok(b.clone());
        }
        let inv = if u.num_terms() == 1 { u.inverse_monomial()? } else { u.invert(&self.precision)? };
        Ok(b * &inv)
    }

    /// Some `x` with `val(x − a) > γ` and `δx = b`: adjoins `th` and sets
    /// `x = a + th·t^g`, `g = max(γ, 0) + unit`, with
    /// `d th = (b/u − δa)·t^{−g} − th·L(g)`.
    pub fn solve_density(&mut self, a: &HahnSeries, b: &HahnSeries, gamma: &GroupElem) -> Result<DensityWitness> {
        self.check_series(a)?;
        self.check_series(b)?;
        self.group.check(gamma)?;
        let zero = GroupElem::zero(self.rank());
        let g = &gamma.clone().max(zero) + &self.unit();
        let m = self.next_generator();
        let th = KElem::symbol(m);
        let target = self.divide_by_multiplier(b)?;
        let residual = &target - &self.deriv.apply_raw(a)?;
        let dtheta = &residual.shift(&-&g) - &self.deriv.char_value(&g).scale(&th);
        self.push_generator(m, Some(g.clone()), dtheta, "density")?;
        let x = a + &HahnSeries::monomial(th, g.clone());
        Ok(DensityWitness { x, generator: m, exponent: g })
    }

    /// Some `a` with `val(a) > γ` and `val_∂(a) < −γ`, for `γ > 0`.
    pub fn weird_witness(&mut self, gamma: &GroupElem) -> Result<DensityWitness> {
        if !gamma.is_positive() {
            return Err(Error::domain(format!("weird elements need γ > 0, got {gamma}")));
        }
        let g = gamma + &self.unit();
        let target = HahnSeries::t_pow(-&g);
        let w = self.solve_density(&HahnSeries::zero(self.rank()), &target, gamma)?;
        let val_ok = w.x.val()? > Value::Finite(gamma.clone());
        let vp_ok = self.val_partial(&w.x)? < Value::Finite(-gamma);
        if !(val_ok && vp_ok) {
            return Err(Error::precision(format!("weird witness {} failed its own check", w.x)));
        }
        Ok(w)
    }

    /// Whether `x` lies in the basic set `{val(x − a) > γ, val(δx − b) > γ}`.
    pub fn dv_ball_member(&self, x: &HahnSeries, a: &HahnSeries, b: &HahnSeries, gamma: &GroupElem) -> Result<bool> {
        let g = Value::Finite(gamma.clone());
        let near = (x - a).val()? > g;
        let dnear = (&self.delta(x)? - b).val()? > g;
        Ok(near && dnear)
    }

    /// For `a ∈ R∖{0}`: `x` with `val(x) > val(a)`, `val(∂x) < 0`, and `y = a/x`,
    /// so `xy ∈ aR` while `x ∉ R` and `y ∉ 𝒪`.
    pub fn refute_vtopology(&mut self, a: &HahnSeries) -> Result<VTopologyRefutation> {
        if !self.classify_ring(a)?.in_r() {
            return Err(Error::domain(format!("{a} is not in R; shrink the neighbourhood first")));
        }
        let va = a.val_finite()?;
        let unit = self.unit();
        let target = HahnSeries::t_pow(-&unit);
        let w = self.solve_density(&HahnSeries::zero(self.rank()), &target, &va)?;
        let y = a * &w.x.inverse_monomial()?;
        let ok = self.classify_quotient(&(&w.x * &y), a)?.in_r()
            && !self.classify_ring(&w.x)?.in_r()
            && self.classify_ring(&y)? == RingTag::NotInO;
        if !ok {
            return Err(Error::precision(format!("refutation ({}, {y}) failed its own check", w.x)));
        }
        Ok(VTopologyRefutation { x: w.x, y, generator: w.generator })
    }

    /// A nonzero monomial `b ∈ Q` with `val(b) ≥ val(a)`.
    pub fn cofinal_q_element(&self, a: &HahnSeries) -> Result<HahnSeries> {
        let v = a.val_finite()?;
        if !v.is_positive() {
            return Ok(HahnSeries::one(self.rank()));
        }
        let unit = self.unit();
        let candidates = (1..=8)
            .map(|k| v.mul_int(k))
            .chain((1..=8).map(|j| &v + &unit.mul_int(j)));
        for g in candidates {
            let b = HahnSeries::t_pow(g);
            if self.classify_ring(&b)?.in_q() {
                return Ok(b);
            }
        }
        Err(Error::EmptyWindow(format!("no monomial of Q found above val {v}")))
    }

    /// Expresses one of `a, b, c` through the other two with coefficients in Q.
    ///
    /// Normalizes by an element of least valuation, orders the other two by
    /// `val_∂`, and either finds the larger one already in `Q·1` (preferring a
    /// multiple of its partner when that quotient is in Q) or matches
    /// derivatives: `x₀ = δb/δa`, replaced by some `x ∈ Q` close to it,
    /// found by one density query when `x₀ ∉ Q` itself.
    pub fn reduce_triple(&mut self, elems: [&HahnSeries; 3]) -> Result<TripleRelation> {
        for e in elems {
            self.check_series(e)?;
        }
        let mut vals = Vec::new();
        for e in elems {
            vals.push(e.val()?);
        }
        let ci = (0..3).min_by(|i, j| vals[*i].cmp(&vals[*j])).expect("three elements");
        let Value::Finite(_) = &vals[ci] else {
            return Err(Error::domain("all three elements are zero"));
        };
        let c = elems[ci];
        let others: Vec<usize> = (0..3).filter(|i| *i != ci).collect();
        let monomial_c = c.is_exact() && c.num_terms() == 1;
        // Working precision for 1/c; raised until x₀ is known far enough.
        let mut cprec = self.precision.clone();
        for _ in 0..8 {
            let c_inv = if monomial_c { c.inverse_monomial()? } else { c.invert(&cprec)? };
            let normalized: Vec<HahnSeries> = others.iter().map(|i| elems[*i] * &c_inv).collect();
            let mut vps = Vec::new();
            for n in &normalized {
                vps.push(self.val_partial(n)?);
            }
            let (ai, bi) = if vps[1] < vps[0] { (1, 0) } else { (0, 1) };
            let (a1, b1) = (&normalized[ai], &normalized[bi]);
            let (a_idx, b_idx) = (others[ai], others[bi]);
            let mut adjoined = Vec::new();

            let x = if vps[bi].is_infinite() {
                let q = if monomial_c { self.q_quotient(b1, a1)? } else { None };
                q.unwrap_or_else(|| HahnSeries::zero(self.rank()))
            } else {
                let da = self.delta(a1)?;
                let db = self.delta(b1)?;
                let vda = da.val_finite()?;
                let vdb = db.val_finite()?;
                let need = &(-&vda) + &self.unit();
                let x0 = if da.num_terms() == 1 && da.is_exact() {
                    &db * &da.inverse_monomial()?
                } else {
                    &db * &da.invert(&(&need - &vdb))?
                };
                if let Some(p) = x0.precision() {
                    if *p < need {
                        cprec = &cprec + &(&need - p);
                        continue;
                    }
                }
                let x0 = x0.truncate(&need).to_exact();
                if self.classify_ring(&x0)?.in_q() {
                    x0
                } else {
                    let w = self.solve_density(&x0, &HahnSeries::zero(self.rank()), &(-&vda))?;
                    adjoined.push(w.generator);
                    w.x
                }
            };
            if !(x.is_exact_zero() || self.classify_ring(&x)?.in_q()) {
                return Err(Error::precision(format!("coefficient {x} could not be certified in Q")));
            }
            let rest = elems[b_idx] - &(&x * elems[a_idx]);
            if !rest.is_exact() {
                return Err(Error::precision("inputs are not exact; the relation cannot be closed".to_string()));
            }
            if !(rest.is_exact_zero() || self.quotient(&rest, c)?.tag()?.in_q()) {
                return Err(Error::precision(format!("({rest})/({c}) could not be certified in Q")));
            }
            let q2 = monomial_c.then(|| &rest * &c_inv);
            return Ok(TripleRelation { target: b_idx, first: a_idx, second: ci, q1: x, rest, q2, adjoined });
        }
        Err(Error::precision("could not approximate the derivative ratio closely enough"))
    }

    /// The pieces of `n/d` used to classify it without a series inverse.
    pub(crate) fn quotient(&self, n: &HahnSeries, d: &HahnSeries) -> Result<Quotient> {
        let (g, c) = d
            .leading_term()
            .cloned()
            .ok_or_else(|| Error::domain(format!("division by {d}, which is not known to be nonzero")))?;
        let s = HahnSeries::monomial(c.inv()?, -&g);
        let (n, d) = (n * &s, d * &s);
        let e = &(&d * &self.delta(&n)?) - &(&n * &self.delta(&d)?);
        Ok(Quotient { n, e })
    }

    /// Ring membership of `n/d`, decided without inverting `d`.
    pub fn classify_quotient(&self, n: &HahnSeries, d: &HahnSeries) -> Result<RingTag> {
        self.quotient(n, d)?.tag()
    }

    fn q_quotient(&self, b: &HahnSeries, a: &HahnSeries) -> Result<Option<HahnSeries>> {
        if a.num_terms() != 1 || !a.is_exact() {
            return Ok(None);
        }
        let q = b * &a.inverse_monomial()?;
        Ok(if q.is_exact_zero() || self.classify_ring(&q)?.in_q() { Some(q) } else { None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn s(x: &str) -> HahnSeries {
        parse_series(x, 2).unwrap()
    }

    fn g(c: &[i64]) -> GroupElem {
        GroupElem::from_ints(c)
    }

    fn theta_model() -> DvModel {
        let mut m = DvModel::partial_zero();
        m.declare_generator(1, s("t^-3"), "declared").unwrap();
        m
    }

    #[test]
    fn classification_examples() {
        let m = theta_model();
        assert_eq!(m.classify_ring(&s("t^[1;0]")).unwrap(), RingTag::InRNotQ);
        assert_eq!(m.classify_ring(&s("t^[2;0]")).unwrap(), RingTag::InI);
        assert_eq!(m.classify_ring(&s("th1*t")).unwrap(), RingTag::InONotR);
        assert_eq!(m.classify_ring(&s("t^-1")).unwrap(), RingTag::NotInO);
        assert!(matches!(m.classify_ring(&s("O(t^-1)")).unwrap(), RingTag::Undecidable(_)));
    }

    #[test]
    fn val_partial_examples() {
        let m = theta_model();
        assert_eq!(m.val_partial(&s("t^[1;0]")).unwrap(), Value::Finite(g(&[0, 0])));
        assert_eq!(m.val_partial(&s("t^[2;0]")).unwrap(), Value::Infinity);
        assert_eq!(m.val_partial(&s("th1*t")).unwrap(), Value::Finite(g(&[0, -2])));
    }

    #[test]
    fn neutralizer_examples() {
        let mut m = theta_model();
        assert!(m.neutralizer(&s("t^[1;0]")).unwrap().a_dagger.is_exact_one());
        let n = m.neutralizer(&s("th1*t")).unwrap();
        assert!(n.a_dagger.definitely_equal(&s("t^2")));
        assert_eq!(n.adjoined, None);
        assert!(matches!(m.neutralizer(&s("t")), Err(Error::NoNeutralizer(_))));
    }

    #[test]
    fn neutralizer_falls_back_to_adjunction() {
        // Under d/dt, t ∈ R∖Q … but x = th·t with d th = t⁻² has val_∂ = −1 and t¹ ∉ Q.
        let mut m = DvModel::d_dt();
        m.declare_generator(1, parse_series("t^-2", 1).unwrap(), "declared").unwrap();
        let x = parse_series("th1*t", 1).unwrap();
        assert_eq!(m.val_partial(&x).unwrap(), Value::Finite(GroupElem::from_ints(&[-1])));
        let n = m.neutralizer(&x).unwrap();
        assert_eq!(n.adjoined, Some(2));
        assert!(m.is_neutralizer(&x, &n.a_dagger).unwrap());
    }

    #[test]
    fn density_examples() {
        let mut m = DvModel::partial_zero();
        let w = m.solve_density(&s("0"), &s("t^[-1;0]"), &g(&[0, 5])).unwrap();
        assert!(w.x.definitely_equal(&s("th1*t^6")));
        assert!(m.deriv().coeff_table()[&1].definitely_equal(&s("t^[-1;-6]")));
        assert!(m.delta(&w.x).unwrap().definitely_equal(&s("t^[-1;0]")));

        let w2 = m.solve_density(&s("t^[1;0]"), &s("2"), &g(&[0, 3])).unwrap();
        assert!(m.delta(&w2.x).unwrap().definitely_equal(&s("2")));
        // The first witness is unaffected.
        assert!(m.delta(&w.x).unwrap().definitely_equal(&s("t^[-1;0]")));
    }

    #[test]
    fn weird_witness_examples() {
        let mut m = DvModel::partial_zero();
        let w = m.weird_witness(&g(&[0, 1])).unwrap();
        assert_eq!(w.exponent, g(&[0, 2]));
        assert!(m.delta(&w.x).unwrap().definitely_equal(&s("t^-2")));
        let w = m.weird_witness(&g(&[1, 0])).unwrap();
        assert_eq!(w.exponent, g(&[1, 1]));
        assert!(m.weird_witness(&g(&[0, 0])).is_err());
    }

    #[test]
    fn ball_and_vtopology() {
        let mut m = DvModel::partial_zero();
        assert!(m.dv_ball_member(&s("t^[1;0]"), &s("0"), &s("1"), &g(&[0, 2])).unwrap());
        let r = m.refute_vtopology(&s("t^2")).unwrap();
        assert!(r.x.definitely_equal(&s("th1*t^3")));
        assert!(m.delta(&r.x).unwrap().definitely_equal(&s("t^-1")));
    }

    #[test]
    fn cofinal_examples() {
        let m = DvModel::partial_zero();
        assert!(m.cofinal_q_element(&s("t^[1;0]")).unwrap().definitely_equal(&s("t^[2;0]")));
        assert!(m.cofinal_q_element(&s("1")).unwrap().is_exact_one());
        assert!(m.cofinal_q_element(&s("t^-5")).unwrap().is_exact_one());
    }

    #[test]
    fn triple_examples() {
        let mut m = theta_model();
        let r = m.reduce_triple([&s("1"), &s("t"), &s("t^2")]).unwrap();
        assert_eq!((r.target, r.first, r.second), (2, 1, 0));
        assert!(r.q1.definitely_equal(&s("t")) && r.rest.is_exact_zero());

        let r = m.reduce_triple([&s("1"), &s("1"), &s("1")]).unwrap();
        assert!(r.q1.is_exact_one() && r.rest.is_exact_zero());

        let r = m.reduce_triple([&s("1"), &s("th1*t"), &s("th1*t^2")]).unwrap();
        assert_eq!((r.target, r.first), (2, 1));
        assert!(r.q1.definitely_equal(&s("t")) && r.q2.unwrap().is_exact_zero());
    }
}
