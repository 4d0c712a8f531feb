//! The 2-inflator attached to a diffeovalued field.
//!
//! Everything is driven by the generalized residue `ŵres: R → k[ε]`,
//! `ŵres(x) = res(x) + res₂(∂x)·ε`, whose kernel is `I`.  A line `K·v ⊆ Kⁿ`
//! specializes to the image of `K·v ∩ Rⁿ` under `ŵres` coordinatewise.
//!
//! Quotients `n/d` are classified without inverting `d`: after scaling `d`
//! to a monic unit `d'` (and `n` alike), `val(n/d) = val(n')` and
//! `δ(n/d) = (d'δn' − n'δd')/d'²`, whose constant term is that of the numerator.

mod eps;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

pub use eps::{apply_matrix, Completeness, EpsSubspace};

use crate::coeffield::{DualNumber, KElem};
use crate::dvmodel::{DvModel, Quotient, RingTag};
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::ordgroup::GroupElem;
use crate::rational::Q;

/// A line `K·(a₁, …, a_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    coords: Vec<HahnSeries>,
}

impl Line {
    /// Needs `n ≥ 1`, a common rank, and one coordinate known to be nonzero.
    pub fn new(coords: Vec<HahnSeries>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::Structural("a line needs at least one coordinate".into()));
        };
        for c in &coords {
            first.check_rank(c)?;
        }
        let mut any = false;
        for c in &coords {
            if c.has_no_terms() && !c.is_exact() {
                return Err(Error::precision(format!("coordinate {c} is not known to be zero or nonzero")));
            }
            any |= !c.has_no_terms();
        }
        if !any {
            return Err(Error::domain("the zero vector spans no line"));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[HahnSeries] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.coords[0].rank()
    }

    /// Index of the first nonzero coordinate, by which the canonical form divides.
    pub fn first_nonzero(&self) -> usize {
        self.coords.iter().position(|c| !c.has_no_terms()).expect("validated line")
    }

    /// `g·L` for a rational matrix acting on coordinates.
    pub fn transform(&self, g: &[Vec<Q>]) -> Result<Line> {
        if g.len() != self.len() || g.iter().any(|r| r.len() != self.len()) {
            return Err(Error::Structural("matrix and line sizes differ".into()));
        }
        let rank = self.rank();
        let coords = g
            .iter()
            .map(|row| {
                row.iter().zip(&self.coords).fold(HahnSeries::zero(rank), |acc, (c, x)| {
                    if c.is_zero() {
                        acc
                    } else {
                        &acc + &x.scale(&KElem::from_rational(c.clone()))
                    }
                })
            })
            .collect();
        Line::new(coords)
    }

    fn symbols(&self) -> BTreeSet<usize> {
        self.coords.iter().flat_map(HahnSeries::symbols).collect()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "K*({})", parts.join(", "))
    }
}

/// The probes `1/x` and `1/(x − c)` used to recognise tame elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    Inverse,
    Shift(i64),
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Inverse => f.write_str("1/x"),
            Probe::Shift(c) if *c < 0 => write!(f, "1/(x+{})", -c),
            Probe::Shift(c) => write!(f, "1/(x-{c})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TameClass {
    InR(DualNumber),
    TameViaProbe { probe: Probe, wres: DualNumber },
    Wild,
}

impl TameClass {
    pub fn is_wild(&self) -> bool {
        matches!(self, TameClass::Wild)
    }

    pub fn name(&self) -> &'static str {
        match self {
            TameClass::InR(_) => "in_R",
            TameClass::TameViaProbe { .. } => "tame_via_probe",
            TameClass::Wild => "wild",
        }
    }
}

/// How a specialization was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SpecMethod {
    /// Every coordinate divided by coordinate `pivot` lies in R.
    Graph { pivot: usize },
    /// `K·(x₁, x₂)` with `x₂/x₁` tame through a probe.
    Probe { probe: Probe },
    Wild,
    /// Scalings `λ` with `λ·v ∈ Rⁿ` found in a search window.
    Enumeration { tried: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub space: EpsSubspace,
    pub method: SpecMethod,
    /// Scalings `λ` whose images `ŵres(λ·v)` generate `space`.
    pub witnesses: Vec<HahnSeries>,
}

/// Exponent box `lo ≤ g ≤ hi` (coordinatewise, integer steps) searched for scalings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// Cap on the number of monomials paired into binomials.
    pub binomial_pool: usize,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        Self { lo, hi, binomial_pool: 24 }
    }

    /// `[-1..2] × [-4..4]` in rank 2, `[-4..4]` in rank 1, `[-2..2]` per coordinate otherwise.
    pub fn default_for(rank: usize) -> Self {
        match rank {
            1 => Self::new(vec![-4], vec![4]),
            2 => Self::new(vec![-1, -4], vec![2, 4]),
            r => Self::new(vec![-2; r], vec![2; r]),
        }
    }

    fn exponents(&self, m: &DvModel) -> Result<Vec<GroupElem>> {
        if self.lo.len() != m.rank() || self.hi.len() != m.rank() {
            return Err(Error::Structural(format!("window of rank {} in a rank-{} model", self.lo.len(), m.rank())));
        }
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return Err(Error::EmptyWindow("window has an empty coordinate range".into()));
        }
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out.into_iter().flat_map(|p| (*l..=*h).map(move |e| [p.clone(), vec![e]].concat())).collect();
        }
        let mut gs: Vec<GroupElem> =
            out.iter().map(|v| GroupElem::from_ints(v)).filter(|g| m.group().contains(g)).collect();
        // Small exponents first: they are the likeliest scalings.
        gs.sort_by_key(|g| g.coords().iter().map(|c| c.abs()).fold(Q::zero(), |a, b| a + b));
        Ok(gs)
    }
}

/// An exact quotient `n/d` under classification.
struct Fraction(Quotient);

impl Fraction {
    fn new(m: &DvModel, n: &HahnSeries, d: &HahnSeries) -> Result<Self> {
        Ok(Self(m.quotient(n, d)?))
    }

    fn tag(&self) -> Result<RingTag> {
        self.0.tag()
    }

    fn in_r(&self) -> Result<bool> {
        Ok(self.tag()?.in_r())
    }

    fn wres(&self) -> Result<DualNumber> {
        Ok(DualNumber::new(self.0.n.res()?, self.0.e.res()?))
    }
}

/// `ŵres(x) = res(x) + res₂(∂x)·ε` for `x ∈ R`.
pub fn wres(m: &DvModel, x: &HahnSeries) -> Result<DualNumber> {
    m.check_series(x)?;
    match m.classify_ring(x)? {
        RingTag::Undecidable(why) => Err(Error::precision(why)),
        t if t.in_r() => Ok(DualNumber::new(x.res()?, m.delta(x)?.res()?)),
        t => Err(Error::domain(format!("ŵres is defined on R, but {x} is {t}"))),
    }
}

/// `ŵres(n/d)` without inverting `d`; errors unless `n/d ∈ R`.
pub fn wres_quotient(m: &DvModel, n: &HahnSeries, d: &HahnSeries) -> Result<DualNumber> {
    let f = Fraction::new(m, n, d)?;
    if !f.in_r()? {
        return Err(Error::domain(format!("({n})/({d}) is not in R")));
    }
    f.wres()
}

/// Ring membership of `n/d`, decided without inverting `d`.
pub fn classify_quotient(m: &DvModel, n: &HahnSeries, d: &HahnSeries) -> Result<RingTag> {
    m.classify_quotient(n, d)
}

/// Tame (some probe of `x` lies in R) or wild.
pub fn classify_tame(m: &DvModel, x: &HahnSeries) -> Result<TameClass> {
    m.check_series(x)?;
    if x.has_no_terms() {
        return Err(Error::domain("classify_tame needs a nonzero element"));
    }
    let one = HahnSeries::one(x.rank());
    let f = Fraction::new(m, x, &one)?;
    if f.in_r()? {
        return Ok(TameClass::InR(f.wres()?));
    }
    for (probe, d) in probes(x) {
        if d.has_no_terms() {
            return Err(Error::domain(format!("x equals the probe constant of {probe}")));
        }
        let f = Fraction::new(m, &one, &d)?;
        if f.in_r()? {
            return Ok(TameClass::TameViaProbe { probe, wres: f.wres()? });
        }
    }
    Ok(TameClass::Wild)
}

/// Probe denominators `x`, `x − 1`, `x + 1`.
fn probes(x: &HahnSeries) -> Vec<(Probe, HahnSeries)> {
    let one = HahnSeries::one(x.rank());
    vec![(Probe::Inverse, x.clone()), (Probe::Shift(1), x - &one), (Probe::Shift(-1), x + &one)]
}

fn dual(q: i64) -> DualNumber {
    DualNumber::real(KElem::from_int(q))
}

/// `ς_n(L)`: the ŵres-image of `L ∩ Rⁿ`.
///
/// Closed forms cover every line with a coordinate dividing all others in R,
/// and all lines in `K²`; the rest is searched in `window`.
pub fn specialize_line(m: &DvModel, line: &Line, window: &Window) -> Result<Specialization> {
    for c in line.coords() {
        m.check_series(c)?;
    }
    let n = line.len();
    if let Some(s) = graph_form(m, line)? {
        return Ok(s);
    }
    if n == 2 {
        return specialize_pair(m, line);
    }
    enumerate(m, line, window)
}

/// `k[ε]·(ŵres(x_i/x_p))_i` for the first pivot `p` dividing every coordinate in R.
fn graph_form(m: &DvModel, line: &Line) -> Result<Option<Specialization>> {
    let xs = line.coords();
    for p in 0..xs.len() {
        if xs[p].has_no_terms() {
            continue;
        }
        let mut gen = Vec::with_capacity(xs.len());
        for (i, x) in xs.iter().enumerate() {
            if i == p {
                gen.push(DualNumber::one());
                continue;
            }
            if x.has_no_terms() {
                gen.push(DualNumber::zero());
                continue;
            }
            let f = Fraction::new(m, x, &xs[p])?;
            if !f.in_r()? {
                break;
            }
            gen.push(f.wres()?);
        }
        if gen.len() == xs.len() {
            let space = EpsSubspace::module_span(xs.len(), &[gen])?;
            let lambda = HahnSeries::one(line.rank());
            let witness = if xs[p].is_monomial() { xs[p].inverse_monomial().unwrap_or(lambda) } else { lambda };
            return Ok(Some(Specialization { space, method: SpecMethod::Graph { pivot: p }, witnesses: vec![witness] }));
        }
    }
    Ok(None)
}

/// `K·(x₁, x₂)` with both `x₂/x₁` and `x₁/x₂` outside R.
fn specialize_pair(m: &DvModel, line: &Line) -> Result<Specialization> {
    let (x1, x2) = (&line.coords()[0], &line.coords()[1]);
    for c in [1i64, -1] {
        // β = x₁/(x₂ − c·x₁) = 1/(α − c); the line is R·(β, 1 + cβ).
        let d = x2 - &x1.scale(&KElem::from_int(c));
        let f = Fraction::new(m, x1, &d)?;
        if f.in_r()? {
            let w = f.wres()?;
            let gen = vec![w.clone(), &dual(1) + &w.scale(&KElem::from_int(c))];
            let space = EpsSubspace::module_span(2, &[gen])?;
            return Ok(Specialization { space, method: SpecMethod::Probe { probe: Probe::Shift(c) }, witnesses: vec![] });
        }
    }
    let eps = DualNumber::eps();
    let space = EpsSubspace::span(2, &[vec![eps.clone(), DualNumber::zero()], vec![DualNumber::zero(), eps]])?;
    Ok(Specialization { space, method: SpecMethod::Wild, witnesses: vec![] })
}

/// Collects `ŵres(λ·v)` for monomial, then binomial, scalings `λ`.
fn enumerate(m: &DvModel, line: &Line, window: &Window) -> Result<Specialization> {
    let rank = line.rank();
    let n = line.len();
    let mut coeffs = vec![KElem::one()];
    coeffs.extend(line.symbols().into_iter().map(KElem::symbol));
    let mut monomials = Vec::new();
    for g in window.exponents(m)? {
        for c in &coeffs {
            monomials.push(HahnSeries::monomial(c.clone(), g.clone()));
        }
    }
    let pool = window.binomial_pool.min(monomials.len());
    let binomials = (0..pool).flat_map(|i| (i + 1..pool).map(move |j| (i, j)));
    let candidates = monomials
        .iter()
        .cloned()
        .chain(binomials.map(|(i, j)| &monomials[i] + &monomials[j]));

    let mut space = EpsSubspace::zero(n);
    let mut witnesses = Vec::new();
    let mut tried = 0;
    for lambda in candidates {
        if space.dim() >= 2 {
            break;
        }
        tried += 1;
        if let Some(v) = scaled_wres(m, line, &lambda, rank)? {
            if space.insert_module(&v)? {
                witnesses.push(lambda);
            }
        }
    }
    let completeness = if space.dim() >= 2 { Completeness::Complete } else { Completeness::LowerBound };
    Ok(Specialization { space: space.with_completeness(completeness), method: SpecMethod::Enumeration { tried }, witnesses })
}

/// `ŵres(λ·v)` when `λ·v ∈ Rⁿ`; `None` when some coordinate leaves R or is undecidable.
fn scaled_wres(m: &DvModel, line: &Line, lambda: &HahnSeries, rank: usize) -> Result<Option<Vec<DualNumber>>> {
    let mut out = Vec::with_capacity(line.len());
    for x in line.coords() {
        let y = x * lambda;
        if y.has_no_terms() && y.is_exact() {
            out.push(DualNumber::zero());
            continue;
        }
        let f = Fraction::new(m, &y, &HahnSeries::one(rank))?;
        match f.tag() {
            Ok(t) if t.in_r() => out.push(f.wres()?),
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// The Kronecker line `K·(argᵢ·baseⱼ)` (argument index outer) and its specialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub line: Line,
    /// `index_map[k] = (i, j)`: coordinate `k` is `arg[i]·base[j]`.
    pub index_map: Vec<(usize, usize)>,
    pub specialization: Specialization,
}

/// Specializes `arg ⊗ base`, i.e. `ς` mutated along `base`.
pub fn mutate_line(m: &DvModel, base: &Line, arg: &Line, window: &Window) -> Result<Mutation> {
    if let Some(j) = base.coords().iter().position(HahnSeries::has_no_terms) {
        return Err(Error::domain(format!(
            "mutation base {base} has a zero coordinate at index {j}; it does not define an inflator"
        )));
    }
    let mut coords = Vec::new();
    let mut index_map = Vec::new();
    for (i, a) in arg.coords().iter().enumerate() {
        for (j, b) in base.coords().iter().enumerate() {
            coords.push(a * b);
            index_map.push((i, j));
        }
    }
    let line = Line::new(coords)?;
    let specialization = specialize_line(m, &line, window)?;
    Ok(Mutation { line, index_map, specialization })
}

/// The degeneracy ideal `A` with `ς₂(K·(1, α)) = A ⊕ A` for wild `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub space: EpsSubspace,
    pub wild: HahnSeries,
    /// Generator adjoined to build the wild element.
    pub generator: usize,
}

/// Builds a wild element from a weird witness and reads `A` off its line.
pub fn degeneracy_subspace(m: &mut DvModel) -> Result<Degeneracy> {
    let unit = m.unit();
    let w = m.weird_witness(&unit)?;
    if !classify_tame(m, &w.x)?.is_wild() {
        return Err(Error::precision(format!("weird element {} was not certified wild", w.x)));
    }
    let line = Line::new(vec![HahnSeries::one(m.rank()), w.x.clone()])?;
    let spec = specialize_line(m, &line, &Window::default_for(m.rank()))?;
    let basis = spec.space.basis();
    let first: Vec<Vec<DualNumber>> = basis.iter().map(|v| vec![v[0].clone()]).filter(|v| !v[0].is_zero()).collect();
    let second: Vec<Vec<DualNumber>> = basis.iter().map(|v| vec![v[1].clone()]).filter(|v| !v[0].is_zero()).collect();
    let a = EpsSubspace::span(1, &first)?;
    let b = EpsSubspace::span(1, &second)?;
    if !a.same_space(&b) || !a.direct_sum(&b)?.same_space(&spec.space) {
        return Err(Error::SoundnessAlarm(format!("wild line specialized to {}, not A ⊕ A", spec.space)));
    }
    Ok(Degeneracy { space: a, wild: w.x, generator: w.generator })
}

/// One instance of the double-mutation statement: `(s, t, u, v) = ŵres(λ·(1, r, a, ar))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleMutation {
    pub image: [DualNumber; 4],
    /// The `q ∈ k` with `v = q·u`.
    pub q: KElem,
    pub val_r_nonnegative: bool,
    pub res_r: Option<KElem>,
}

impl DoubleMutation {
    /// The conclusion `val(r) ≥ 0` and `res(r) = q`.
    pub fn holds(&self) -> bool {
        self.val_r_nonnegative && self.res_r.as_ref() == Some(&self.q)
    }
}

/// Solves `v = q·u` for `q ∈ k`, given `u ≠ 0`.
pub fn eps_ratio(u: &DualNumber, v: &DualNumber) -> Option<KElem> {
    let q = if !u.a.is_zero() { &v.a / &u.a } else { &v.b / &u.b };
    (u.scale(&q) == *v).then_some(q)
}

/// Evaluates an instance of the double-mutation lemma.  Errors when the
/// data do not satisfy its hypotheses: `val(a) > 0`, `λ·(1, r, a, ar) ∈ R⁴`,
/// `u ≠ 0`, and `v ∈ k·u`.
pub fn check_double_mutation(m: &DvModel, a: &HahnSeries, r: &HahnSeries, lambda: &HahnSeries) -> Result<DoubleMutation> {
    if a.val_sign()? != Ordering::Greater || a.has_no_terms() {
        return Err(Error::Precondition(format!("need val(a) > 0, got a = {a}")));
    }
    let line = Line::new(vec![HahnSeries::one(a.rank()), r.clone(), a.clone(), a * r])?;
    let Some(image) = scaled_wres(m, &line, lambda, a.rank())? else {
        return Err(Error::Precondition(format!("{lambda}·(1, r, a, ar) is not in R^4")));
    };
    let [s, t, u, v]: [DualNumber; 4] = image.try_into().expect("four coordinates");
    if u.is_zero() {
        return Err(Error::Precondition("the third coordinate u is zero".into()));
    }
    let Some(q) = eps_ratio(&u, &v) else {
        return Err(Error::Precondition(format!("{v} is not a k-multiple of {u}")));
    };
    let val_r_nonnegative = r.has_no_terms() || r.val_sign()? != Ordering::Less;
    let res_r = if val_r_nonnegative { Some(r.res()?) } else { None };
    Ok(DoubleMutation { image: [s, t, u, v], q, val_r_nonnegative, res_r })
}
