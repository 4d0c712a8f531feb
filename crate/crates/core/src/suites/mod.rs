//! Deterministic invariant suites.
//!
//! Each suite draws its cases from a ChaCha8 stream seeded by the caller and
//! checks an identity exactly.  A case either passes, fails with a
//! counterexample, or is skipped because the library declined it with a
//! precision error; skips are counted separately and never as passes.

pub mod gen;

use std::cmp::Ordering;
use std::time::Instant;

use num_traits::Zero;

use serde::Serialize;

use crate::coeffield::{multiplication_matrix, repeated_eigenvalue_check, DualNumber, KElem};
use crate::ctrexgame::{adversary_corpus, GameModel, Refutation};
use crate::dvmodel::{DvModel, RingTag};
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::inflator::{
    check_double_mutation, classify_tame, specialize_line, wres, EpsSubspace, Line, SpecMethod, Window,
};
use crate::newton::{count_roots_in_o, polygon, rolle_check, split_radical, ValuedPoly};
use crate::ordgroup::{GroupElem, Value, ValueGroupDesc};
use crate::rational::Q;
use gen::{Gen, Shape};

/// Registered suites with their case counts.
pub const SUITES: &[(&str, usize)] = &[
    ("field-laws", 1000),
    ("leibniz", 500),
    ("diffs", 200),
    ("newton", 300),
    ("rolle", 100),
    ("specialize", 50),
    ("wres-hom", 300),
    ("vp-laws", 300),
    ("neutralizer", 100),
    ("reduce3", 100),
    ("density", 100),
    ("vtopology", 20),
    ("double-mutation", 20),
    ("game", 200),
    ("split-radical", 100),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub skipped: usize,
    /// The first failing case, verbatim.
    pub first_counterexample: Option<String>,
    pub first_skip: Option<String>,
    pub wall_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.skipped == 0
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let &(_, n) = SUITES
        .iter()
        .find(|(s, _)| *s == name)
        .ok_or_else(|| {
            let known: Vec<&str> = SUITES.iter().map(|(s, _)| *s).collect();
            Error::domain(format!("unknown suite {name:?}; known suites: {}", known.join(", ")))
        })?;
    let start = Instant::now();
    let mut t = Tally::default();
    let mut g = Gen::new(seed);
    match name {
        "field-laws" => field_laws(&mut t, &mut g, n),
        "leibniz" => leibniz(&mut t, &mut g, n),
        "diffs" => diffs(&mut t, &mut g, n),
        "newton" => newton(&mut t, &mut g, n),
        "rolle" => rolle(&mut t, &mut g, n),
        "specialize" => specialize(&mut t, &mut g, n),
        "wres-hom" => wres_hom(&mut t, &mut g, n),
        "vp-laws" => vp_laws(&mut t, &mut g, n),
        "neutralizer" => neutralizer(&mut t, &mut g, n),
        "reduce3" => reduce3(&mut t, &mut g, n),
        "density" => density(&mut t, &mut g, n),
        "vtopology" => vtopology(&mut t, &mut g, n),
        "double-mutation" => double_mutation(&mut t, &mut g, n),
        "game" => game(&mut t, &mut g, n),
        "split-radical" => split_radical_suite(&mut t, &mut g, n),
        _ => unreachable!("registered above"),
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        cases: t.cases,
        failures: t.failures,
        skipped: t.skipped,
        first_counterexample: t.first,
        first_skip: t.first_skip,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Every registered suite, in registration order.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|(name, _)| run_suite(name, seed).expect("registered suite")).collect()
}

/// Rank 2 over ℤ + ℤω with `∂₀`, `d th1 = t^-3`, `d th2 = 0`.
pub fn theta_model_rank2() -> DvModel {
    let mut m = DvModel::partial_zero();
    m.declare_generator(1, HahnSeries::t_pow(GroupElem::from_ints(&[0, -3])), "sampler").expect("fresh index");
    m.declare_generator(2, HahnSeries::zero(2), "sampler").expect("fresh index");
    m
}

/// Rank 1 over ℤ with `d/dt`, `d th1 = t^-2`, `d th2 = th1`.
pub fn theta_model_rank1() -> DvModel {
    let mut m = DvModel::d_dt();
    m.declare_generator(1, HahnSeries::t_pow(GroupElem::from_ints(&[-2])), "sampler").expect("fresh index");
    m.declare_generator(2, HahnSeries::constant(KElem::symbol(1), 1), "sampler").expect("fresh index");
    m
}

enum Fail {
    Violation(String),
    Skip(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientPrecision(m) => Fail::Skip(format!("insufficient precision: {m}")),
            other => Fail::Violation(other.to_string()),
        }
    }
}

type Case = std::result::Result<(), Fail>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(Fail::Violation(format!($($fmt)+)));
        }
    };
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    skipped: usize,
    first: Option<String>,
    first_skip: Option<String>,
}

impl Tally {
    fn run(&mut self, label: impl FnOnce() -> String, case: Case) {
        self.cases += 1;
        match case {
            Ok(()) => {}
            Err(Fail::Violation(m)) => {
                self.failures += 1;
                self.first.get_or_insert_with(|| format!("case {}: {}: {m}", self.cases, label()));
            }
            Err(Fail::Skip(m)) => {
                self.skipped += 1;
                self.first_skip.get_or_insert_with(|| format!("case {}: {}: {m}", self.cases, label()));
            }
        }
    }
}

/// Draws from `shape` until `pred` accepts.
fn sample_where(
    g: &mut Gen,
    shape: &Shape,
    what: &str,
    mut pred: impl FnMut(&HahnSeries) -> Result<bool>,
) -> std::result::Result<HahnSeries, Fail> {
    for _ in 0..2000 {
        let x = g.series(shape);
        if pred(&x)? {
            return Ok(x);
        }
    }
    Err(Fail::Violation(format!("sampler found no {what} in {shape:?}")))
}

fn tag(m: &DvModel, x: &HahnSeries) -> Result<RingTag> {
    if x.is_exact_zero() {
        return Ok(RingTag::InI);
    }
    m.classify_ring(x)
}

fn nonneg(x: &HahnSeries) -> Result<bool> {
    Ok(x.val_sign()? != Ordering::Less)
}

fn positive(x: &HahnSeries) -> Result<bool> {
    Ok(x.val_sign()? == Ordering::Greater)
}

fn field_laws(t: &mut Tally, g: &mut Gen, n: usize) {
    let rank2 = Shape::new(&[-2, -4], &[3, 4]).symbols(&[1, 2]).terms(4);
    let rank1 = Shape::new(&[-4], &[4]).den(3).symbols(&[1]).terms(4);
    for i in 0..n {
        let shape = if i % 2 == 0 { &rank2 } else { &rank1 };
        let (x, y) = (g.series(shape), g.series(shape));
        let y = if g.coin(0.2) { &y + &x.shift(&g.exponent(shape)) } else { y };
        let case = (|| {
            let (vx, vy) = (x.val()?, y.val()?);
            let vxy = (&x * &y).val()?;
            ensure!(vxy == vx.add(&vy), "val(xy) = {vxy}, val x + val y = {}", vx.add(&vy));
            let vs = (&x + &y).val()?;
            let lo = vx.clone().min(vy.clone());
            ensure!(vs >= lo, "val(x+y) = {vs} < min = {lo}");
            if vx != vy {
                ensure!(vs == lo, "val(x+y) = {vs} but vals differ and min = {lo}");
            }
            Ok(())
        })();
        t.run(|| format!("x = {x}, y = {y}"), case);
    }
}

fn leibniz(t: &mut Tally, g: &mut Gen, n: usize) {
    let m1 = theta_model_rank1();
    let m2 = theta_model_rank2();
    let s1 = Shape::new(&[0], &[5]).symbols(&[1, 2]).terms(4);
    let s2 = Shape::new(&[0, -2], &[2, 4]).symbols(&[1, 2]).terms(4);
    for _ in 0..n {
        let case = (|| {
            let x = g.series(&s1);
            let y = sample_where(g, &s1, "y with x + y != 0", |y| Ok(!(&x + y).has_no_terms()))?;
            let lhs = m1.delta(&(&x * &y))?;
            let rhs = &(&x * &m1.delta(&y)?) + &(&y * &m1.delta(&x)?);
            ensure!(lhs.definitely_equal(&rhs), "rank 1: δ(xy) = {lhs}, xδy + yδx = {rhs} for x = {x}, y = {y}");
            let c = m1.deriv().check_log_axiom(&x, &y)?;
            ensure!(c.holds, "log axiom for x = {x}, y = {y}: {} vs {}", c.lhs, c.rhs);
            let x = sample_where(g, &s2, "element of O", nonneg)?;
            let y = sample_where(g, &s2, "element of O", nonneg)?;
            let lhs = m2.delta(&(&x * &y))?;
            let rhs = &(&x * &m2.delta(&y)?) + &(&y * &m2.delta(&x)?);
            ensure!(lhs.definitely_equal(&rhs), "rank 2: δ(xy) = {lhs}, xδy + yδx = {rhs} for x = {x}, y = {y}");
            Ok(())
        })();
        t.run(|| "random pair".into(), case);
    }
}

fn diffs(t: &mut Tally, g: &mut Gen, n: usize) {
    let m = theta_model_rank1();
    let shape = Shape::new(&[-3], &[4]).symbols(&[1, 2]).terms(3);
    for _ in 0..n {
        let mut pair = None;
        for _ in 0..2000 {
            let x = g.series(&shape);
            let y = if g.coin(0.5) { &x + &g.series(&shape) } else { g.series(&shape) };
            let d = &x - &y;
            if d.has_no_terms() || y.has_no_terms() {
                continue;
            }
            let (vx, vy, vd) = (x.val_lower_bound(), y.val_lower_bound(), d.val_lower_bound());
            if vd <= vx.max(vy) {
                pair = Some((x, y));
                break;
            }
        }
        let Some((x, y)) = pair else {
            t.run(|| "sampler".into(), Err(Fail::Violation("no hypothesis-satisfying pair found".into())));
            continue;
        };
        let case = (|| {
            let c = m.deriv().check_diffs_identity(&x, &y)?;
            ensure!(c.holds, "∂log(x−y) = {}, rhs = {}", c.lhs, c.rhs);
            Ok(())
        })();
        t.run(|| format!("x = {x}, y = {y}"), case);
    }
}

fn sorted(mut v: Vec<GroupElem>) -> Vec<GroupElem> {
    v.sort();
    v
}

/// A monomial or binomial root over `ℚ(th1)`.
fn root(g: &mut Gen, lo: i64, hi: i64) -> HahnSeries {
    let shape = Shape::new(&[lo], &[hi]).den(2).symbols(&[1]).terms(2);
    g.series(&shape)
}

fn newton(t: &mut Tally, g: &mut Gen, n: usize) {
    for _ in 0..n {
        let deg = g.range(1, 6) as usize;
        let roots: Vec<HahnSeries> = (0..deg).map(|_| root(g, -3, 3)).collect();
        let case = (|| {
            let expected = roots.iter().filter(|r| r.val_sign().map(|s| s != Ordering::Less).unwrap_or(false)).count();
            let p = ValuedPoly::from_roots(&roots)?;
            let got = count_roots_in_o(&p)?;
            ensure!(got == expected, "count_roots_in_o = {got}, constructed {expected} in O");
            let want = sorted(roots.iter().map(|r| r.val_finite()).collect::<Result<_>>()?);
            let have = sorted(polygon(&p)?.root_valuations());
            ensure!(want == have, "polygon root valuations {have:?} vs roots {want:?}");
            for (i, d) in p.derivative_coeffs().iter().enumerate() {
                let a = &p.coeffs()[i + 1];
                ensure!(d.val()? == a.val()?, "val({}·a_{}) != val(a_{})", i + 1, i + 1, i + 1);
            }
            Ok(())
        })();
        t.run(|| format!("roots {}", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")), case);
    }
}

fn rolle(t: &mut Tally, g: &mut Gen, n: usize) {
    for _ in 0..n {
        let center = root(g, -2, 3);
        let gamma = GroupElem::new(vec![Q::new(g.range(-4, 6).into(), 2.into())]);
        let inside = g.range(2, 4) as usize;
        let outside = g.range(0, 2) as usize;
        let mut roots = Vec::new();
        for k in 0..inside + outside {
            // val(s) ≥ γ inside the ball, val(s) < γ outside it.
            let off = if k < inside { g.range(0, 4) } else { -g.range(1, 4) };
            let v = &gamma + &GroupElem::new(vec![Q::new(off.into(), 2.into())]);
            let mut s = HahnSeries::monomial(g.coeff(&[1]), v.clone());
            if g.coin(0.5) {
                s = &s + &HahnSeries::monomial(g.coeff(&[1]), &v + &GroupElem::from_ints(&[1]));
            }
            roots.push(&center + &s);
        }
        let case = (|| {
            let p = ValuedPoly::from_roots(&roots)?;
            let v = rolle_check(&p, &center, &gamma)?;
            ensure!(v.roots_in_ball == inside, "{} roots counted in the ball, {inside} constructed", v.roots_in_ball);
            ensure!(v.holds(), "no root of P' in the ball");
            Ok(())
        })();
        t.run(|| format!("center {center}, radius {gamma}, {} roots", roots.len()), case);
    }
}

fn specialize(t: &mut Tally, g: &mut Gen, n: usize) {
    let m = theta_model_rank2();
    let w = Window::default_for(2);
    let alpha_shape = Shape::new(&[-1, -3], &[2, 3]).symbols(&[1, 2]).terms(3);
    let scale_shape = Shape::new(&[-1, -2], &[1, 2]).symbols(&[2]).terms(1);
    let mats: Vec<Vec<Vec<Q>>> = (0..20).map(|_| g.unimodular()).collect();
    for _ in 0..n {
        let alpha = if g.coin(0.3) {
            // th1·t^[0;k] is wild for small k; shift it around.
            let k = g.range(0, 4);
            &HahnSeries::monomial(KElem::symbol(1), GroupElem::from_ints(&[0, k])) + &HahnSeries::from_int(g.range(-1, 1), 2)
        } else if g.coin(0.1) {
            HahnSeries::zero(2)
        } else {
            g.series(&alpha_shape)
        };
        let x1 = g.series(&scale_shape);
        let swap = g.coin(0.3);
        let coords = if swap { vec![&x1 * &alpha, x1.clone()] } else { vec![x1.clone(), &x1 * &alpha] };
        let case = (|| {
            let line = Line::new(coords.clone())?;
            let spec = specialize_line(&m, &line, &w)?;
            if spec.space.is_complete() {
                ensure!(spec.space.dim() == 2, "Complete specialization of dimension {}: {}", spec.space.dim(), spec.space);
            }
            let wild = if alpha.is_exact_zero() { false } else { classify_tame(&m, &alpha)?.is_wild() };
            let eps_eps = EpsSubspace::span(
                2,
                &[vec![DualNumber::eps(), DualNumber::zero()], vec![DualNumber::zero(), DualNumber::eps()]],
            )?;
            if wild {
                ensure!(spec.method == SpecMethod::Wild, "wild ratio {alpha} specialized by {:?}", spec.method);
                ensure!(spec.space.same_space(&eps_eps), "wild ratio {alpha} gave {}", spec.space);
            } else {
                ensure!(!spec.space.same_space(&eps_eps), "tame ratio {alpha} gave kε ⊕ kε");
            }
            for mat in &mats {
                let moved = specialize_line(&m, &line.transform(mat)?, &w)?;
                let image = spec.space.map_matrix(mat)?;
                if moved.space.is_complete() && spec.space.is_complete() {
                    ensure!(
                        moved.space.same_space(&image),
                        "g = {mat:?}: specialize(gL) = {}, g·specialize(L) = {image}",
                        moved.space
                    );
                } else {
                    return Err(Fail::Skip(format!("g = {mat:?} gave an incomplete specialization")));
                }
            }
            Ok(())
        })();
        t.run(|| format!("line {}", coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")), case);
    }
}

/// An element of R, optionally with a residue restricted to `ℚ(th2)`.
fn r_element(g: &mut Gen, m: &DvModel, shape: &Shape) -> std::result::Result<HahnSeries, Fail> {
    sample_where(g, shape, "element of R", |x| Ok(tag(m, x)?.in_r()))
}

fn wres_hom(t: &mut Tally, g: &mut Gen, n: usize) {
    let m = theta_model_rank2();
    let shape = Shape::new(&[0, -1], &[2, 4]).symbols(&[1, 2]).terms(4);
    for i in 0..n {
        let case = (|| {
            let x = r_element(g, &m, &shape)?;
            let y = r_element(g, &m, &shape)?;
            let (wx, wy) = (wres(&m, &x)?, wres(&m, &y)?);
            let sum = wres(&m, &(&x + &y))?;
            ensure!(sum == &wx + &wy, "ŵres({x} + {y}) = {sum}, sum of images {}", &wx + &wy);
            let prod = wres(&m, &(&x * &y))?;
            ensure!(prod == &wx * &wy, "ŵres(({x})·({y})) = {prod}, product of images {}", &wx * &wy);
            ensure!(repeated_eigenvalue_check(&multiplication_matrix(&wx)), "multiplication by {wx} fails det-tr");
            if i % 3 == 0 {
                // Surjectivity: s + (a density witness with derivative t) maps to s + tε.
                let s = g.coeff(&[2]);
                let tt = g.coeff(&[1, 2]);
                let mut grown = m.clone();
                let dw = grown.solve_density(&HahnSeries::zero(2), &HahnSeries::constant(tt.clone(), 2), &GroupElem::zero(2))?;
                let pre = &HahnSeries::constant(s.clone(), 2) + &dw.x;
                let image = wres(&grown, &pre)?;
                let target = DualNumber::new(s, tt);
                ensure!(image == target, "preimage {pre} of {target} maps to {image}");
            }
            Ok(())
        })();
        t.run(|| "random pair in R".into(), case);
    }
}

fn vp_laws(t: &mut Tally, g: &mut Gen, n: usize) {
    let m = theta_model_rank2();
    let shape = Shape::new(&[0, -2], &[2, 5]).symbols(&[1, 2]).terms(4);
    for _ in 0..n {
        let case = (|| {
            let a = sample_where(g, &shape, "element of O", nonneg)?;
            let b = sample_where(g, &shape, "element of O", nonneg)?;
            let (pa, pb) = (m.val_partial(&a)?, m.val_partial(&b)?);
            // vp-class
            let in_r = tag(&m, &a)?.in_r();
            ensure!((pa.cmp_zero() != Ordering::Less) == in_r, "val_∂({a}) = {pa} but membership in R is {in_r}");
            // vp-ops
            let low = pa.clone().min(pb.clone());
            let ps = m.val_partial(&(&a + &b))?;
            ensure!(ps >= low, "val_∂(a+b) = {ps} < {low} for a = {a}, b = {b}");
            let ab = &a * &b;
            let pp = m.val_partial(&ab)?;
            ensure!(pp >= low, "val_∂(ab) = {pp} < {low} for a = {a}, b = {b}");
            // vp-mult-better
            let (va, vb) = (a.val()?, b.val()?);
            let better = va.add(&pb).min(pa.add(&vb));
            ensure!(pp >= better, "val_∂(ab) = {pp} < {better} for a = {a}, b = {b}");
            // vp-scalars
            let q = sample_where(g, &shape, "element of Q", |x| Ok(tag(&m, x)?.in_q()))?;
            let vq = q.val()?;
            let expect = match pa.add(&vq) {
                Value::Finite(s) if s.is_positive() => Value::Infinity,
                v => v,
            };
            let got = m.val_partial(&(&a * &q))?;
            ensure!(got == expect, "val_∂(a·q) = {got}, expected {expect} for a = {a}, q = {q}");
            Ok(())
        })();
        t.run(|| "random pair in O".into(), case);
    }
}

fn neutralizer(t: &mut Tally, g: &mut Gen, n: usize) {
    let base = theta_model_rank2();
    let shape = Shape::new(&[0, -2], &[2, 5]).symbols(&[1, 2]).terms(3);
    for _ in 0..n {
        let mut label = String::new();
        let case = (|| {
            let x = sample_where(g, &shape, "element of O \\ Q", |x| {
                let tg = tag(&base, x)?;
                Ok(tg.in_o() && !tg.in_q())
            })?;
            label = x.to_string();
            let mut m = base.clone();
            let nz = m.neutralizer(&x)?;
            let a = &nz.a_dagger;
            ensure!(tag(&m, a)?.in_q(), "a† = {a} is not in Q");
            ensure!(tag(&m, &(&x * a))? == RingTag::InRNotQ, "x·a† = {} is not in R \\ Q", &x * a);
            let vp = m.val_partial(&x)?;
            let va = a.val_finite()?;
            ensure!(vp == Value::Finite(-&va), "−val(a†) = {} but val_∂(x) = {vp}", -&va);
            Ok(())
        })();
        t.run(|| format!("x = {label}"), case);
    }
}

fn reduce3(t: &mut Tally, g: &mut Gen, n: usize) {
    let s1 = Shape::new(&[-3], &[3]).symbols(&[1, 2]).terms(3);
    let s2 = Shape::new(&[-2, -3], &[2, 3]).symbols(&[1, 2]).terms(3).distinct_major();
    for i in 0..n {
        let (mut m, shape) = if i % 2 == 0 { (theta_model_rank1(), &s1) } else { (theta_model_rank2(), &s2) };
        let elems: Vec<HahnSeries> = (0..3).map(|_| g.series(shape)).collect();
        let case = (|| {
            let r = m.reduce_triple([&elems[0], &elems[1], &elems[2]])?;
            let mut idx = [r.target, r.first, r.second];
            idx.sort();
            ensure!(idx == [0, 1, 2], "indices {:?} are not a permutation", (r.target, r.first, r.second));
            let rhs = &(&r.q1 * &elems[r.first]) + &r.rest;
            ensure!(elems[r.target].definitely_equal(&rhs), "{} != ({})·({}) + {}", elems[r.target], r.q1, elems[r.first], r.rest);
            ensure!(tag(&m, &r.q1)?.in_q(), "q1 = {} is not in Q", r.q1);
            if !r.rest.is_exact_zero() {
                let tq = m.classify_quotient(&r.rest, &elems[r.second])?;
                ensure!(tq.in_q(), "rest/c = ({})/({}) classified {tq}", r.rest, elems[r.second]);
            }
            if let Some(q2) = &r.q2 {
                ensure!(tag(&m, q2)?.in_q(), "q2 = {q2} is not in Q");
                ensure!((q2 * &elems[r.second]).definitely_equal(&r.rest), "q2·c != rest");
            }
            Ok(())
        })();
        t.run(|| format!("triple ({}, {}, {})", elems[0], elems[1], elems[2]), case);
    }
}

fn density(t: &mut Tally, g: &mut Gen, n: usize) {
    let mut m = theta_model_rank2();
    let shape = Shape::new(&[-1, -3], &[2, 3]).symbols(&[1, 2]).terms(3);
    let mut done: Vec<(HahnSeries, HahnSeries, GroupElem, HahnSeries)> = Vec::new();
    for i in 0..n {
        let a = if !done.is_empty() && g.coin(0.2) {
            // Build on an earlier witness so that generators nest.
            let k = g.range(0, done.len() as i64 - 1) as usize;
            &done[k].3 + &g.series(&shape)
        } else {
            g.series(&shape)
        };
        let b = if g.coin(0.1) { HahnSeries::zero(2) } else { g.series(&shape) };
        let gamma = if i == 0 {
            GroupElem::from_ints(&[5, 0])
        } else {
            GroupElem::from_ints(&[g.range(-1, 5), g.range(-3, 3)])
        };
        let case = (|| {
            let w = m.solve_density(&a, &b, &gamma)?;
            ensure!((&w.x - &a).val()? > Value::Finite(gamma.clone()), "val(x − a) ≤ γ for x = {}", w.x);
            let dx = m.delta(&w.x)?;
            ensure!(dx.definitely_equal(&b), "δx = {dx}, wanted {b}");
            done.push((a.clone(), b.clone(), gamma.clone(), w.x));
            Ok(())
        })();
        t.run(|| format!("a = {a}, b = {b}, γ = {gamma}"), case);
    }
    // Later generators must not disturb earlier answers.
    let recheck = (|| {
        for (a, b, gamma, x) in &done {
            ensure!((x - a).val()? > Value::Finite(gamma.clone()), "witness {x} drifted from {a}");
            ensure!(m.delta(x)?.definitely_equal(b), "witness {x} no longer has δx = {b}");
        }
        Ok(())
    })();
    if let Err(Fail::Violation(msg)) | Err(Fail::Skip(msg)) = recheck {
        t.failures += 1;
        t.first.get_or_insert(format!("recheck after {n} queries: {msg}"));
    }
}

fn vtopology(t: &mut Tally, g: &mut Gen, n: usize) {
    let base = theta_model_rank2();
    let shape = Shape::new(&[0, -1], &[3, 4]).symbols(&[1, 2]).terms(3);
    for _ in 0..n {
        let mut label = String::new();
        let case = (|| {
            let a = r_element(g, &base, &shape)?;
            label = a.to_string();
            let mut m = base.clone();
            let r = m.refute_vtopology(&a)?;
            ensure!(m.classify_quotient(&(&r.x * &r.y), &a)?.in_r(), "xy/a is not in R");
            ensure!(!tag(&m, &r.x)?.in_r(), "x = {} lies in R", r.x);
            ensure!(tag(&m, &r.y)? == RingTag::NotInO, "y = {} lies in O", r.y);
            Ok(())
        })();
        t.run(|| format!("a = {label}"), case);
    }
}

fn double_mutation(t: &mut Tally, g: &mut Gen, n: usize) {
    let base = theta_model_rank2();
    let i_shape = Shape::new(&[1, 1], &[3, 3]).symbols(&[2]).terms(2);
    let r_shape = Shape::new(&[0, -1], &[2, 4]).symbols(&[1, 2]).terms(3);
    for i in 0..n {
        let mut label = String::new();
        let case = (|| {
            let mut m = base.clone();
            let (a, r, lambda) = if i % 2 == 0 {
                // a ∈ 𝔭 \ I, r ∈ R, λ = 1.
                let ideal = sample_where(g, &i_shape, "element of I", |x| Ok(tag(&m, x)?.in_i()))?;
                let a = &HahnSeries::monomial(g.coeff(&[2]), GroupElem::from_ints(&[1, 0])) + &ideal;
                let p = sample_where(g, &r_shape, "element of 𝔭", |x| Ok(positive(x)? && tag(&m, x)?.in_r()))?;
                let r = &HahnSeries::constant(g.coeff(&[2]), 2) + &p;
                (a, r, HahnSeries::one(2))
            } else {
                // a wild with val(a) > 0, λ a neutralizer of a, r ∈ Q.
                let unit = m.unit();
                let a = m.weird_witness(&unit)?.x;
                let lambda = m.neutralizer(&a)?.a_dagger;
                let r = sample_where(g, &r_shape, "element of Q", |x| Ok(nonneg(x)? && tag(&m, x)?.in_q()))?;
                (a, r, lambda)
            };
            label = format!("a = {a}, r = {r}, λ = {lambda}");
            let dm = check_double_mutation(&m, &a, &r, &lambda)?;
            ensure!(dm.holds(), "q = {}, val(r) ≥ 0: {}, res(r) = {:?}", dm.q, dm.val_r_nonnegative, dm.res_r);
            Ok(())
        })();
        t.run(|| label.clone(), case);
    }
}

fn game(t: &mut Tally, g: &mut Gen, n: usize) {
    let gm = GameModel::default();
    let plays = match adversary_corpus(&gm) {
        Ok(p) => p,
        Err(e) => {
            t.run(|| "corpus".into(), Err(Fail::from(e)));
            return;
        }
    };
    for a_prime in &plays {
        let case = (|| {
            let Refutation::Certificate(tr) = gm.sigma_refute(a_prime)? else {
                return Err(Fail::Violation("corpus play matched u".into()));
            };
            ensure!((&tr.b * &tr.c).definitely_equal(&tr.a), "b·c != a");
            let replies = gm.adversary_replies(&tr, 12)?;
            ensure!(replies.len() >= 10, "only {} replies", replies.len());
            for (b, c) in &replies {
                let v = gm.sigma_check_triple(&tr, b, c)?;
                ensure!((1..=3).contains(&v.index), "bad index {}", v.index);
            }
            Ok(())
        })();
        t.run(|| format!("a' = {a_prime}"), case);
    }
    let shape = Shape::new(&[-2, -4], &[3, 4]).terms(4);
    let major = |x: &GroupElem| x.coords()[0].clone();
    for _ in 0..n {
        let x = g.series(&shape);
        let case = (|| {
            let flat = x.filter_terms(|e| major(e).is_zero());
            ensure!(gm.delta0(&flat)?.is_exact_zero(), "∂₀ of the major-0 part {flat} is nonzero");
            for (e, c) in x.terms() {
                if !major(e).is_zero() {
                    let one = HahnSeries::monomial(c.clone(), e.clone());
                    ensure!(!gm.delta0(&one)?.is_exact_zero(), "∂₀ kills {one}");
                }
            }
            let integral = x.filter_terms(|e| major(e) >= Q::from_integer(0.into()));
            if !integral.has_no_terms() {
                let v = gm.coarse_val(&gm.delta0(&integral)?)?;
                ensure!(v.cmp_zero() != Ordering::Less, "val'(∂₀({integral})) = {v}");
                let (head, tail) = gm.slice(&integral)?;
                ensure!((&head + &tail).definitely_equal(&integral), "head + tail != x");
                ensure!(
                    head.terms().iter().all(|(e, _)| major(e).is_zero() && !e.is_positive()),
                    "head {head} is not in Q[1/t]"
                );
                ensure!(tail.has_no_terms() || positive(&tail)?, "tail {tail} not in 𝔪");
            }
            Ok(())
        })();
        t.run(|| format!("x = {x}"), case);
    }
}

fn split_radical_suite(t: &mut Tally, g: &mut Gen, n: usize) {
    let group = ValueGroupDesc::rationals();
    let shape = Shape::new(&[0], &[4]).den(3).symbols(&[1]).terms(3);
    for _ in 0..n {
        let k = g.range(2, 4) as u32;
        let mut label = String::new();
        let case = (|| {
            let a = sample_where(g, &shape, "a with val(a) > 0", positive)?;
            label = format!("a = {a}, n = {k}");
            let s = split_radical(&group, &a, k)?;
            ensure!((&s.b * &s.c.pow(k)).definitely_equal(&a), "b·c^n = {} != a", &s.b * &s.c.pow(k));
            ensure!((&s.b * &s.c.pow(k - 1)).definitely_equal(&s.e), "b·c^(n-1) != e = {}", s.e);
            ensure!(positive(&s.b)? && positive(&s.c)?, "val(b) or val(c) not positive: b = {}, c = {}", s.b, s.c);
            Ok(())
        })();
        t.run(|| label.clone(), case);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", 1), Err(Error::Domain(_))));
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("field-laws", 3).unwrap();
        let b = run_suite("field-laws", 3).unwrap();
        assert_eq!((a.cases, a.failures, a.first_counterexample), (b.cases, b.failures, b.first_counterexample));
    }
}
