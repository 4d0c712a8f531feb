//! A derivation into `K/𝔪` that lifts to no derivation into `K`.
//!
//! On the Hahn field over `ℤ + ℤω` take `∂₀(t^{i+jω}) = j·t^{i+(j−1)ω}` and
//! `∂₁ = u·∂₀` for a unit `u`.  We open with `a = t^ω`, so `∂₁a = u`.  Against
//! any reply `a′ ≢ u (mod 𝔭)` there is `n ∈ ℤ` with `val(a′ − u) < n`; we
//! answer `b = tⁿ`, `c = t^{ω−n}`, and no `(b′, c′)` can satisfy
//!
//! 1. `b′ ≡ ∂b (mod 𝔪)`,
//! 2. `c′ ≡ ∂c (mod 𝔪)`,
//! 3. `a′ = bc′ + cb′`,
//!
//! since together they force `val(u − a′) > n`.
//!
//! A `u` that is incongruent mod `𝔭` to every element of a countable field
//! cannot be written down; here `u` is a parameter (default `1 + t`) and a
//! reply `a′ ≡ u (mod 𝔭)` is reported as [`Refutation::MatchedU`].

use std::cmp::Ordering;

use crate::coeffield::KElem;
use crate::dvmodel::DvModel;
use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, ResidueClass};
use crate::ordgroup::{ConvexSubgroup, GroupElem, Value};
use crate::parse::parse_series;
use crate::rational::floor_to_i64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameModel {
    model: DvModel,
}

impl Default for GameModel {
    fn default() -> Self {
        Self::new(parse_series("1 + t", 2).expect("literal")).expect("1 + t is a unit")
    }
}

impl GameModel {
    /// `∂₁ = u·∂₀` on `ℤ + ℤω`; `u` must have valuation exactly 0.
    pub fn new(u: HahnSeries) -> Result<Self> {
        let mut model = DvModel::partial_zero();
        model.set_multiplier(u)?;
        Ok(Self { model })
    }

    pub fn u(&self) -> &HahnSeries {
        self.model.deriv().multiplier()
    }

    pub fn model(&self) -> &DvModel {
        &self.model
    }

    /// `∂₁x`.
    pub fn delta(&self, x: &HahnSeries) -> Result<HahnSeries> {
        self.model.delta(x)
    }

    /// `∂₀x`.
    pub fn delta0(&self, x: &HahnSeries) -> Result<HahnSeries> {
        self.model.deriv().apply_raw(x)
    }

    /// `val′`: the major coordinate of `val`.
    pub fn coarse_val(&self, x: &HahnSeries) -> Result<Value> {
        x.coarse_val(ConvexSubgroup::drop_minor(2))
    }

    /// `x ∈ 𝔭 ⟺ val(x) > ℤ`.
    pub fn in_p(&self, x: &HahnSeries) -> Result<bool> {
        self.model.check_series(x)?;
        Ok(self.coarse_val(x)?.cmp_zero() == Ordering::Greater)
    }

    /// Splits `x` with `val′(x) ≥ 0` as `head + tail`, `head ∈ ℚ[t⁻¹]`, `val(tail) > 0`.
    pub fn slice(&self, x: &HahnSeries) -> Result<(HahnSeries, HahnSeries)> {
        self.model.check_series(x)?;
        if self.coarse_val(x)?.cmp_zero() == Ordering::Less {
            return Err(Error::domain(format!("slice needs val'(x) >= 0, but val({x}) is below Z")));
        }
        if let Some(p) = x.precision() {
            if !p.is_positive() {
                return Err(Error::precision(format!("O(t^{p}) hides part of the head")));
            }
        }
        let head = x.filter_terms(|g| !g.is_positive()).to_exact();
        let tail = x - &head;
        Ok((head, tail))
    }

    /// Our reply to `a′`.
    pub fn sigma_refute(&self, a_prime: &HahnSeries) -> Result<Refutation> {
        self.model.check_series(a_prime)?;
        let diff = a_prime - self.u();
        if self.in_p(&diff)? {
            return Ok(Refutation::MatchedU);
        }
        let v = diff.val_finite()?;
        let minor = floor_to_i64(&v.coords()[1]).ok_or_else(|| Error::domain("exponent out of range"))?;
        let n = (minor + 1).max(1);
        let b = HahnSeries::t_pow(GroupElem::from_ints(&[0, n]));
        let c = HahnSeries::t_pow(GroupElem::from_ints(&[1, -n]));
        let a = HahnSeries::t_pow(GroupElem::from_ints(&[1, 0]));
        debug_assert_eq!(&b * &c, a);
        Ok(Refutation::Certificate(Transcript { a, a_prime: a_prime.clone(), val_diff: v, n, b, c }))
    }

    /// `∂b` and `∂c` as classes in `K/𝔪`.
    pub fn partials(&self, t: &Transcript) -> Result<(ResidueClass, ResidueClass)> {
        Ok((self.delta(&t.b)?.dclass()?, self.delta(&t.c)?.dclass()?))
    }

    /// Index of an identity that `(b′, c′)` violates.
    pub fn sigma_check_triple(&self, t: &Transcript, b_prime: &HahnSeries, c_prime: &HahnSeries) -> Result<Violation> {
        self.model.check_series(b_prime)?;
        self.model.check_series(c_prime)?;
        let (db, dc) = self.partials(t)?;
        if b_prime.dclass()? != db {
            return Ok(Violation { index: 1, residual_val: None });
        }
        if c_prime.dclass()? != dc {
            return Ok(Violation { index: 2, residual_val: None });
        }
        let residual = &t.a_prime - &(&(&t.b * c_prime) + &(&t.c * b_prime));
        match residual.val()? {
            Value::Infinity => Err(Error::SoundnessAlarm(format!(
                "a' = {} satisfies all three identities with b' = {b_prime}, c' = {c_prime}",
                t.a_prime
            ))),
            v => Ok(Violation { index: 3, residual_val: Some(v) }),
        }
    }

    /// Deterministic replies `(b′, c′)`: the honest lifts of `∂b, ∂c`, their
    /// perturbations by `𝔪`, and small combinations of `1, t, t^ω, t⁻¹, t⁻ⁿ`.
    pub fn adversary_replies(&self, t: &Transcript, count: usize) -> Result<Vec<(HahnSeries, HahnSeries)>> {
        let (db, dc) = self.partials(t)?;
        let (lb, lc) = (db.rep().clone(), dc.rep().clone());
        let mono = |j: i64, i: i64| HahnSeries::t_pow(GroupElem::from_ints(&[j, i]));
        let pool = [
            HahnSeries::zero(2),
            HahnSeries::one(2),
            mono(0, 1),
            mono(1, 0),
            mono(0, -1),
            mono(0, -t.n),
            &mono(0, -1) + &mono(0, 1).scale(&KElem::from_int(2)),
        ];
        let small = [mono(0, 1), mono(1, 0), mono(0, t.n + 1), mono(1, -3)];
        let mut out = vec![(lb.clone(), lc.clone())];
        for s in &small {
            out.push((&lb + s, lc.clone()));
            out.push((lb.clone(), &lc + s));
        }
        'outer: for x in &pool {
            for y in &pool {
                if out.len() >= count {
                    break 'outer;
                }
                out.push((x.clone(), y.clone()));
                out.push((lb.clone(), &lc + &(&(x - y) * &mono(0, 1))));
            }
        }
        out.truncate(count.max(1));
        Ok(out)
    }
}

/// The game after our second move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub a: HahnSeries,
    pub a_prime: HahnSeries,
    /// `val(a′ − u)`, which lies below `tⁿ`.
    pub val_diff: GroupElem,
    pub n: i64,
    pub b: HahnSeries,
    pub c: HahnSeries,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Certificate(Transcript),
    /// `a′ ≡ u (mod 𝔭)`: outside what a computable `u` can refute.
    MatchedU,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: u8,
    /// `val(a′ − (bc′ + cb′))` when identity 3 is the one that fails.
    pub residual_val: Option<Value>,
}

/// The published adversary corpus: rational combinations of `t`, `t^ω`,
/// `t⁻¹` of total degree ≤ 3, minus those congruent to `u` mod `𝔭`.
pub fn adversary_corpus(game: &GameModel) -> Result<Vec<HahnSeries>> {
    const ATOMS: [&str; 9] = ["1", "t", "t^-1", "t^[1;0]", "t^2", "t^-2", "t^[1;1]", "t^[1;-1]", "t^3"];
    const COEFFS: [&str; 4] = ["1", "2", "-1", "1/2"];
    let mut out = Vec::new();
    for (i, a) in ATOMS.iter().enumerate() {
        for (j, b) in ATOMS.iter().enumerate().skip(i) {
            let c = COEFFS[(i + j) % COEFFS.len()];
            let text = if i == j { format!("{c}*{a}") } else { format!("{c}*{a} + {b}") };
            let x = parse_series(&text, 2)?;
            if !game.in_p(&(&x - game.u()))? {
                out.push(x);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> HahnSeries {
        parse_series(x, 2).unwrap()
    }

    #[test]
    fn in_p_examples() {
        let g = GameModel::default();
        assert!(g.in_p(&s("t^[1;0]")).unwrap());
        assert!(!g.in_p(&s("t^100")).unwrap());
        assert!(g.in_p(&s("t^[1;-50]")).unwrap());
    }

    #[test]
    fn slice_examples() {
        let g = GameModel::default();
        let (h, t) = g.slice(&s("t^-2 + t^[1;0]")).unwrap();
        assert_eq!((h, t), (s("t^-2"), s("t^[1;0]")));
        let (h, t) = g.slice(&s("3")).unwrap();
        assert_eq!((h, t.is_exact_zero()), (s("3"), true));
        assert!(matches!(g.slice(&s("t^[-1;0]")), Err(Error::Domain(_))));
    }

    #[test]
    fn refute_examples() {
        let g = GameModel::default();
        let Refutation::Certificate(tr) = g.sigma_refute(&s("1")).unwrap() else { panic!() };
        assert_eq!(tr.n, 2);
        assert_eq!((tr.b.clone(), tr.c.clone()), (s("t^2"), s("t^[1;-2]")));
        assert_eq!(g.sigma_refute(&s("1 + t")).unwrap(), Refutation::MatchedU);
        let Refutation::Certificate(tr2) = g.sigma_refute(&s("t^-1")).unwrap() else { panic!() };
        assert_eq!(tr2.n, 1);

        let (db, dc) = g.partials(&tr).unwrap();
        assert!(db.is_zero());
        let v = g.sigma_check_triple(&tr, &s("0"), dc.rep()).unwrap();
        assert_eq!(v.index, 3);
        assert_eq!(g.sigma_check_triple(&tr, &s("1"), dc.rep()).unwrap().index, 1);
        assert_eq!(g.sigma_check_triple(&tr, &s("0"), &s("0")).unwrap().index, 2);
    }

    #[test]
    fn corpus_never_alarms() {
        let g = GameModel::default();
        let corpus = adversary_corpus(&g).unwrap();
        assert!(corpus.len() >= 30);
        for a in &corpus {
            let Refutation::Certificate(tr) = g.sigma_refute(a).unwrap() else { panic!("{a}") };
            assert_eq!(&tr.b * &tr.c, tr.a);
            for (b, c) in g.adversary_replies(&tr, 12).unwrap() {
                g.sigma_check_triple(&tr, &b, &c).unwrap();
            }
        }
    }
}
