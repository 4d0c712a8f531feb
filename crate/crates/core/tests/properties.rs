use proptest::prelude::*;

use dvfield::dvmodel::DvModel;
use dvfield::newton::{count_roots_in_o, ValuedPoly};
use dvfield::parse::parse_series;
use dvfield::{GroupElem, HahnSeries, KElem, Q, Value};

fn q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn exponent(rank: usize) -> impl Strategy<Value = GroupElem> {
    prop::collection::vec(-4i64..=4, rank).prop_map(|c| GroupElem::from_ints(&c))
}

/// Exact series with rational coefficients; may be zero.
fn series(rank: usize) -> impl Strategy<Value = HahnSeries> {
    prop::collection::vec((exponent(rank), q()), 0..5).prop_map(move |terms| {
        HahnSeries::from_terms(rank, terms.into_iter().map(|(g, c)| (g, KElem::from_rational(c))), None).unwrap()
    })
}

fn nonzero(rank: usize) -> impl Strategy<Value = HahnSeries> {
    series(rank).prop_filter("nonzero", |x| !x.is_exact_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(x in series(2), y in series(2), z in series(2)) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_exact_zero());
    }

    #[test]
    fn valuation_is_multiplicative(x in nonzero(2), y in nonzero(2)) {
        let (vx, vy) = (x.val_finite().unwrap(), y.val_finite().unwrap());
        prop_assert_eq!((&x * &y).val().unwrap(), Value::Finite(&vx + &vy));
    }

    #[test]
    fn ultrametric(x in nonzero(2), y in nonzero(2)) {
        let (vx, vy) = (x.val().unwrap(), y.val().unwrap());
        let vs = (&x + &y).val().unwrap();
        prop_assert!(vs >= vx.clone().min(vy.clone()));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn print_parse_round_trip(x in series(2), y in series(1), z in series(3)) {
        for (s, rank) in [(&x, 2), (&y, 1), (&z, 3)] {
            let back = parse_series(&s.to_string(), rank).unwrap();
            prop_assert_eq!(&back, s);
        }
    }

    #[test]
    fn truncation_keeps_lower_terms(x in series(2), p in exponent(2)) {
        let tx = x.truncate(&p);
        prop_assert!(tx.agrees_with(&x));
        prop_assert!(tx.terms().iter().all(|(g, _)| g < &p));
    }

    #[test]
    fn leibniz_rank2(x in series(2), y in series(2)) {
        let m = DvModel::partial_zero();
        let lhs = m.delta(&(&x * &y)).unwrap();
        let rhs = &(&x * &m.delta(&y).unwrap()) + &(&y * &m.delta(&x).unwrap());
        prop_assert!(lhs.definitely_equal(&rhs));
    }

    #[test]
    fn leibniz_rank1(x in series(1), y in series(1)) {
        let m = DvModel::d_dt();
        let lhs = m.delta(&(&x * &y)).unwrap();
        let rhs = &(&x * &m.delta(&y).unwrap()) + &(&y * &m.delta(&x).unwrap());
        prop_assert!(lhs.definitely_equal(&rhs));
    }

    #[test]
    fn derivation_kills_rationals(c in q()) {
        let m = DvModel::partial_zero();
        let x = HahnSeries::constant(KElem::from_rational(c), 2);
        prop_assert!(m.delta(&x).unwrap().is_exact_zero());
    }

    #[test]
    fn newton_counts_integral_roots(vals in prop::collection::vec(-3i64..=3, 1..6), cs in prop::collection::vec(1i64..=5, 6)) {
        let roots: Vec<HahnSeries> = vals
            .iter()
            .zip(&cs)
            .map(|(v, c)| HahnSeries::monomial(KElem::from_int(*c), GroupElem::from_ints(&[*v])))
            .collect();
        let p = ValuedPoly::from_roots(&roots).unwrap();
        let want = vals.iter().filter(|v| **v >= 0).count();
        prop_assert_eq!(count_roots_in_o(&p).unwrap(), want);
    }

    #[test]
    fn coefficient_field_division(a in q(), b in q().prop_filter("nonzero", |b| *b != Q::from_integer(0.into()))) {
        let th = KElem::symbol(1);
        let x = &KElem::from_rational(a) + &th;
        let y = &KElem::from_rational(b) * &th;
        let back = &x.checked_div(&y).unwrap() * &y;
        prop_assert_eq!(back, x);
    }
}
