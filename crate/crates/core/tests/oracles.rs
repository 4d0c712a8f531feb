//! Hand-computed values.

use dvfield::ctrexgame::{GameModel, Refutation};
use dvfield::dvmodel::DvModel;
use dvfield::inflator::{wres, TameClass, classify_tame};
use dvfield::newton::{count_roots_in_o, polygon, split_radical, ValuedPoly};
use dvfield::parse::{parse_group_elem, parse_series};
use dvfield::{DualNumber, GroupElem, HahnSeries, KElem, Value, ValueGroupDesc};

fn s2(x: &str) -> HahnSeries {
    parse_series(x, 2).unwrap()
}

fn s1(x: &str) -> HahnSeries {
    parse_series(x, 1).unwrap()
}

#[test]
fn lexicographic_valuation() {
    assert_eq!(s2("t^[1;0] + t^[0;3]").val().unwrap(), Value::Finite(GroupElem::from_ints(&[0, 3])));
    assert_eq!(s2("t^[1;-50] + t^[2;0]").val().unwrap(), Value::Finite(GroupElem::from_ints(&[1, -50])));
    assert!(s2("O(t^[0;2])").val().is_err());
}

#[test]
fn partial_zero_derivative() {
    let m = DvModel::partial_zero();
    // δ t^[a;b] = a·t^[a-1;b]
    assert_eq!(m.delta(&s2("t^[2;1]")).unwrap(), s2("2*t^[1;1]"));
    assert!(m.delta(&s2("t^[0;7]")).unwrap().is_exact_zero());
}

#[test]
fn generalized_residue() {
    let m = DvModel::partial_zero();
    let eps = DualNumber::eps();
    assert_eq!(wres(&m, &s2("t^[1;0]")).unwrap(), eps);
    assert_eq!(wres(&m, &s2("2 + t^[1;0]")).unwrap(), &DualNumber::real(KElem::from_int(2)) + &eps);
    // 1/t^[1;0] is not in 𝒪 but becomes tame through the inversion probe.
    assert!(matches!(classify_tame(&m, &s2("t^[-1;0]")).unwrap(), TameClass::TameViaProbe { .. }));
}

#[test]
fn newton_square_root_of_t() {
    let p = ValuedPoly::new(vec![s1("-t"), s1("0"), s1("1")]).unwrap();
    let np = polygon(&p).unwrap();
    assert_eq!(np.segments.len(), 1);
    assert_eq!(np.segments[0].root_valuation(), parse_group_elem("1/2", 1).unwrap());
    assert_eq!(count_roots_in_o(&p).unwrap(), 2);
}

#[test]
fn split_radical_exact() {
    let a = s1("t^5 + 2*t^6");
    let s = split_radical(&ValueGroupDesc::rationals(), &a, 3).unwrap();
    assert!((&s.b * &s.c.pow(3)).definitely_equal(&a));
    assert!((&s.b * &s.c.pow(2)).definitely_equal(&s.e));
    assert!(s.b.val_finite().unwrap().is_positive() && s.c.val_finite().unwrap().is_positive());
    // ℤ has nothing strictly between 1/2 and 1.
    assert!(split_radical(&ValueGroupDesc::integers(), &s1("t"), 2).is_err());
}

#[test]
fn game_against_constant_reply() {
    let g = GameModel::default();
    let Refutation::Certificate(tr) = g.sigma_refute(&s2("1")).unwrap() else {
        panic!("a′ = 1 does not match u = 1 + t");
    };
    assert_eq!(tr.n, 2);
    assert_eq!((tr.b.to_string(), tr.c.to_string()), ("t^[0;2]".into(), "t^[1;-2]".into()));
    assert!(matches!(g.sigma_refute(&s2("1 + t")).unwrap(), Refutation::MatchedU));
}
