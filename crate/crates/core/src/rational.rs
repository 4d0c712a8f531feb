//! Exact rationals shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `p` or `p/q`, always in lowest terms with a positive denominator.
pub fn fmt_rational(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn factorial_reciprocal(n: u32) -> Q {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= i;
    }
    Q::new(BigInt::one(), f)
}

pub(crate) fn floor_to_i64(r: &Q) -> Option<i64> {
    let fl = r.floor().to_integer();
    i64::try_from(fl).ok()
}

pub(crate) fn is_negative(r: &Q) -> bool {
    r.is_negative()
}
