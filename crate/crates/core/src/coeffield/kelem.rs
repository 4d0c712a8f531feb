use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::rational::Q;

/// Element of the residue field k = ℚ(th1, …, thM).
///
/// Stored as `num/den` with a denominator whose lex-leading coefficient is 1.
/// Common factors are cancelled when cheap (monomial content, exact division,
/// single-symbol gcd); equality never depends on that and is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct KElem {
    num: Poly,
    den: Poly,
}

impl KElem {
    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_rational(c: Q) -> Self {
        Self { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Q::from_integer(n.into()))
    }

    /// The transcendental th`index` (1-based).
    pub fn symbol(index: usize) -> Self {
        Self { num: Poly::symbol(index), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// Builds `num/den`; the denominator must be nonzero.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("division by zero in k"));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (num, den);
        // Cancel the common monomial factor.
        let gn = num.mono_gcd();
        let gd = den.mono_gcd();
        let common: Vec<u32> = gn.iter().zip(gd.iter()).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|e| *e > 0) {
            num = num.div_mono(&common);
            den = den.div_mono(&common);
        }
        if den.as_constant().is_none() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Poly::one();
            } else if let Some(g) = num.univariate_gcd(&den) {
                if g.as_constant().is_none() {
                    num = num.div_exact(&g).expect("gcd divides numerator");
                    den = den.div_exact(&g).expect("gcd divides denominator");
                }
            }
        }
        let lead = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The value as a rational number, if it involves no symbols.
    pub fn as_rational(&self) -> Option<Q> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn symbols(&self) -> BTreeSet<usize> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn inv(&self) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::domain("inverse of zero in k"));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &KElem) -> Result<KElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<KElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = KElem::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> KElem {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// ∂/∂th`index` by the quotient rule.
    pub fn partial(&self, index: usize) -> KElem {
        let dn = self.num.partial(index);
        let dd = self.den.partial(index);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    /// True when the element is a single rational multiple of a monomial
    /// (including plain rationals), so it prints without parentheses.
    fn is_atomic(&self) -> bool {
        self.den.is_one()
            && self.num.num_terms() <= 1
            && self.num.leading().is_none_or(|(_, c)| !c.is_negative())
    }

    /// Text form that can be spliced into a product, parenthesised if needed.
    pub fn to_factor_string(&self) -> String {
        if self.is_atomic() {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

impl PartialEq for KElem {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for KElem {}

impl Default for KElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Q> for KElem {
    fn from(c: Q) -> Self {
        KElem::from_rational(c)
    }
}

impl From<i64> for KElem {
    fn from(n: i64) -> Self {
        KElem::from_int(n)
    }
}

impl Add for &KElem {
    type Output = KElem;
    fn add(self, rhs: &KElem) -> KElem {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return KElem::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        if let Some(f) = self.den.div_exact(&rhs.den) {
            return KElem::normalized(self.num.add(&rhs.num.mul(&f)), self.den.clone());
        }
        if let Some(f) = rhs.den.div_exact(&self.den) {
            return KElem::normalized(self.num.mul(&f).add(&rhs.num), rhs.den.clone());
        }
        KElem::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Sub for &KElem {
    type Output = KElem;
    fn sub(self, rhs: &KElem) -> KElem {
        self + &(-rhs)
    }
}

impl Mul for &KElem {
    type Output = KElem;
    fn mul(self, rhs: &KElem) -> KElem {
        if self.is_zero() || rhs.is_zero() {
            return KElem::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return KElem { num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        KElem::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &KElem {
    type Output = KElem;
    /// Panics on division by zero; use [`KElem::checked_div`] otherwise.
    fn div(self, rhs: &KElem) -> KElem {
        self.checked_div(rhs).expect("division by zero in k")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for KElem {
            type Output = KElem;
            fn $m(self, rhs: KElem) -> KElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        -&self
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt(f);
        }
        let num = if self.num.num_terms() == 1 && !self.num.leading().is_some_and(|(_, c)| c.is_negative()) {
            self.num.to_string()
        } else {
            format!("({})", self.num)
        };
        write!(f, "{num}/({})", self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn fraction_arithmetic_is_exact() {
        let t1 = KElem::symbol(1);
        let a = &KElem::one() / &t1;
        let b = &(&t1 - &KElem::one()) / &t1;
        assert_eq!(&a + &b, KElem::one());
        assert!((&(&a + &b) - &KElem::one()).is_zero());
    }

    #[test]
    fn cancellation_leaves_polynomial() {
        let t1 = KElem::symbol(1);
        let sq = &t1 * &t1;
        let r = &sq / &t1;
        assert_eq!(r.denom(), &Poly::one());
        assert_eq!(r, t1);
    }

    #[test]
    fn partial_quotient_rule() {
        // d/dth1 (1/th1) = -1/th1^2
        let t1 = KElem::symbol(1);
        let inv = t1.inv().unwrap();
        let d = inv.partial(1);
        assert_eq!(d, -(&inv * &inv));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(KElem::zero().inv().is_err());
        assert_eq!(KElem::from_rational(q(2, 3)).inv().unwrap(), KElem::from_rational(q(3, 2)));
    }
}
