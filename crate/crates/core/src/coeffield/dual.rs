use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::KElem;
use crate::error::{Error, Result};

/// `a + b·ε` in k[ε] = k[ε]/(ε²).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DualNumber {
    pub a: KElem,
    pub b: KElem,
}

impl DualNumber {
    pub fn new(a: KElem, b: KElem) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(KElem::one(), KElem::zero())
    }

    pub fn eps() -> Self {
        Self::new(KElem::zero(), KElem::one())
    }

    pub fn real(a: KElem) -> Self {
        Self::new(a, KElem::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.a.is_zero()
    }

    /// `(a + bε)⁻¹ = a⁻¹ − a⁻²bε`; elements of the ideal (ε) are not units.
    pub fn invert(&self) -> Result<DualNumber> {
        if self.a.is_zero() {
            return Err(Error::NonUnit(format!("{self} lies in the ideal (eps)")));
        }
        let ai = self.a.inv()?;
        let b = -(&(&ai * &ai) * &self.b);
        Ok(DualNumber::new(ai, b))
    }

    pub fn scale(&self, c: &KElem) -> DualNumber {
        DualNumber::new(&self.a * c, &self.b * c)
    }
}

impl Add for &DualNumber {
    type Output = DualNumber;
    fn add(self, rhs: &DualNumber) -> DualNumber {
        DualNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &DualNumber {
    type Output = DualNumber;
    fn sub(self, rhs: &DualNumber) -> DualNumber {
        DualNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &DualNumber {
    type Output = DualNumber;
    fn neg(self) -> DualNumber {
        DualNumber::new(-&self.a, -&self.b)
    }
}

impl Mul for &DualNumber {
    type Output = DualNumber;
    fn mul(self, rhs: &DualNumber) -> DualNumber {
        DualNumber::new(&self.a * &rhs.a, &(&self.a * &rhs.b) + &(&self.b * &rhs.a))
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*eps", self.a.to_factor_string(), self.b.to_factor_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn invert_examples() {
        let two = DualNumber::real(KElem::from_int(2));
        assert_eq!(two.invert().unwrap(), DualNumber::real(KElem::from_rational(q(1, 2))));
        let x = DualNumber::new(KElem::one(), KElem::from_int(3));
        assert_eq!(x.invert().unwrap(), DualNumber::new(KElem::one(), KElem::from_int(-3)));
    }

    #[test]
    fn eps_is_not_a_unit() {
        assert!(matches!(DualNumber::eps().invert(), Err(Error::NonUnit(_))));
        assert!((&DualNumber::eps() * &DualNumber::eps()).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(DualNumber::eps().to_string(), "0 + 1*eps");
        let x = DualNumber::new(KElem::one(), KElem::from_int(-3));
        assert_eq!(x.to_string(), "1 + (-3)*eps");
    }
}
