use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element of ℚ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueQZ(BigRational);

impl ResidueQZ {
    pub fn new(q: BigRational) -> Self {
        let r = &q - q.floor();
        Self(r)
    }

    pub fn from_fraction(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Additive order in ℚ/ℤ, which is the reduced denominator.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn has_odd_denominator(&self) -> bool {
        self.0.denom().is_odd()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(&self.0 * BigRational::from_integer(k.clone()))
    }
}

impl Add for &ResidueQZ {
    type Output = ResidueQZ;

    fn add(self, rhs: &ResidueQZ) -> ResidueQZ {
        ResidueQZ::new(&self.0 + &rhs.0)
    }
}

impl Add for ResidueQZ {
    type Output = ResidueQZ;

    fn add(self, rhs: ResidueQZ) -> ResidueQZ {
        &self + &rhs
    }
}

impl Mul<&BigInt> for &ResidueQZ {
    type Output = ResidueQZ;

    fn mul(self, rhs: &BigInt) -> ResidueQZ {
        self.scale(rhs)
    }
}

impl Neg for &ResidueQZ {
    type Output = ResidueQZ;

    fn neg(self) -> ResidueQZ {
        ResidueQZ::new(-&self.0)
    }
}

impl std::iter::Sum for ResidueQZ {
    fn sum<I: Iterator<Item = ResidueQZ>>(iter: I) -> Self {
        iter.fold(ResidueQZ::zero(), |a, b| a + b)
    }
}

impl fmt::Display for ResidueQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ResidueQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueQZ({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(ResidueQZ::from_fraction(-2, 3), ResidueQZ::from_fraction(1, 3));
        assert_eq!(ResidueQZ::from_fraction(18, 9), ResidueQZ::zero());
        assert_eq!(ResidueQZ::from_fraction(7, 5).to_string(), "2/5");
        assert_eq!(ResidueQZ::from_fraction(-6, 9).to_string(), "1/3");
    }

    #[test]
    fn arithmetic() {
        let a = ResidueQZ::from_fraction(2, 3);
        let b = ResidueQZ::from_fraction(1, 3);
        assert!((&a + &b).is_zero());
        assert_eq!(a.scale(&BigInt::from(2)), b);
        assert_eq!(-&a, b);
        assert_eq!(ResidueQZ::from_fraction(3, 15).order(), BigInt::from(5));
    }
}
