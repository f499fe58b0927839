//! The exact fields the linear algebra runs over.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact field. Equality must be mathematical equality.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: BigRational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `self / other`; panics on division by zero.
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero"))
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    /// Cost used to prefer simple pivots during elimination.
    fn complexity(&self) -> usize {
        0
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn complexity(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}
