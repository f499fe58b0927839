//! Rational functions `p/q` with `p, q` in `Q[x1..xn]`.
//!
//! Every value is kept reduced with a monic denominator (grlex leading
//! coefficient one), so structural equality is mathematical equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Poly::from_int(c))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(BigRational::new(n.into(), d.into()))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    /// Build `num/den`, reducing to canonical form. Returns `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return Scalar { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading_coefficient().expect("nonzero").clone();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let s = lc.recip();
            Scalar { num: num.scale(&s), den: den.scale(&s) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Largest total degree of numerator and denominator.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    pub fn scale(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar { num: self.num.add(&other.num), den: Poly::one() };
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduce(num, self.den.mul(&other.den))
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar { num: self.num.mul(&other.num), den: Poly::one() };
        }
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv_ref(&self) -> Option<Scalar> {
        if self.is_zero() {
            None
        } else {
            Some(Self::reduce(self.den.clone(), self.num.clone()))
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, var: usize) -> Scalar {
        if self.den.is_one() {
            return Scalar::from_poly(self.num.derivative(var));
        }
        let num = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        Self::reduce(num, self.den.mul(&self.den))
    }

    /// Value at a rational point, or `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.to_f64(point) / self.den.to_f64(point)
    }

    /// Substitute polynomials for the coordinates.
    pub fn compose(&self, images: &[Poly]) -> Option<Scalar> {
        Scalar::new(self.num.compose(images), self.den.compose(images))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl crate::field::Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Option<Self> {
        self.inv_ref()
    }
    fn from_rational(q: BigRational) -> Self {
        Scalar::constant(q)
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn complexity(&self) -> usize {
        if let Some(c) = self.constant_value() {
            return c.complexity();
        }
        1000 * (self.degree() as usize + 1) + self.num.num_terms() + self.den.num_terms()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$f(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(&rhs.inv_ref().expect("division by zero"))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl From<Poly> for Scalar {
    fn from(p: Poly) -> Self {
        Scalar::from_poly(p)
    }
}

impl fmt::Display for Scalar {
    /// `p` for polynomials, `(p)/(q)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some((num, den)) = rest.split_once(")/(") {
                let den = den
                    .strip_suffix(')')
                    .ok_or_else(|| ParseError::Scalar(format!("unbalanced `{s}`")))?;
                let num: Poly = num.parse()?;
                let den: Poly = den.parse()?;
                return Scalar::new(num, den)
                    .ok_or_else(|| ParseError::Scalar(format!("zero denominator in `{s}`")));
            }
            if let Some(inner) = rest.strip_suffix(')') {
                return Ok(Scalar::from_poly(inner.parse()?));
            }
            return Err(ParseError::Scalar(format!("unbalanced `{s}`")));
        }
        Ok(Scalar::from_poly(t.parse()?))
    }
}
