//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are indexed from zero internally and printed as `x1, x2, ...`.
//! Monomials are ordered graded-lexicographically with `x1 > x2 > ...`; the
//! leading term of a polynomial is its grlex-largest monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::ParseError;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v: SmallVec<[u16; 6]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Monomial(v)
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut v: SmallVec<[u16; 6]> = exps.iter().copied().collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let v = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(v)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v: SmallVec<[u16; 6]> = SmallVec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if b > a {
                return None;
            }
            v.push(a - b);
        }
        while v.last() == Some(&0) {
            v.pop();
        }
        Some(Monomial(v))
    }

    /// Index of the highest variable with a positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    fn with_exponent(&self, i: usize, e: u16) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for i in 0..len {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `Q[x1, x2, ...]`. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        Self::term(BigRational::one(), Monomial::var(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.leading().map(|(_, c)| c)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut acc, src) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &src.terms {
            acc.add_term(m.clone(), c.clone());
        }
        acc
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), -c.clone());
        }
        acc
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut acc = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.mul(mb), ca * cb);
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                let c = c * BigRational::from_integer(BigInt::from(e));
                acc.add_term(m.with_exponent(var, e - 1), c);
            }
        }
        acc
    }

    /// Evaluate at a rational point; missing coordinates are zero.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute polynomials for the variables (`images[i]` replaces `x_{i+1}`).
    pub fn compose(&self, images: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = images.get(i).cloned().unwrap_or_else(|| Poly::var(i));
                    t = t.mul(&x.pow(e as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Scale so the grlex-leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None => Poly::zero(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(lm)?;
            let c = rc / lc;
            let t = Poly::term(c, m);
            rem = rem.sub(&divisor.mul(&t));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`: `self = sum_k coeffs[k] * x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            out[e].add_term(m.with_exponent(var, 0), c.clone());
        }
        out
    }

    fn leading_coefficient_in(&self, var: usize) -> Poly {
        self.coefficients_in(var).pop().unwrap_or_else(Poly::zero)
    }

    /// Greatest common divisor, normalized to be monic. `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        let var = a.max_var().max(b.max_var()).expect("non-constant");
        let (da, db) = (a.degree_in(var), b.degree_in(var));
        if da == 0 {
            return Poly::gcd(a, &b.content_in(var));
        }
        if db == 0 {
            return Poly::gcd(&a.content_in(var), b);
        }
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let pa = a.exact_div(&ca).expect("content divides");
        let pb = b.exact_div(&cb).expect("content divides");
        let c = Poly::gcd(&ca, &cb);
        let g = primitive_prs(pa, pb, var);
        c.mul(&g).monic()
    }

    /// Gcd of the coefficients of `self` viewed as a polynomial in `var`.
    pub fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(var) {
            if c.is_zero() {
                continue;
            }
            g = Poly::gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides").monic()
    }

    /// Pseudo-remainder of `self` by `b` with respect to `var`.
    fn pseudo_rem(&self, b: &Poly, var: usize) -> Poly {
        let db = b.degree_in(var);
        let lb = b.leading_coefficient_in(var);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lr = r.leading_coefficient_in(var);
            let shifted = b.mul(&lr).mul_monomial(&Monomial::var_pow(var, dr - db));
            r = r.mul(&lb).sub(&shifted);
        }
        r
    }

    /// Integer-free structural check: every monomial has only even exponents,
    /// every coefficient is positive, and the constant term is positive. Such a
    /// polynomial is strictly positive on all of `R^n`.
    pub fn is_positive_sum_of_even_powers(&self) -> bool {
        let has_positive_constant = self
            .terms
            .get(&Monomial::one())
            .is_some_and(|c| c.is_positive());
        has_positive_constant
            && self
                .terms
                .iter()
                .all(|(m, c)| c.is_positive() && m.exponents().iter().all(|e| e % 2 == 0))
    }

    pub fn to_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                t *= point.get(i).copied().unwrap_or(0.0).powi(e as i32);
            }
            acc += t;
        }
        acc
    }
}

fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = a.pseudo_rem(&b, var);
        if r.is_zero() {
            return b.primitive_part_in(var);
        }
        if r.degree_in(var) == 0 {
            return Poly::one();
        }
        a = b;
        b = r.primitive_part_in(var);
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Terms in descending grlex order, `coef*x1^a*x2^b` joined by `+`/`-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(fmt_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Polynomial(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_term(s: &str) -> Result<(BigRational, Monomial), ParseError> {
    let mut coef = BigRational::one();
    let mut exps: Vec<u16> = Vec::new();
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(ParseError::Polynomial(format!("empty factor in `{s}`")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| ParseError::Polynomial(format!("bad variable `{factor}`")))?;
            let exp: u16 = exp
                .trim()
                .parse()
                .map_err(|_| ParseError::Polynomial(format!("bad exponent `{factor}`")))?;
            if idx == 0 {
                return Err(ParseError::Polynomial("variables are numbered from x1".into()));
            }
            if exps.len() < idx {
                exps.resize(idx, 0);
            }
            exps[idx - 1] += exp;
        } else {
            coef *= parse_rational(factor)?;
        }
    }
    Ok((coef, Monomial::from_exponents(&exps)))
}

impl FromStr for Poly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseError::Polynomial("empty polynomial".into()));
        }
        let mut acc = Poly::zero();
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut sign = BigRational::one();
        let mut i = 0;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            if bytes[0] == b'-' {
                sign = -sign;
            }
            start = 1;
            i = 1;
        }
        while i <= bytes.len() {
            // a sign directly after `^` or `/` is not a term separator
            let at_sep = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-')
                    && i > start
                    && bytes[i - 1] != b'^'
                    && bytes[i - 1] != b'/'
                    && bytes[i - 1] != b'*');
            if at_sep {
                let (c, m) = parse_term(&s[start..i])?;
                acc.add_term(m, c * &sign);
                if i < bytes.len() {
                    sign = if bytes[i] == b'-' { -BigRational::one() } else { BigRational::one() };
                }
                start = i + 1;
            }
            i += 1;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("3*x1^2*x2 - 1/2*x3 + 1").to_string(), "3*x1^2*x2-1/2*x3+1");
        assert_eq!(p("-x1").to_string(), "-x1");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("x1 - x1"), Poly::zero());
        assert!("x0".parse::<Poly>().is_err());
        assert!("1/0".parse::<Poly>().is_err());
        assert!("x1+".parse::<Poly>().is_err());
    }

    #[test]
    fn grlex_leading_term() {
        let q = p("x2^2 + x1*x3 + x1");
        // both degree-2 monomials tie on degree; x1*x3 wins lexicographically
        assert_eq!(q.leading().unwrap().0, &Monomial::from_exponents(&[1, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2 - x2^2");
        let b = p("x1 + x2");
        assert_eq!(a.exact_div(&b).unwrap(), p("x1 - x2"));
        assert!(p("x1^2 + 1").exact_div(&b).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let g = p("x1*x2 + x3");
        let a = g.mul(&p("x1 - 2*x2^2 + 1"));
        let b = g.mul(&p("x3^2 + x1"));
        assert_eq!(Poly::gcd(&a, &b), g.monic());
        assert_eq!(Poly::gcd(&p("x1 + 1"), &p("x1 - 1")), Poly::one());
        assert_eq!(Poly::gcd(&p("2*x1^2 + 2*x1"), &p("4*x1")), p("x1"));
    }

    #[test]
    fn derivative_and_eval() {
        let q = p("x1^3*x2 + 2*x2");
        assert_eq!(q.derivative(0), p("3*x1^2*x2"));
        assert_eq!(q.derivative(1), p("x1^3 + 2"));
        let pt = [BigRational::from_integer(2.into()), BigRational::from_integer(3.into())];
        assert_eq!(q.eval(&pt), BigRational::from_integer(30.into()));
    }

    #[test]
    fn positivity_pattern() {
        assert!(p("1 + x1^2").is_positive_sum_of_even_powers());
        assert!(p("2 + x1^2*x2^4 + 1/3*x3^2").is_positive_sum_of_even_powers());
        assert!(!p("x1^2").is_positive_sum_of_even_powers());
        assert!(!p("1 - x1^2").is_positive_sum_of_even_powers());
        assert!(!p("1 + x1").is_positive_sum_of_even_powers());
    }
}
