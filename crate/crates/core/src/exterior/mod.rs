//! Symbolic Grassmann calculus on a coordinate chart `R^n`.
//!
//! Differential forms and multivector fields share one representation: a map
//! from basis blades (strictly increasing index sets, stored as bitmasks) to
//! [`Scalar`] coefficients. No `1/k!` factors appear anywhere; the coefficient
//! of `dx_{i1} ^ ... ^ dx_{ik}` with `i1 < ... < ik` is stored once.
//!
//! Conventions:
//! - `contract(X1 ^ ... ^ Xk, a) = i_{X1}(i_{X2}(... i_{Xk}(a)))`.
//! - `<X ^ Y, a ^ b> = a(X) b(Y) - a(Y) b(X)`, so `<d1 ^ d2, dx1 ^ dx2> = 1`.
//! - `lie_derivative(P, a) = contract(P, d a) - d contract(P, a)` for every `P`.

pub(crate) mod calculus;
pub mod json;

pub use calculus::*;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_rational::BigRational;

use crate::error::ExteriorError;
use crate::scalar::Scalar;

/// Largest chart dimension supported by the bitmask blade encoding.
pub const MAX_DIM: usize = 32;

/// A coordinate chart `R^n` with coordinates `x1..xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    dim: usize,
}

impl Chart {
    pub fn new(dim: usize) -> Result<Self, ExteriorError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(ExteriorError::IndexOutOfRange { index: dim, dim: MAX_DIM });
        }
        Ok(Chart { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self, i: usize) -> String {
        format!("x{}", i + 1)
    }

    /// `dx_{i+1}`.
    pub fn dx(&self, i: usize) -> DifferentialForm {
        DifferentialForm::basis(self.dim, &[i])
    }

    /// `d/dx_{i+1}`.
    pub fn partial(&self, i: usize) -> MultivectorField {
        MultivectorField::basis(self.dim, &[i])
    }

    pub fn coordinate(&self, i: usize) -> Scalar {
        Scalar::var(i)
    }
}

/// A strictly increasing index set, bit `i` set for index `i`.
///
/// Ordered by degree, then lexicographically on the sorted index tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_indices(indices: &[usize]) -> Option<Blade> {
        let mut bits = 0u32;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= MAX_DIM || last.is_some_and(|l| i <= l) {
                return None;
            }
            bits |= 1 << i;
            last = Some(i);
        }
        Some(Blade(bits))
    }

    pub fn single(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Number of indices of `self` strictly below `i`.
    fn rank_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    /// Sign and result of `self ^ other`, or `None` when they share an index.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // inversions: pairs (a in self, b in other) with a > b
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (self.0 >> b).count_ones();
        }
        Some((swaps % 2 == 1, Blade(self.0 | other.0)))
    }

    /// Interior product of the single vector `e_i` with this blade:
    /// `i_{e_i}(e_J) = (-1)^{pos} e_{J \ i}` where `pos` counts indices below `i`.
    pub fn remove(self, i: usize) -> Option<(bool, Blade)> {
        if !self.contains(i) {
            return None;
        }
        Some((self.rank_below(i) % 2 == 1, Blade(self.0 & !(1 << i))))
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.reverse_bits().cmp(&self.0.reverse_bits()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub trait Kind: Clone + Copy + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    const NAME: &'static str;
    fn basis_symbol(i: usize) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VectorKind;

impl Kind for FormKind {
    const NAME: &'static str = "form";
    fn basis_symbol(i: usize) -> String {
        format!("dx{}", i + 1)
    }
}

impl Kind for VectorKind {
    const NAME: &'static str = "multivector";
    fn basis_symbol(i: usize) -> String {
        format!("d{}", i + 1)
    }
}

/// An element of the exterior algebra over a chart, possibly inhomogeneous.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graded<K: Kind> {
    dim: usize,
    terms: BTreeMap<Blade, Scalar>,
    kind: PhantomData<K>,
}

pub type DifferentialForm = Graded<FormKind>;
pub type MultivectorField = Graded<VectorKind>;

impl<K: Kind> Graded<K> {
    pub fn zero(dim: usize) -> Self {
        Graded { dim, terms: BTreeMap::new(), kind: PhantomData }
    }

    /// The degree-zero element `f`.
    pub fn function(dim: usize, f: Scalar) -> Self {
        Self::monomial(dim, Blade::EMPTY, f)
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let blade = Blade::from_indices(indices).expect("strictly increasing indices");
        Self::monomial(dim, blade, Scalar::one())
    }

    pub fn monomial(dim: usize, blade: Blade, coeff: Scalar) -> Self {
        assert!(blade.max_index().is_none_or(|m| m < dim), "blade outside chart");
        let mut out = Self::zero(dim);
        out.add_term(blade, coeff);
        out
    }

    /// Build from `(indices, coefficient)` pairs; indices need not be sorted
    /// and repeated indices annihilate the term.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut out = Self::zero(dim);
        for (idx, c) in terms {
            let mut blade = Blade::EMPTY;
            let mut negate = false;
            let mut dead = false;
            for &i in &idx {
                if i >= dim {
                    return Err(ExteriorError::IndexOutOfRange { index: i, dim });
                }
                match blade.wedge(Blade::single(i)) {
                    Some((s, b)) => {
                        negate ^= s;
                        blade = b;
                    }
                    None => dead = true,
                }
            }
            if !dead {
                out.add_term(blade, if negate { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn chart(&self) -> Chart {
        Chart { dim: self.dim }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, blade: Blade) -> Scalar {
        self.terms.get(&blade).cloned().unwrap_or_default()
    }

    pub fn coeff_of(&self, indices: &[usize]) -> Scalar {
        Blade::from_indices(indices).map(|b| self.coeff(b)).unwrap_or_default()
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|b| b.degree()).collect();
        d.dedup();
        d
    }

    /// The common degree of all terms, `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Whether every term has degree `k` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.degree() == k)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Graded {
            dim: self.dim,
            terms: self.terms.iter().filter(|(b, _)| b.degree() == k).map(|(b, c)| (*b, c.clone())).collect(),
            kind: PhantomData,
        }
    }

    pub(crate) fn add_term(&mut self, blade: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn check_chart(&self, other_dim: usize) -> Result<(), ExteriorError> {
        if self.dim == other_dim {
            Ok(())
        } else {
            Err(ExteriorError::ChartMismatch { left: self.dim, right: other_dim })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_chart(other.dim)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (b, v) in &self.terms {
            out.add_term(*b, v.mul_ref(c));
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        Graded {
            dim: self.dim,
            terms: if num_traits::Zero::is_zero(c) {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(b, v)| (*b, v.scale(c))).collect()
            },
            kind: PhantomData,
        }
    }

    pub fn neg(&self) -> Self {
        Graded {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c.neg_ref())).collect(),
            kind: PhantomData,
        }
    }

    /// Multiply by `(-1)^k`.
    pub fn sign(&self, negate: bool) -> Self {
        if negate {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    /// Exterior product in the algebra of this kind.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_chart(other.dim)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some((neg, b)) = ba.wedge(*bb) {
                    let c = ca.mul_ref(cb);
                    out.add_term(b, if neg { c.neg_ref() } else { c });
                }
            }
        }
        out
    }

    /// Partial derivative of every coefficient.
    pub fn partial_derivative(&self, var: usize) -> Self {
        self.map_coeffs(|c| c.derivative(var))
    }

    /// Substitute a rational point into every coefficient.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<Self, ExteriorError> {
        if point.len() != self.dim {
            return Err(ExteriorError::PointDimension { got: point.len(), want: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (b, c) in &self.terms {
            let v = c.eval(point).ok_or(ExteriorError::PoleAtPoint)?;
            out.add_term(*b, Scalar::constant(v));
        }
        Ok(out)
    }

    /// Whether all coefficients are constants.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Scalar::is_constant)
    }

    /// Largest coefficient degree (numerator or denominator).
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.values().map(Scalar::degree).max().unwrap_or(0)
    }
}

macro_rules! graded_ops {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<K: Kind> std::ops::$tr<&Graded<K>> for &Graded<K> {
            type Output = Graded<K>;
            /// Panics if the charts differ.
            fn $m(self, rhs: &Graded<K>) -> Graded<K> {
                assert_eq!(self.dim, rhs.dim, "chart mismatch");
                $body(self, rhs)
            }
        }
        impl<K: Kind> std::ops::$tr<Graded<K>> for Graded<K> {
            type Output = Graded<K>;
            fn $m(self, rhs: Graded<K>) -> Graded<K> {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
    };
}

graded_ops!(Add, add, |a: &Graded<K>, b: &Graded<K>| a.add_unchecked(b));
graded_ops!(Sub, sub, |a: &Graded<K>, b: &Graded<K>| a.add_unchecked(&b.neg()));

impl<K: Kind> std::ops::Neg for &Graded<K> {
    type Output = Graded<K>;
    fn neg(self) -> Graded<K> {
        Graded::neg(self)
    }
}

impl<K: Kind> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let basis: Vec<String> = b.indices().into_iter().map(K::basis_symbol).collect();
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", basis.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Kind> fmt::Debug for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}]({self})", K::NAME, self.dim)
    }
}
