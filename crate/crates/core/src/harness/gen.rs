//! Seeded random generators for exact test inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::{Bivector, SkewBilinear, Subspace};
use crate::exterior::{Blade, DifferentialForm, Graded, Kind, MultivectorField};
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

pub type TrialRng = ChaCha8Rng;

/// Sub-seed for trial `trial` of a run seeded with `seed` (splitmix64 finalizer).
pub fn sub_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, trial: u64) -> TrialRng {
    TrialRng::seed_from_u64(sub_seed(seed, trial))
}

/// Knobs shared by the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Bound on numerators and denominators of random rationals.
    pub coef_bound: i64,
    /// Maximal total degree of polynomial coefficients.
    pub coef_degree: u32,
    /// Maximal number of monomials per polynomial coefficient.
    pub max_terms: usize,
    /// Probability (in percent) that a basis blade receives a nonzero coefficient.
    pub density: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { coef_bound: 100, coef_degree: 2, max_terms: 3, density: 60 }
    }
}

pub fn rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn nonzero_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    loop {
        let q = rational(rng, bound);
        if q != BigRational::from_integer(0.into()) {
            return q;
        }
    }
}

fn monomial(rng: &mut impl Rng, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    let mut exps = vec![0u16; nvars];
    for _ in 0..d {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(&exps)
}

pub fn poly(rng: &mut impl Rng, nvars: usize, p: &GenParams) -> Poly {
    let terms = rng.gen_range(1..=p.max_terms.max(1));
    let mut out = Poly::zero();
    for _ in 0..terms {
        out = out.add(&Poly::term(nonzero_rational(rng, p.coef_bound), monomial(rng, nvars, p.coef_degree)));
    }
    out
}

fn homogeneous<K: Kind>(rng: &mut impl Rng, n: usize, degree: usize, p: &GenParams) -> Graded<K> {
    let mut out = Graded::<K>::zero(n);
    for bits in 0u32..(1u32 << n) {
        if bits.count_ones() as usize != degree || rng.gen_range(0..100) >= p.density {
            continue;
        }
        let blade = Blade::from_indices(&(0..n).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>()).expect("sorted");
        out = &out + &Graded::monomial(n, blade, Scalar::from_poly(poly(rng, n, p)));
    }
    out
}

/// Random homogeneous form of the given degree with polynomial coefficients.
pub fn form(rng: &mut impl Rng, n: usize, degree: usize, p: &GenParams) -> DifferentialForm {
    homogeneous(rng, n, degree, p)
}

/// Like [`form`] but never zero when `degree <= n`.
pub fn nonzero_form(rng: &mut impl Rng, n: usize, degree: usize, p: &GenParams) -> DifferentialForm {
    loop {
        let f = form(rng, n, degree, p);
        if !f.is_zero() || degree > n {
            return f;
        }
    }
}

pub fn multivector(rng: &mut impl Rng, n: usize, degree: usize, p: &GenParams) -> MultivectorField {
    homogeneous(rng, n, degree, p)
}

/// Random bivector field with polynomial coefficients.
pub fn bivector_field(rng: &mut impl Rng, n: usize, p: &GenParams) -> MultivectorField {
    homogeneous(rng, n, 2, p)
}

/// A bivector field with `[Z, Z] != 0` (resampled until so).
pub fn non_poisson_bivector_field(rng: &mut impl Rng, n: usize, p: &GenParams) -> MultivectorField {
    loop {
        let z = bivector_field(rng, n, p);
        if !crate::exterior::schouten(&z, &z).expect("same chart").is_zero() {
            return z;
        }
    }
}

pub fn skew_form(rng: &mut impl Rng, n: usize, bound: i64) -> SkewBilinear<BigRational> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, rational(rng, bound)));
        }
    }
    SkewBilinear::from_pairs(n, &pairs)
}

pub fn bivector(rng: &mut impl Rng, n: usize, bound: i64) -> Bivector<BigRational> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, rational(rng, bound)));
        }
    }
    Bivector::from_pairs(n, &pairs)
}

/// Random vector with small integer entries.
pub fn vector(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<BigRational> {
    (0..n).map(|_| BigRational::from_integer(rng.gen_range(-bound..=bound).into())).collect()
}

/// A random invertible rational matrix as a product of elementary shears and a permutation.
pub fn unimodular_basis(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<Vec<BigRational>> {
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let mut cols: Vec<Vec<BigRational>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { one.clone() } else { zero.clone() }).collect())
        .collect();
    for _ in 0..2 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let c = BigRational::from_integer(rng.gen_range(-bound..=bound).into());
        let src = cols[b].clone();
        for (x, y) in cols[a].iter_mut().zip(src) {
            *x += &c * y;
        }
    }
    cols.shuffle(rng);
    cols
}

/// A random rank-`k` form `eta` on `Q^n` with its kernel `K` and a random complement `G`.
pub fn constant_rank_instance(
    rng: &mut impl Rng,
    n: usize,
    k: usize,
    bound: i64,
) -> (SkewBilinear<BigRational>, Subspace<BigRational>, Subspace<BigRational>) {
    let basis = unimodular_basis(rng, n, 3);
    // eta = sum of a_i * f_{2i}^ ^ f_{2i+1}^ in the dual basis of `basis`
    let b = crate::matrix::Matrix::from_columns(&basis);
    let dual = b.inverse().expect("invertible");
    let mut comp = crate::matrix::Matrix::<BigRational>::zeros(n, n);
    for i in 0..k / 2 {
        let a = nonzero_rational(rng, bound);
        comp[(2 * i, 2 * i + 1)] = a.clone();
        comp[(2 * i + 1, 2 * i)] = -a;
    }
    // components in the standard basis are dual^T comp dual; the sharp is the transpose
    let std_comp = dual.transpose().mul(&comp).mul(&dual);
    let eta = SkewBilinear::from_sharp(std_comp.transpose()).expect("skew");
    let kernel = Subspace::span(n, &basis[k..]);
    // complement: span of the first k basis vectors perturbed by kernel directions
    let g_vecs: Vec<Vec<BigRational>> = basis[..k]
        .iter()
        .map(|v| {
            let mut w = v.clone();
            for kv in &basis[k..] {
                let c = BigRational::from_integer(rng.gen_range(-2i64..=2).into());
                for (x, y) in w.iter_mut().zip(kv) {
                    *x += &c * y;
                }
            }
            w
        })
        .collect();
    (eta, kernel, Subspace::span(n, &g_vecs))
}
