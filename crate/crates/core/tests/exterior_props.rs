//! Randomized identities of the exterior calculus.

mod common;

use common::*;
use num_complex::Complex64;
use presym::exterior::{contract, de_rham, schouten, DifferentialForm, MultivectorField};
use presym::harness::gen::{self, GenParams};
use presym::poly::{rational_to_f64, Poly};
use presym::Scalar;
use proptest::prelude::*;
use rand::Rng;

fn params(coef_degree: u32) -> GenParams {
    GenParams { coef_degree, ..small() }
}

fn sign(odd: bool, f: DifferentialForm) -> DifferentialForm {
    if odd {
        f.neg()
    } else {
        f
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 1usize..=5, k in 0usize..=5, c in 0u32..=4) {
        let mut r = rng(seed);
        let a = gen::form(&mut r, n, k.min(n), &params(c));
        prop_assert!(de_rham(&de_rham(&a)).is_zero());
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), n in 1usize..=4, p in 0usize..=3, q_ in 0usize..=3) {
        let mut r = rng(seed);
        let a = gen::form(&mut r, n, p.min(n), &params(3));
        let b = gen::form(&mut r, n, q_.min(n), &params(3));
        let lhs = de_rham(&a.wedge(&b).unwrap());
        let rhs = &de_rham(&a).wedge(&b).unwrap() + &sign(p.min(n) % 2 == 1, a.wedge(&de_rham(&b)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_associative_and_graded_commutative(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let degs: Vec<usize> = (0..3).map(|_| r.gen_range(0..=n.min(3))).collect();
        let f: Vec<DifferentialForm> = degs.iter().map(|&d| gen::form(&mut r, n, d, &params(2))).collect();
        let left = f[0].wedge(&f[1]).unwrap().wedge(&f[2]).unwrap();
        let right = f[0].wedge(&f[1].wedge(&f[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let ab = f[0].wedge(&f[1]).unwrap();
        let ba = f[1].wedge(&f[0]).unwrap();
        prop_assert_eq!(ab, sign(degs[0] * degs[1] % 2 == 1, ba));
    }

    #[test]
    fn schouten_graded_symmetry(seed in any::<u64>(), n in 2usize..=4, p in 1usize..=3, q_ in 1usize..=3) {
        let mut r = rng(seed);
        let (p, q_) = (p.min(n), q_.min(n));
        let a = gen::multivector(&mut r, n, p, &params(2));
        let b = gen::multivector(&mut r, n, q_, &params(2));
        let sum = &schouten(&a, &b).unwrap() + &{
            let ba = schouten(&b, &a).unwrap();
            if (p - 1) * (q_ - 1) % 2 == 1 { ba.neg() } else { ba }
        };
        prop_assert!(sum.is_zero());
    }

    /// `i_[P,Q] = [[i_P, d], i_Q]` with graded commutators and global sign +1.
    #[test]
    fn derived_bracket_oracle(seed in any::<u64>(), n in 2usize..=4, p in 1usize..=2, q_ in 1usize..=2, k in 0usize..=4) {
        let mut r = rng(seed);
        let pm = gen::multivector(&mut r, n, p, &params(2));
        let qm = gen::multivector(&mut r, n, q_, &params(2));
        let alpha = gen::form(&mut r, n, k.min(n), &params(2));
        let dp = |x: &DifferentialForm| &contract(&pm, &de_rham(x)).unwrap() - &sign(p % 2 == 1, de_rham(&contract(&pm, x).unwrap()));
        let lhs = contract(&schouten(&pm, &qm).unwrap(), &alpha).unwrap();
        let rhs = &dp(&contract(&qm, &alpha).unwrap()) - &sign((1 + p) * q_ % 2 == 1, contract(&qm, &dp(&alpha)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluate_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (ka, kb, kv) = (r.gen_range(0..=n), r.gen_range(0..=n), r.gen_range(0..=n));
        let a = gen::form(&mut r, n, ka, &params(2));
        let b = gen::form(&mut r, n, kb, &params(2));
        let v = gen::multivector(&mut r, n, kv, &params(2));
        let x = point(&mut r, n);
        prop_assert_eq!(a.wedge(&b).unwrap().evaluate(&x).unwrap(), a.evaluate(&x).unwrap().wedge(&b.evaluate(&x).unwrap()).unwrap());
        prop_assert_eq!(
            contract(&v, &a).unwrap().evaluate(&x).unwrap(),
            contract(&v.evaluate(&x).unwrap(), &a.evaluate(&x).unwrap()).unwrap()
        );
    }
}

fn poly_complex(p: &Poly, x: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = Complex64::new(rational_to_f64(c), 0.0);
        for (i, &e) in m.exponents().iter().enumerate() {
            t *= x[i].powu(e as u32);
        }
        acc += t;
    }
    acc
}

fn scalar_complex(s: &Scalar, x: &[Complex64]) -> Complex64 {
    poly_complex(s.numer(), x) / poly_complex(s.denom(), x)
}

/// Complex-step derivative of a coefficient at a real point (no cancellation error).
fn partial_f64(s: &Scalar, x: &[f64], i: usize) -> f64 {
    let h = 1e-20;
    let z: Vec<Complex64> = x.iter().enumerate().map(|(j, &v)| Complex64::new(v, if i == j { h } else { 0.0 })).collect();
    scalar_complex(s, &z).im / h
}

/// `d` evaluated exactly agrees with a floating numeric gradient to 1e-9 relative.
#[test]
fn de_rham_matches_numeric_gradient() {
    let mut r = rng(2024);
    for _ in 0..60 {
        let n = r.gen_range(1..=4usize);
        let k = r.gen_range(0..n);
        let a = gen::form(&mut r, n, k, &params(4));
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
        let da = de_rham(&a);
        // d(f dx_I) = sum_i d_i f dx_i ^ dx_I, assembled numerically
        let mut numeric = std::collections::BTreeMap::<Vec<usize>, f64>::new();
        for (blade, c) in a.terms() {
            let idx = blade.indices();
            for i in 0..n {
                if idx.contains(&i) {
                    continue;
                }
                let pos = idx.iter().filter(|&&j| j < i).count();
                let mut out = idx.clone();
                out.insert(pos, i);
                let s = if pos % 2 == 1 { -1.0 } else { 1.0 };
                *numeric.entry(out).or_default() += s * partial_f64(c, &x, i);
            }
        }
        for (blade, c) in da.terms() {
            let exact = c.eval_f64(&x);
            let approx = numeric.remove(&blade.indices()).unwrap_or(0.0);
            assert!((exact - approx).abs() <= 1e-9 * exact.abs().max(1.0), "{exact} vs {approx}");
        }
        for (_, v) in numeric {
            assert!(v.abs() <= 1e-9, "spurious component {v}");
        }
    }
}

#[test]
fn worked_values() {
    let c = presym::Chart::new(3).unwrap();
    // d(x1 x2 dx3) = x2 dx1^dx3 + x1 dx2^dx3
    let a = c.dx(2).scale(&"x1*x2".parse().unwrap());
    let expected = &c.dx(0).wedge(&c.dx(2)).unwrap().scale(&"x2".parse().unwrap()) + &c.dx(1).wedge(&c.dx(2)).unwrap().scale(&"x1".parse().unwrap());
    assert_eq!(de_rham(&a), expected);
    // i_{d1 ^ d2} = i_{d1} i_{d2}, so dx1 ^ dx2 pairs to -1
    let v: MultivectorField = c.partial(0).wedge(&c.partial(1)).unwrap();
    assert_eq!(contract(&v, &c.dx(0).wedge(&c.dx(1)).unwrap()).unwrap(), DifferentialForm::function(3, Scalar::one()).neg());
}
