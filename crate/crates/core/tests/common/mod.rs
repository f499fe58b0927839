#![allow(dead_code)]

use num_rational::BigRational;
use presym::harness::gen::{self, GenParams, TrialRng};
use rand::SeedableRng;

pub type Q = BigRational;

pub fn rng(seed: u64) -> TrialRng {
    TrialRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn small() -> GenParams {
    GenParams { coef_bound: 9, coef_degree: 2, max_terms: 2, density: 60 }
}

pub fn point(rng: &mut TrialRng, n: usize) -> Vec<Q> {
    (0..n).map(|_| gen::rational(rng, 7)).collect()
}
