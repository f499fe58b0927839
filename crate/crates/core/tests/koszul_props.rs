//! Koszul brackets and the L-infinity[1] structure of a bivector field.

mod common;

use common::*;
use presym::exterior::{de_rham, schouten};
use presym::harness::gen::{self, GenParams, TrialRng};
use presym::koszul::*;
use presym::{Chart, DifferentialForm, MultivectorField, Scalar};
use proptest::prelude::*;
use rand::Rng;

fn params(coef_degree: u32) -> GenParams {
    GenParams { coef_bound: 5, coef_degree, max_terms: 2, density: 60 }
}

fn shifted(f: DifferentialForm, d: usize) -> ShiftedForm {
    ShiftedForm::with_degree(f, d).unwrap()
}

fn sgn(odd: bool, f: DifferentialForm) -> DifferentialForm {
    if odd {
        f.neg()
    } else {
        f
    }
}

/// A random Poisson bivector: constant on R^n, or a Casimir multiple of the so(3) structure.
fn poisson(r: &mut TrialRng) -> MultivectorField {
    if r.gen_bool(0.5) {
        let n = r.gen_range(2..=4);
        return gen::bivector_field(r, n, &params(0));
    }
    let c = Chart::new(3).unwrap();
    let b = |i: usize, j: usize, s: &str| c.partial(i).wedge(&c.partial(j)).unwrap().scale(&s.parse::<Scalar>().unwrap());
    let lie = &(&b(0, 1, "x3") + &b(1, 2, "x1")) + &b(2, 0, "x2");
    let casimir: Scalar = ["1", "x1^2+x2^2+x3^2", "2 - x1^2 - x2^2 - x3^2"][r.gen_range(0..3)].parse().unwrap();
    lie.scale(&casimir)
}

fn random_inputs(r: &mut TrialRng, n: usize, k: usize, c: u32) -> Vec<ShiftedForm> {
    (0..k)
        .map(|_| {
            let d = r.gen_range(0..=n.min(3));
            shifted(gen::nonzero_form(r, n, d, &params(c)), d)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn brackets_are_graded_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4usize);
        let ctx = KoszulContext::new(gen::bivector_field(&mut r, n, &params(2))).unwrap();
        let x = random_inputs(&mut r, n, 3, 2);
        let (p, q_) = (x[0].form_degree(), x[1].form_degree());
        let ab = lambda(2, &[x[0].clone(), x[1].clone()], &ctx).unwrap();
        let ba = lambda(2, &[x[1].clone(), x[0].clone()], &ctx).unwrap();
        prop_assert_eq!(ab.form(), &sgn(p * q_ % 2 != 0, ba.into_form()));
        let abc = lambda(3, &x, &ctx).unwrap();
        let bac = lambda(3, &[x[1].clone(), x[0].clone(), x[2].clone()], &ctx).unwrap();
        prop_assert_eq!(abc.form(), &sgn(p * q_ % 2 != 0, bac.into_form()));
    }

    #[test]
    fn lambda2_expressions_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4usize);
        let ctx = KoszulContext::new(gen::bivector_field(&mut r, n, &params(2))).unwrap();
        let x = random_inputs(&mut r, n, 2, 2);
        prop_assert_eq!(lambda(2, &x, &ctx).unwrap(), lambda2_via_bracket(&x[0], &x[1], &ctx).unwrap());
    }

    #[test]
    fn one_form_formula(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4usize);
        let ctx = KoszulContext::new(gen::bivector_field(&mut r, n, &params(2))).unwrap();
        let a = gen::form(&mut r, n, 1, &params(2));
        let b = gen::form(&mut r, n, 1, &params(2));
        prop_assert_eq!(koszul_bracket(&a, &b, &ctx).unwrap(), koszul_bracket_one_forms(&a, &b, &ctx).unwrap());
        // [df, dg]_Z = d{f, g} with {f, g} = Z(df, dg)
        let f = gen::form(&mut r, n, 0, &params(2));
        let g = gen::form(&mut r, n, 0, &params(2));
        let (df, dg) = (de_rham(&f), de_rham(&g));
        let bracket = koszul_bracket(&df, &dg, &ctx).unwrap();
        prop_assert_eq!(de_rham(&bracket), DifferentialForm::zero(n));
    }

    #[test]
    fn intertwiner_signs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4usize);
        let ctx = KoszulContext::new(gen::non_poisson_bivector_field(&mut r, n.max(3), &params(1))).unwrap();
        let n = ctx.dim();
        for k in 1..=3 {
            let x = random_inputs(&mut r, n, k, 1);
            let l = lambda(k, &x, &ctx).unwrap();
            let m = mu(k, &x, &ctx).unwrap();
            prop_assert_eq!(m.form(), &sgn(k % 2 == 0, l.into_form()));
        }
    }

    #[test]
    fn poisson_has_no_trinary_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let z = poisson(&mut r);
        prop_assert!(schouten(&z, &z).unwrap().is_zero());
        let ctx = KoszulContext::new(z).unwrap();
        prop_assert!(ctx.is_poisson());
        let n = ctx.dim();
        let x = random_inputs(&mut r, n, 3, 1);
        prop_assert!(lambda(3, &x, &ctx).unwrap().is_zero());
        prop_assert!(jacobiator(&x, &ctx).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The generalized Jacobi identities hold for arbitrary (non-Poisson) Z.
    #[test]
    fn jacobi_up_to_arity_four(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = KoszulContext::new(gen::non_poisson_bivector_field(&mut r, 3, &params(1))).unwrap();
        for k in 1..=4 {
            let x = random_inputs(&mut r, 3, k, 1);
            let j = jacobiator(&x, &ctx).unwrap();
            prop_assert!(j.is_zero(), "arity {}: {:?}", k, j);
        }
    }

    #[test]
    fn mc_equivalence_on_constant_z(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3usize);
        let z = gen::bivector_field(&mut r, n, &params(0));
        let ctx = KoszulContext::new(z.clone()).unwrap();
        // positive case: F_{-Z}(d theta) is MC
        let theta = gen::form(&mut r, n, 1, &params(1));
        let minus = KoszulContext::new(z.neg()).unwrap();
        if let Ok(f) = f_symbolic(&de_rham(&theta), &minus) {
            let beta = f.to_form();
            let e = mc_equivalence(&beta, &ctx, &default_grid(n)).unwrap();
            prop_assert!(e.is_mc && e.f_closed && e.holds(), "{:?}", e);
        }
        // generic case: either verdict, but both sides agree
        let beta = gen::form(&mut r, n, 2, &params(1));
        let e = mc_equivalence(&beta, &ctx, &default_grid(n)).unwrap();
        prop_assert!(e.holds(), "{:?}", e);
    }
}

/// On R^2 with Z = x1 d1^d2: [dx1, dx2]_Z = dx1.
#[test]
fn worked_bracket_value() {
    let c = Chart::new(2).unwrap();
    let z = c.partial(0).wedge(&c.partial(1)).unwrap().scale(&"x1".parse().unwrap());
    let ctx = KoszulContext::new(z).unwrap();
    assert_eq!(koszul_bracket_one_forms(&c.dx(0), &c.dx(1), &ctx).unwrap(), c.dx(0));
    assert_eq!(koszul_bracket(&c.dx(0), &c.dx(1), &ctx).unwrap(), c.dx(0));
}

/// A closed 2-form on R^2 with constant Z is always MC; residual reduces to d beta.
#[test]
fn mc_residual_top_degree() {
    let c = Chart::new(2).unwrap();
    let z = c.partial(0).wedge(&c.partial(1)).unwrap();
    let ctx = KoszulContext::new(z).unwrap();
    let beta = c.dx(0).wedge(&c.dx(1)).unwrap().scale(&"x1^2 + x2".parse().unwrap());
    assert!(mc_residual(&beta, &ctx).unwrap().is_zero());
}
