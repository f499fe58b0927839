//! Koszul bracket of a bivector field and the L-infinity[1] structure on
//! `Omega(R^n)[2]`.
//!
//! With `L_Z = i_Z d - d i_Z`, the brackets are
//!
//! - `l1 = d`,
//! - `l2(a, b) = (-1)^|a| [a, b]_Z`,
//! - `l3(a, b, c) = (-1)^(|b|+1) (a# ^ b# ^ c#)(1/2 [Z, Z])`,
//!
//! where `|a|` is the ordinary form degree and the shifted degree is `|a| - 2`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dirac::{Bivector, SkewBilinear};
use crate::error::{ExteriorError, KoszulError, LinearError};
use crate::exterior::calculus::{
    de_rham, lie_derivative_unchecked, lie_derivative_vector, multi_sharp_unchecked, pairing, schouten_unchecked,
    sharp_unchecked,
};
use crate::exterior::{DifferentialForm, MultivectorField};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Default bound on the total degree of entries produced by elimination.
pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// A homogeneous form together with its degree, so zero keeps a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedForm {
    form: DifferentialForm,
    degree: i64,
}

impl ShiftedForm {
    /// Wrap a nonzero homogeneous form.
    pub fn new(form: DifferentialForm) -> Result<Self, KoszulError> {
        let d = form.degree().ok_or(ExteriorError::Inhomogeneous)?;
        Ok(ShiftedForm { form, degree: d as i64 })
    }

    /// Wrap a form of the given ordinary degree (zero is accepted in every degree).
    pub fn with_degree(form: DifferentialForm, degree: usize) -> Result<Self, KoszulError> {
        if !form.is_homogeneous_of(degree) {
            return Err(ExteriorError::Inhomogeneous.into());
        }
        Ok(ShiftedForm { form, degree: degree as i64 })
    }

    fn raw(form: DifferentialForm, degree: i64) -> Self {
        ShiftedForm { form: if degree < 0 { DifferentialForm::zero(form.dim()) } else { form }, degree }
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn into_form(self) -> DifferentialForm {
        self.form
    }

    /// Ordinary form degree `|a|` (may be negative for zero outputs).
    pub fn form_degree(&self) -> i64 {
        self.degree
    }

    /// Degree in `Omega[2]`: `|a| - 2`.
    pub fn shifted_degree(&self) -> i64 {
        self.degree - 2
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn neg(&self) -> Self {
        ShiftedForm { form: self.form.neg(), degree: self.degree }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ShiftedForm { form: self.form.scale_rational(c), degree: self.degree }
    }
}

/// A bivector field with its cached `1/2 [Z, Z]`.
#[derive(Clone, Debug)]
pub struct KoszulContext {
    z: MultivectorField,
    half_zz: MultivectorField,
    degree_cap: u32,
}

impl KoszulContext {
    pub fn new(z: MultivectorField) -> Result<Self, KoszulError> {
        if !z.is_homogeneous_of(2) {
            return Err(KoszulError::WrongDegree { want: 2, got: z.degree().unwrap_or(0) });
        }
        let half = BigRational::new(1.into(), 2.into());
        let half_zz = schouten_unchecked(&z, &z).scale_rational(&half);
        Ok(KoszulContext { z, half_zz, degree_cap: DEFAULT_DEGREE_CAP })
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn z(&self) -> &MultivectorField {
        &self.z
    }

    pub fn half_zz(&self) -> &MultivectorField {
        &self.half_zz
    }

    pub fn is_poisson(&self) -> bool {
        self.half_zz.is_zero()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    fn check(&self, a: &DifferentialForm) -> Result<(), KoszulError> {
        Ok(a.check_chart(self.dim())?)
    }
}

fn sign(odd: bool, a: DifferentialForm) -> DifferentialForm {
    if odd {
        a.neg()
    } else {
        a
    }
}

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// `L_Z(a ^ b) - L_Z(a) ^ b - (-1)^|a| a ^ L_Z(b)`.
fn leibniz_defect(a: &DifferentialForm, p: i64, b: &DifferentialForm, z: &MultivectorField) -> DifferentialForm {
    let whole = lie_derivative_unchecked(z, &a.wedge_unchecked(b));
    let left = lie_derivative_unchecked(z, a).wedge_unchecked(b);
    let right = sign(odd(p), a.wedge_unchecked(&lie_derivative_unchecked(z, b)));
    &(&whole - &left) - &right
}

fn bracket_graded(a: &DifferentialForm, p: i64, b: &DifferentialForm, z: &MultivectorField) -> DifferentialForm {
    sign(odd(p + 1), leibniz_defect(a, p, b, z))
}

fn homogeneous_degree(a: &DifferentialForm) -> Result<Option<i64>, KoszulError> {
    if a.is_zero() {
        return Ok(None);
    }
    Ok(Some(a.degree().ok_or(ExteriorError::Inhomogeneous)? as i64))
}

/// `[a, b]_Z = (-1)^(|a|+1) (L_Z(a ^ b) - L_Z(a) ^ b - (-1)^|a| a ^ L_Z(b))`.
pub fn koszul_bracket(a: &DifferentialForm, b: &DifferentialForm, ctx: &KoszulContext) -> Result<DifferentialForm, KoszulError> {
    ctx.check(a)?;
    ctx.check(b)?;
    let p = homogeneous_degree(a)?;
    homogeneous_degree(b)?;
    match p {
        None => Ok(DifferentialForm::zero(ctx.dim())),
        Some(p) => Ok(bracket_graded(a, p, b, &ctx.z)),
    }
}

/// `[a, b]_Z = L_{Z# a} b - L_{Z# b} a - d <Z, a ^ b>` for 1-forms.
pub fn koszul_bracket_one_forms(
    a: &DifferentialForm,
    b: &DifferentialForm,
    ctx: &KoszulContext,
) -> Result<DifferentialForm, KoszulError> {
    ctx.check(a)?;
    ctx.check(b)?;
    for f in [a, b] {
        if !f.is_homogeneous_of(1) {
            return Err(KoszulError::WrongDegree { want: 1, got: f.degree().unwrap_or(0) });
        }
    }
    let za = sharp_unchecked(&ctx.z, a);
    let zb = sharp_unchecked(&ctx.z, b);
    let f = pairing(&ctx.z, &a.wedge_unchecked(b))?;
    let df = de_rham(&DifferentialForm::function(ctx.dim(), f));
    let x = lie_derivative_vector(&za, b)?;
    let y = lie_derivative_vector(&zb, a)?;
    Ok(&(&x - &y) - &df)
}

/// `[a, b, c]_Z = (a# ^ b# ^ c#)(1/2 [Z, Z])`.
pub fn trinary_bracket(
    a: &DifferentialForm,
    b: &DifferentialForm,
    c: &DifferentialForm,
    ctx: &KoszulContext,
) -> Result<DifferentialForm, KoszulError> {
    for f in [a, b, c] {
        ctx.check(f)?;
        homogeneous_degree(f)?;
    }
    Ok(multi_sharp_unchecked(&[a.clone(), b.clone(), c.clone()], &ctx.half_zz))
}

fn check_inputs(k: usize, inputs: &[ShiftedForm], ctx: &KoszulContext) -> Result<(), KoszulError> {
    if !(1..=3).contains(&k) {
        return Err(KoszulError::Arity(k));
    }
    if inputs.len() != k {
        return Err(KoszulError::Arity(inputs.len()));
    }
    for x in inputs {
        ctx.check(&x.form)?;
    }
    Ok(())
}

fn output_degree(k: usize, inputs: &[ShiftedForm]) -> i64 {
    let sum: i64 = inputs.iter().map(|x| x.degree).sum();
    match k {
        1 => sum + 1,
        2 => sum - 1,
        _ => sum - 3,
    }
}

fn lambda_unchecked(k: usize, inputs: &[ShiftedForm], ctx: &KoszulContext) -> ShiftedForm {
    let deg = output_degree(k, inputs);
    let form = match k {
        1 => de_rham(&inputs[0].form),
        2 => {
            // -(L_Z(a ^ b) - L_Z a ^ b - (-1)^|a| a ^ L_Z b)
            let (a, b) = (&inputs[0], &inputs[1]);
            leibniz_defect(&a.form, a.degree, &b.form, &ctx.z).neg()
        }
        _ => {
            let forms: Vec<DifferentialForm> = inputs.iter().map(|x| x.form.clone()).collect();
            sign(!odd(inputs[1].degree), multi_sharp_unchecked(&forms, &ctx.half_zz))
        }
    };
    ShiftedForm::raw(form, deg)
}

/// The multibracket `l_k` on `Omega[2]`, `k` in `1..=3`.
pub fn lambda(k: usize, inputs: &[ShiftedForm], ctx: &KoszulContext) -> Result<ShiftedForm, KoszulError> {
    check_inputs(k, inputs, ctx)?;
    Ok(lambda_unchecked(k, inputs, ctx))
}

/// `l2` through the Koszul bracket: `(-1)^|a| [a, b]_Z`.
pub fn lambda2_via_bracket(a: &ShiftedForm, b: &ShiftedForm, ctx: &KoszulContext) -> Result<ShiftedForm, KoszulError> {
    ctx.check(&a.form)?;
    ctx.check(&b.form)?;
    let form = sign(odd(a.degree), bracket_graded(&a.form, a.degree, &b.form, &ctx.z));
    Ok(ShiftedForm::raw(form, a.degree + b.degree - 1))
}

/// The brackets obtained from the pair `(TM, graph(Z))`:
/// `m1 = d`, `m2(a, b) = -(-1)^|a| [a, b]_Z`, `m3(a, b, c) = (-1)^|b| (a# ^ b# ^ c#)(psi)`
/// with `psi = -1/2 [Z, Z]`.
pub fn mu(k: usize, inputs: &[ShiftedForm], ctx: &KoszulContext) -> Result<ShiftedForm, KoszulError> {
    check_inputs(k, inputs, ctx)?;
    let deg = output_degree(k, inputs);
    let form = match k {
        1 => de_rham(&inputs[0].form),
        2 => {
            let (a, b) = (&inputs[0], &inputs[1]);
            sign(!odd(a.degree), bracket_graded(&a.form, a.degree, &b.form, &ctx.z))
        }
        _ => {
            let minus_half = BigRational::new((-1).into(), 2.into());
            let psi = schouten_unchecked(&ctx.z, &ctx.z).scale_rational(&minus_half);
            let forms: Vec<DifferentialForm> = inputs.iter().map(|x| x.form.clone()).collect();
            sign(odd(inputs[1].degree), multi_sharp_unchecked(&forms, &psi))
        }
    };
    Ok(ShiftedForm::raw(form, deg))
}

/// `d b + 1/2 l2(b, b) + 1/6 l3(b, b, b)` for a 2-form `b`.
pub fn mc_residual(beta: &DifferentialForm, ctx: &KoszulContext) -> Result<DifferentialForm, KoszulError> {
    ctx.check(beta)?;
    if !beta.is_homogeneous_of(2) {
        return Err(KoszulError::WrongDegree { want: 2, got: beta.degree().unwrap_or(0) });
    }
    let parts = mc_residual_parts(beta, ctx);
    Ok(&(&parts[0] + &parts[1]) + &parts[2])
}

/// The three summands `d b`, `1/2 l2(b, b)` and `1/6 l3(b, b, b)` of the residual.
pub fn mc_residual_parts(beta: &DifferentialForm, ctx: &KoszulContext) -> [DifferentialForm; 3] {
    let b = ShiftedForm::raw(beta.clone(), 2);
    let half = BigRational::new(1.into(), 2.into());
    let sixth = BigRational::new(1.into(), 6.into());
    let l2 = lambda_unchecked(2, &[b.clone(), b.clone()], ctx).form.scale_rational(&half);
    let l3 = if ctx.is_poisson() {
        DifferentialForm::zero(ctx.dim())
    } else {
        lambda_unchecked(3, &[b.clone(), b.clone(), b], ctx).form.scale_rational(&sixth)
    };
    [de_rham(beta), l2, l3]
}

fn check_cap(m: &Matrix<Scalar>, cap: u32) -> Result<(), LinearError> {
    for e in m.entries() {
        let d = e.degree();
        if d > cap {
            return Err(LinearError::DegreeCap { degree: d, cap });
        }
    }
    Ok(())
}

/// `det(id + Z# b#)` as a rational function.
pub fn i_z_determinant_symbolic(beta: &DifferentialForm, ctx: &KoszulContext) -> Result<Scalar, KoszulError> {
    let b = SkewBilinear::from_form(beta)?;
    let z = Bivector::from_field(&ctx.z)?;
    Ok(crate::dirac::i_z_determinant(&b, &z)?)
}

/// `F(b)# = b# (id + Z# b#)^-1` over rational functions.
pub fn f_symbolic(beta: &DifferentialForm, ctx: &KoszulContext) -> Result<SkewBilinear<Scalar>, KoszulError> {
    ctx.check(beta)?;
    if !beta.is_homogeneous_of(2) {
        return Err(KoszulError::WrongDegree { want: 2, got: beta.degree().unwrap_or(0) });
    }
    let b = SkewBilinear::from_form(beta)?;
    let z = Bivector::from_field(&ctx.z)?;
    let f = crate::dirac::f_map(&b, &z).map_err(|e| match e {
        LinearError::NotInIZ => KoszulError::GenericallySingular,
        other => other.into(),
    })?;
    check_cap(f.sharp(), ctx.degree_cap)?;
    Ok(f)
}

/// Outcome of comparing `mc_residual(b) = 0` with `d F(b) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McEquivalence {
    pub is_mc: bool,
    pub f_closed: bool,
    pub determinant_constant: bool,
    /// Grid points where the determinant is nonzero, and how many of them
    /// had `residual = 0` agreeing with `dF = 0`.
    pub grid_points: usize,
    pub grid_agreements: usize,
}

impl McEquivalence {
    pub fn holds(&self) -> bool {
        self.is_mc == self.f_closed && self.grid_points == self.grid_agreements
    }
}

/// The default sample grid: all points with coordinates in `{0, 1/2, -1/3}`.
pub fn default_grid(n: usize) -> Vec<Vec<BigRational>> {
    let values = [BigRational::zero(), BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 3.into())];
    let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Compare the MC condition with closedness of `F(b)`.
///
/// Both sides are always decided symbolically. When the determinant is not
/// constant, both are additionally evaluated on `grid`, skipping points
/// where the determinant vanishes.
pub fn mc_equivalence(
    beta: &DifferentialForm,
    ctx: &KoszulContext,
    grid: &[Vec<BigRational>],
) -> Result<McEquivalence, KoszulError> {
    let residual = mc_residual(beta, ctx)?;
    let det = i_z_determinant_symbolic(beta, ctx)?;
    let f = f_symbolic(beta, ctx)?;
    let df = de_rham(&f.to_form());
    let determinant_constant = det.is_constant();
    let (mut grid_points, mut grid_agreements) = (0, 0);
    if !determinant_constant {
        for p in grid {
            match det.eval(p) {
                Some(v) if !v.is_zero() => {}
                _ => continue,
            }
            let (Ok(r), Ok(d)) = (residual.evaluate(p), df.evaluate(p)) else {
                continue;
            };
            grid_points += 1;
            if r.is_zero() == d.is_zero() {
                grid_agreements += 1;
            }
        }
    }
    Ok(McEquivalence {
        is_mc: residual.is_zero(),
        f_closed: df.is_zero(),
        determinant_constant,
        grid_points,
        grid_agreements,
    })
}

/// `(i, j)`-unshuffles of `0..n`: the first `i` positions, as index sets.
fn unshuffles(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for s in start..=n - left {
            cur.push(s);
            rec(s + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, i, &mut Vec::new(), &mut out);
    out
}

/// Koszul sign of moving the entries at `front` (increasing) ahead of the rest.
fn koszul_sign(inputs: &[ShiftedForm], front: &[usize]) -> bool {
    let mut neg = false;
    for &b in front {
        for a in 0..b {
            if !front.contains(&a) && odd(inputs[a].shifted_degree()) && odd(inputs[b].shifted_degree()) {
                neg = !neg;
            }
        }
    }
    neg
}

/// The arity-`n` generalized Jacobi expression
/// `sum_{i+j=n+1} sum_{s in Unsh(i,n-i)} eps(s) l_j(l_i(x_s1..x_si), x_s(i+1)..x_sn)`.
/// It vanishes for every `n` exactly when `(l1, l2, l3)` is an L-infinity[1] algebra.
pub fn jacobiator(inputs: &[ShiftedForm], ctx: &KoszulContext) -> Result<DifferentialForm, KoszulError> {
    let n = inputs.len();
    if !(1..=5).contains(&n) {
        return Err(KoszulError::Arity(n));
    }
    for x in inputs {
        ctx.check(&x.form)?;
    }
    let mut out = DifferentialForm::zero(ctx.dim());
    for i in 1..=3usize {
        let Some(j) = (n + 1).checked_sub(i) else { continue };
        if !(1..=3).contains(&j) {
            continue;
        }
        for front in unshuffles(n, i) {
            let inner_args: Vec<ShiftedForm> = front.iter().map(|&s| inputs[s].clone()).collect();
            let inner = lambda_unchecked(i, &inner_args, ctx);
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = vec![inner];
            outer_args.extend((0..n).filter(|s| !front.contains(s)).map(|s| inputs[s].clone()));
            let term = lambda_unchecked(j, &outer_args, ctx).form;
            out = if koszul_sign(inputs, &front) { &out - &term } else { &out + &term };
        }
    }
    Ok(out)
}

/// Expected sign relating `l_k(.., a, b, ..)` to `l_k(.., b, a, ..)`.
pub fn swap_sign(a: &ShiftedForm, b: &ShiftedForm) -> BigRational {
    if odd(a.shifted_degree()) && odd(b.shifted_degree()) {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn sf(f: DifferentialForm) -> ShiftedForm {
        ShiftedForm::new(f).unwrap()
    }

    #[test]
    fn worked_planar_bracket() {
        let c = Chart::new(2).unwrap();
        let z = MultivectorField::basis(2, &[0, 1]).scale(&s("x1"));
        let ctx = KoszulContext::new(z).unwrap();
        let via_def = koszul_bracket(&c.dx(0), &c.dx(1), &ctx).unwrap();
        let via_one = koszul_bracket_one_forms(&c.dx(0), &c.dx(1), &ctx).unwrap();
        assert_eq!(via_def, c.dx(0));
        assert_eq!(via_one, c.dx(0));
    }

    #[test]
    fn zero_and_constant_bivectors() {
        let n = 3;
        let c = Chart::new(n).unwrap();
        let a = c.dx(0).scale(&s("x2^2"));
        let b = DifferentialForm::basis(n, &[1, 2]).scale(&s("x1"));
        let ctx0 = KoszulContext::new(MultivectorField::zero(n)).unwrap();
        assert!(koszul_bracket(&a, &b, &ctx0).unwrap().is_zero());
        let ctx = KoszulContext::new(MultivectorField::basis(n, &[0, 1])).unwrap();
        assert!(ctx.is_poisson());
        assert!(koszul_bracket(&c.dx(0), &DifferentialForm::basis(n, &[1, 2]), &ctx).unwrap().is_zero());
        assert!(trinary_bracket(&a, &b, &a, &ctx).unwrap().is_zero());
    }

    #[test]
    fn poisson_example_has_no_trinary() {
        let z = &MultivectorField::basis(3, &[0, 1]) + &MultivectorField::basis(3, &[0, 2]).scale(&s("x2"));
        let ctx = KoszulContext::new(z).unwrap();
        assert!(ctx.is_poisson());
    }

    #[test]
    fn inhomogeneous_rejected() {
        let c = Chart::new(2).unwrap();
        let ctx = KoszulContext::new(MultivectorField::basis(2, &[0, 1])).unwrap();
        let mixed = &c.dx(0) + &DifferentialForm::function(2, s("1"));
        assert!(koszul_bracket(&mixed, &c.dx(1), &ctx).is_err());
        assert!(lambda(4, &[], &ctx).is_err());
        assert!(lambda(2, &[sf(c.dx(0))], &ctx).is_err());
        assert!(mc_residual(&c.dx(0), &ctx).is_err());
        assert!(KoszulContext::new(MultivectorField::basis(2, &[0])).is_err());
    }

    #[test]
    fn mc_examples() {
        let n = 4;
        let ctx = KoszulContext::new(MultivectorField::basis(n, &[0, 1])).unwrap();
        assert!(mc_residual(&DifferentialForm::zero(n), &ctx).unwrap().is_zero());
        let b = DifferentialForm::basis(n, &[0, 2]);
        assert!(mc_residual(&b, &ctx).unwrap().is_zero());
        // nilpotent Z#b#: F(b) = b
        assert_eq!(f_symbolic(&b, &ctx).unwrap().to_form(), b);
        let b2 = DifferentialForm::basis(n, &[0, 2]).scale(&s("x4"));
        assert!(!mc_residual(&b2, &ctx).unwrap().is_zero());
        assert!(!de_rham(&f_symbolic(&b2, &ctx).unwrap().to_form()).is_zero());
        let ctx0 = KoszulContext::new(MultivectorField::zero(n)).unwrap();
        assert_eq!(mc_residual(&b2, &ctx0).unwrap(), de_rham(&b2));
    }

    #[test]
    fn f_symbolic_planar_family() {
        let ctx = KoszulContext::new(MultivectorField::basis(2, &[0, 1])).unwrap();
        for t in [-2i64, 0, 3] {
            let b = DifferentialForm::basis(2, &[0, 1]).scale(&Scalar::from_int(t));
            let f = f_symbolic(&b, &ctx).unwrap();
            assert_eq!(f.to_form(), DifferentialForm::basis(2, &[0, 1]).scale(&Scalar::ratio(t, 1 - t)));
        }
        let singular = DifferentialForm::basis(2, &[0, 1]);
        assert_eq!(f_symbolic(&singular, &ctx), Err(KoszulError::GenericallySingular));
        let b = DifferentialForm::basis(2, &[0, 1]).scale(&s("x1"));
        let f = f_symbolic(&b, &ctx).unwrap();
        assert_eq!(f.to_form(), DifferentialForm::basis(2, &[0, 1]).scale(&s("(x1)/(-x1+1)")));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let ctx = KoszulContext::new(MultivectorField::basis(2, &[0, 1])).unwrap().with_degree_cap(2);
        let b = DifferentialForm::basis(2, &[0, 1]).scale(&s("x1^3"));
        assert!(matches!(f_symbolic(&b, &ctx), Err(KoszulError::Linear(LinearError::DegreeCap { .. }))));
    }

    #[test]
    fn lambda_degrees_and_tags() {
        let n = 3;
        let ctx = KoszulContext::new(MultivectorField::basis(n, &[0, 1]).scale(&s("x3"))).unwrap();
        let f = ShiftedForm::with_degree(DifferentialForm::zero(n), 0).unwrap();
        let out = lambda(2, &[f.clone(), f], &ctx).unwrap();
        assert_eq!(out.form_degree(), -1);
        let a = sf(DifferentialForm::basis(n, &[0]).scale(&s("x2")));
        assert_eq!(lambda(1, &[a.clone()], &ctx).unwrap().form_degree(), 2);
        assert_eq!(lambda(3, &[a.clone(), a.clone(), a], &ctx).unwrap().shifted_degree(), -2);
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(5, 2).len(), 10);
        assert_eq!(unshuffles(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(unshuffles(4, 1).len(), 4);
    }

    #[test]
    fn grid_has_three_to_the_n_points() {
        assert_eq!(default_grid(3).len(), 27);
        assert!(default_grid(2).contains(&vec![BigRational::zero(), BigRational::new((-1).into(), 3.into())]));
    }
}
