use crate::error::ExteriorError;
use crate::poly::Poly;
use crate::scalar::Scalar;

use super::{Blade, DifferentialForm, MultivectorField};

/// The de Rham differential.
pub fn de_rham(alpha: &DifferentialForm) -> DifferentialForm {
    let n = alpha.dim();
    let mut out = DifferentialForm::zero(n);
    for (blade, c) in alpha.terms() {
        for i in 0..n {
            if blade.contains(i) {
                continue;
            }
            let dc = c.derivative(i);
            if dc.is_zero() {
                continue;
            }
            let (neg, b) = Blade::single(i).wedge(blade).expect("disjoint");
            out.add_term(b, if neg { dc.neg_ref() } else { dc });
        }
    }
    out
}

/// `i_{e_J}` applied to `e_K`, with `i_{X1 ^ ... ^ Xk} = i_{X1} o ... o i_{Xk}`.
fn contract_blades(vector: Blade, form: Blade) -> Option<(bool, Blade)> {
    if vector.bits() & !form.bits() != 0 {
        return None;
    }
    let mut neg = false;
    let mut rest = form;
    for i in vector.indices().into_iter().rev() {
        let (s, b) = rest.remove(i)?;
        neg ^= s;
        rest = b;
    }
    Some((neg, rest))
}

/// Interior product of a multivector field with a form.
pub fn contract(p: &MultivectorField, alpha: &DifferentialForm) -> Result<DifferentialForm, ExteriorError> {
    p.check_chart(alpha.dim())?;
    Ok(contract_unchecked(p, alpha))
}

pub(crate) fn contract_unchecked(p: &MultivectorField, alpha: &DifferentialForm) -> DifferentialForm {
    let mut out = DifferentialForm::zero(alpha.dim());
    for (bv, cv) in p.terms() {
        for (bf, cf) in alpha.terms() {
            if let Some((neg, b)) = contract_blades(bv, bf) {
                let c = cv.mul_ref(cf);
                out.add_term(b, if neg { c.neg_ref() } else { c });
            }
        }
    }
    out
}

/// `i_{d_j} alpha`.
pub(crate) fn contract_basis_vector(j: usize, alpha: &DifferentialForm) -> DifferentialForm {
    let mut out = DifferentialForm::zero(alpha.dim());
    for (b, c) in alpha.terms() {
        if let Some((neg, rest)) = b.remove(j) {
            out.add_term(rest, if neg { c.neg_ref() } else { c.clone() });
        }
    }
    out
}

/// `L_P = i_P o d - d o i_P`, for multivector fields of any degree.
pub fn lie_derivative(p: &MultivectorField, alpha: &DifferentialForm) -> Result<DifferentialForm, ExteriorError> {
    p.check_chart(alpha.dim())?;
    Ok(lie_derivative_unchecked(p, alpha))
}

pub(crate) fn lie_derivative_unchecked(p: &MultivectorField, alpha: &DifferentialForm) -> DifferentialForm {
    let a = contract_unchecked(p, &de_rham(alpha));
    let b = de_rham(&contract_unchecked(p, alpha));
    &a - &b
}

/// The classical Lie derivative along a vector field, `i_X d + d i_X`.
pub fn lie_derivative_vector(x: &MultivectorField, alpha: &DifferentialForm) -> Result<DifferentialForm, ExteriorError> {
    x.check_chart(alpha.dim())?;
    if !x.is_homogeneous_of(1) {
        return Err(ExteriorError::Inhomogeneous);
    }
    let a = contract_unchecked(x, &de_rham(alpha));
    let b = de_rham(&contract_unchecked(x, alpha));
    Ok(&a + &b)
}

/// Right derivative of a multivector by `theta_i = d/dx_i` treated as odd:
/// `theta_J = (+-) theta_{J-i} ^ theta_i`, and the derivative returns `(+-) theta_{J-i}`.
fn odd_right_derivative(p: &MultivectorField, i: usize) -> MultivectorField {
    let mut out = MultivectorField::zero(p.dim());
    for (b, c) in p.terms() {
        if let Some((left_neg, rest)) = b.remove(i) {
            // remove() counts the moves to the front; to the back it is the complement
            let neg = left_neg ^ (rest.degree() % 2 == 1);
            out.add_term(rest, if neg { c.neg_ref() } else { c.clone() });
        }
    }
    out
}

fn schouten_homogeneous(p: &MultivectorField, pd: usize, q: &MultivectorField, qd: usize) -> MultivectorField {
    let n = p.dim();
    let negate_second = ((pd as i64 - 1) * (qd as i64 - 1)).rem_euclid(2) == 0;
    let mut out = MultivectorField::zero(n);
    for i in 0..n {
        let first = odd_right_derivative(p, i).wedge_unchecked(&q.partial_derivative(i));
        let second = odd_right_derivative(q, i).wedge_unchecked(&p.partial_derivative(i));
        out = &out + &first;
        out = if negate_second { &out - &second } else { &out + &second };
    }
    out
}

/// Schouten-Nijenhuis bracket in coordinates:
/// `[P,Q] = sum_i P<d_i ^ d_i Q - (-1)^{(p-1)(q-1)} Q<d_i ^ d_i P`, with `<d_i` the
/// right derivative by `theta_i`. Equivalently `i_{[P,Q]} = [[i_P, d], i_Q]`
/// with graded commutators and `i_{X1 ^ .. ^ Xk} = i_{X1} o .. o i_{Xk}`.
///
/// On vector fields this is the commutator; it satisfies
/// `[P,Q] = -(-1)^{(p-1)(q-1)} [Q,P]`.
pub fn schouten(p: &MultivectorField, q: &MultivectorField) -> Result<MultivectorField, ExteriorError> {
    p.check_chart(q.dim())?;
    Ok(schouten_unchecked(p, q))
}

pub(crate) fn schouten_unchecked(p: &MultivectorField, q: &MultivectorField) -> MultivectorField {
    let mut out = MultivectorField::zero(p.dim());
    for pd in p.degrees() {
        let ph = p.homogeneous_part(pd);
        for qd in q.degrees() {
            let qh = q.homogeneous_part(qd);
            out = &out + &schouten_homogeneous(&ph, pd, &qh, qd);
        }
    }
    out
}

/// Vector-field commutator `[X, Y]`.
pub fn commutator(x: &MultivectorField, y: &MultivectorField) -> Result<MultivectorField, ExteriorError> {
    schouten(x, y)
}

fn permutations_with_sign(m: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let m = used.len();
        if prefix.len() == m {
            let mut inversions = 0;
            for a in 0..m {
                for b in a + 1..m {
                    if prefix[a] > prefix[b] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), inversions % 2 == 1));
            return;
        }
        for i in 0..m {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// `(a1# ^ ... ^ am#)(W)`: on `v1 ^ ... ^ vm` this is
/// `sum_{s in S_m} sgn(s) i_{v_s(1)} a1 ^ ... ^ i_{v_s(m)} am`, extended
/// linearly over the coefficients of `W`.
pub fn multi_sharp(forms: &[DifferentialForm], w: &MultivectorField) -> Result<DifferentialForm, ExteriorError> {
    let n = w.dim();
    for f in forms {
        f.check_chart(n)?;
    }
    if !w.is_homogeneous_of(forms.len()) {
        return Err(ExteriorError::ArityMismatch { forms: forms.len(), degree: w.degree().unwrap_or(0) });
    }
    Ok(multi_sharp_unchecked(forms, w))
}

pub(crate) fn multi_sharp_unchecked(forms: &[DifferentialForm], w: &MultivectorField) -> DifferentialForm {
    let n = w.dim();
    let m = forms.len();
    let perms = permutations_with_sign(m);
    // contractions i_{d_j} a_k, cached per (j, k)
    let mut cache: Vec<Vec<Option<DifferentialForm>>> = vec![vec![None; m]; n];
    let mut out = DifferentialForm::zero(n);
    for (blade, coeff) in w.terms() {
        let idx = blade.indices();
        for (perm, neg) in &perms {
            let mut acc = DifferentialForm::function(n, Scalar::one());
            for (k, &s) in perm.iter().enumerate() {
                let j = idx[s];
                let piece = cache[j][k].get_or_insert_with(|| contract_basis_vector(j, &forms[k]));
                acc = acc.wedge_unchecked(piece);
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let term = acc.scale(coeff);
            out = if *neg { &out - &term } else { &out + &term };
        }
    }
    out
}

/// Full pairing `<P, a> = sum_J P_J a_J`, so `<d1 ^ d2, dx1 ^ dx2> = 1`.
pub fn pairing(p: &MultivectorField, alpha: &DifferentialForm) -> Result<Scalar, ExteriorError> {
    p.check_chart(alpha.dim())?;
    let mut acc = Scalar::zero();
    for (b, c) in p.terms() {
        let a = alpha.coeff(b);
        if !a.is_zero() {
            acc = acc.add_ref(&c.mul_ref(&a));
        }
    }
    Ok(acc)
}

/// `Z#(a) = Z(a, .)` for a 1-form `a`, extended to any multivector as the
/// left interior product by a 1-form.
pub fn sharp(z: &MultivectorField, alpha: &DifferentialForm) -> Result<MultivectorField, ExteriorError> {
    z.check_chart(alpha.dim())?;
    if !alpha.is_homogeneous_of(1) {
        return Err(ExteriorError::Inhomogeneous);
    }
    Ok(sharp_unchecked(z, alpha))
}

pub(crate) fn sharp_unchecked(z: &MultivectorField, alpha: &DifferentialForm) -> MultivectorField {
    let mut out = MultivectorField::zero(z.dim());
    for (bf, a) in alpha.terms() {
        let j = bf.indices()[0];
        for (bz, c) in z.terms() {
            if let Some((neg, rest)) = bz.remove(j) {
                let v = a.mul_ref(c);
                out.add_term(rest, if neg { v.neg_ref() } else { v });
            }
        }
    }
    out
}

/// Pullback along the polynomial map `x -> (phi_1(x), ..., phi_n(x))`.
pub fn pullback(alpha: &DifferentialForm, map: &[Poly]) -> Result<DifferentialForm, ExteriorError> {
    let n = alpha.dim();
    if map.len() != n {
        return Err(ExteriorError::PointDimension { got: map.len(), want: n });
    }
    let differentials: Vec<DifferentialForm> = map
        .iter()
        .map(|phi| de_rham(&DifferentialForm::function(n, Scalar::from_poly(phi.clone()))))
        .collect();
    let mut out = DifferentialForm::zero(n);
    for (blade, c) in alpha.terms() {
        let coeff = c.compose(map).ok_or(ExteriorError::PoleAtPoint)?;
        let mut acc = DifferentialForm::function(n, coeff);
        for j in blade.indices() {
            acc = acc.wedge_unchecked(&differentials[j]);
        }
        out = &out + &acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn wedge_basics() {
        let c = Chart::new(3).unwrap();
        let w = c.dx(0).wedge(&c.dx(1)).unwrap();
        assert_eq!(w, DifferentialForm::basis(3, &[0, 1]));
        assert!(c.dx(0).wedge(&c.dx(0)).unwrap().is_zero());
        let a = c.dx(0).scale(&s("x1"));
        let b = DifferentialForm::basis(3, &[1, 2]);
        assert_eq!(a.wedge(&b).unwrap(), DifferentialForm::basis(3, &[0, 1, 2]).scale(&s("x1")));
        assert!(c.dx(0).wedge(&DifferentialForm::basis(2, &[0])).is_err());
    }

    #[test]
    fn de_rham_examples() {
        let c = Chart::new(2).unwrap();
        assert_eq!(de_rham(&c.dx(1).scale(&s("x1"))), DifferentialForm::basis(2, &[0, 1]));
        assert!(de_rham(&DifferentialForm::basis(2, &[0, 1])).is_zero());
        // quotient-rule oracle: (num' den - num den') / den^2 with num = 1, den = 1 + x1^2
        let f = c.dx(1).scale(&s("(1)/(1+x1^2)"));
        let den = s("1+x1^2");
        let expected = &(&Scalar::zero() - &s("2*x1")) / &(&den * &den);
        assert_eq!(de_rham(&f), DifferentialForm::basis(2, &[0, 1]).scale(&expected));
    }

    #[test]
    fn contraction_examples() {
        let c = Chart::new(3).unwrap();
        let w12 = DifferentialForm::basis(3, &[0, 1]);
        assert_eq!(contract(&c.partial(0), &w12).unwrap(), c.dx(1));
        // nested: i_{x1 d1}(i_{d2}(dx1 ^ dx2)) = i_{x1 d1}(-dx1) = -x1
        let p = MultivectorField::basis(3, &[0, 1]).scale(&s("x1"));
        assert_eq!(contract(&p, &w12).unwrap(), DifferentialForm::function(3, s("-x1")));
        assert!(contract(&MultivectorField::basis(3, &[0, 1]), &c.dx(2)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let c2 = Chart::new(2).unwrap();
        let p = MultivectorField::basis(2, &[0, 1]).scale(&s("x1"));
        let w12 = DifferentialForm::basis(2, &[0, 1]);
        // i_P d(w) = 0, d i_P w = d(-x1) = -dx1
        assert_eq!(lie_derivative(&p, &w12).unwrap(), c2.dx(0));
        assert_eq!(lie_derivative(&c2.partial(0), &c2.dx(1).scale(&s("x1"))).unwrap(), c2.dx(1));
        let zc = MultivectorField::basis(2, &[0, 1]).scale(&s("3"));
        assert!(lie_derivative(&zc, &w12).unwrap().is_zero());
        assert_eq!(lie_derivative_vector(&c2.partial(0), &c2.dx(1).scale(&s("x1"))).unwrap(), c2.dx(1));
    }

    #[test]
    fn schouten_examples() {
        // constant coefficients
        let z = &MultivectorField::basis(4, &[0, 1]) + &MultivectorField::basis(4, &[2, 3]);
        assert!(schouten(&z, &z).unwrap().is_zero());
        // d1 ^ (d2 + x2 d3) is Poisson
        let x = MultivectorField::basis(3, &[0]);
        let y = &MultivectorField::basis(3, &[1]) + &MultivectorField::basis(3, &[2]).scale(&s("x2"));
        let z = x.wedge(&y).unwrap();
        assert!(schouten(&z, &z).unwrap().is_zero());
        // vector fields: [d1, x1 d2] = d2
        let c = Chart::new(2).unwrap();
        let xf = c.partial(1).scale(&s("x1"));
        assert_eq!(commutator(&c.partial(0), &xf).unwrap(), c.partial(1));
    }

    #[test]
    fn multi_sharp_examples() {
        let c = Chart::new(2).unwrap();
        let w = MultivectorField::basis(2, &[0, 1]);
        let r = multi_sharp(&[c.dx(0), c.dx(1)], &w).unwrap();
        assert_eq!(r, DifferentialForm::function(2, Scalar::one()));
        let r = multi_sharp(&[DifferentialForm::function(2, Scalar::one()), c.dx(1)], &w).unwrap();
        assert!(r.is_zero());
        assert!(multi_sharp(&[c.dx(0)], &w).is_err());
        let zero = MultivectorField::zero(2);
        assert!(multi_sharp(&[c.dx(0), c.dx(1), c.dx(0)], &zero).unwrap().is_zero());
    }

    #[test]
    fn pairing_and_sharp_normalization() {
        let c = Chart::new(2).unwrap();
        let z = MultivectorField::basis(2, &[0, 1]);
        assert_eq!(pairing(&z, &DifferentialForm::basis(2, &[0, 1])).unwrap(), Scalar::one());
        assert_eq!(sharp(&z, &c.dx(0)).unwrap(), c.partial(1));
        assert_eq!(sharp(&z, &c.dx(1)).unwrap(), -&c.partial(0));
    }

    #[test]
    fn evaluate_examples() {
        use num_rational::BigRational;
        let q = |n: i64| BigRational::from_integer(n.into());
        let a = Chart::new(2).unwrap().dx(1).scale(&s("x1"));
        assert_eq!(a.evaluate(&[q(3), q(0)]).unwrap(), DifferentialForm::basis(2, &[1]).scale(&s("3")));
        let b = Chart::new(2).unwrap().dx(1).scale(&s("(1)/(1-x1)"));
        assert_eq!(b.evaluate(&[q(1), q(0)]), Err(ExteriorError::PoleAtPoint));
    }

    #[test]
    fn pullback_of_normal_form_under_shear() {
        // x2 -> x2 + x3^2 pulls dx1^dx2 back to dx1^dx2 + 2 x3 dx1^dx3
        let eta = DifferentialForm::basis(3, &[0, 1]);
        let map = vec![Poly::var(0), "x2+x3^2".parse().unwrap(), Poly::var(2)];
        let pulled = pullback(&eta, &map).unwrap();
        let expected = &eta + &DifferentialForm::basis(3, &[0, 2]).scale(&s("2*x3"));
        assert_eq!(pulled, expected);
    }
}
