//! Pre-symplectic forms on coordinate charts and their deformations.
//!
//! A closed 2-form `eta` of constant rank `k` has kernel distribution `K`.
//! A complement `G` determines the bivector `Z` with `Z# = -(eta|_G#)^-1`,
//! and horizontal 2-forms `beta` in `I_Z` map to `exp_eta(beta) = eta + F(beta)`.

use num_rational::BigRational;
use rand::Rng;

use crate::dirac::{self, Bivector, SkewBilinear};
use crate::error::{KoszulError, PresymplecticError};
use crate::exterior::{
    commutator, contract, de_rham, lie_derivative_vector, pullback, Blade, DifferentialForm, MultivectorField,
};
use crate::field::Field;
use crate::harness::gen::{self, GenParams};
use crate::koszul::{self, KoszulContext, McEquivalence, ShiftedForm};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;

type Q = BigRational;

fn q0() -> Q {
    Q::from_integer(0.into())
}

fn column(v: &MultivectorField) -> Vec<Scalar> {
    (0..v.dim()).map(|i| v.coeff_of(&[i])).collect()
}

fn vector_field(col: &[Scalar]) -> MultivectorField {
    let n = col.len();
    let mut out = MultivectorField::zero(n);
    for (i, c) in col.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &MultivectorField::monomial(n, Blade::single(i), c.clone());
        }
    }
    out
}

fn one_form(row: &[Scalar]) -> DifferentialForm {
    let n = row.len();
    let mut out = DifferentialForm::zero(n);
    for (i, c) in row.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &DifferentialForm::monomial(n, Blade::single(i), c.clone());
        }
    }
    out
}

fn one_form_row(a: &DifferentialForm) -> Vec<Scalar> {
    (0..a.dim()).map(|i| a.coeff_of(&[i])).collect()
}

/// Whether `p` has no zero on `R^n`: a nonzero constant, or (relaxed) a
/// positive constant plus positive even-power monomials, up to sign.
fn nowhere_vanishing(p: &Poly, relaxed: bool) -> bool {
    if p.is_constant() {
        return !p.is_zero();
    }
    relaxed && (p.is_positive_sum_of_even_powers() || p.neg().is_positive_sum_of_even_powers())
}

fn scalar_nowhere_vanishing(s: &Scalar, relaxed: bool) -> bool {
    nowhere_vanishing(s.numer(), relaxed) && nowhere_vanishing(s.denom(), relaxed)
}

fn scalar_pole_free(s: &Scalar, relaxed: bool) -> bool {
    nowhere_vanishing(s.denom(), relaxed)
}

/// A section `(X, a)` of `TM + T*M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSection {
    pub x: MultivectorField,
    pub alpha: DifferentialForm,
}

impl GeneralizedSection {
    pub fn new(x: MultivectorField, alpha: DifferentialForm) -> Result<Self, PresymplecticError> {
        x.check_chart(alpha.dim())?;
        if !x.is_homogeneous_of(1) || !alpha.is_homogeneous_of(1) {
            return Err(KoszulError::WrongDegree { want: 1, got: 0 }.into());
        }
        Ok(GeneralizedSection { x, alpha })
    }

    pub fn vector(x: MultivectorField) -> Self {
        let n = x.dim();
        GeneralizedSection { x, alpha: DifferentialForm::zero(n) }
    }

    pub fn covector(alpha: DifferentialForm) -> Self {
        let n = alpha.dim();
        GeneralizedSection { x: MultivectorField::zero(n), alpha }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// Coefficient column of length `2n`: vector part, then form part.
    fn column(&self) -> Vec<Scalar> {
        let mut c = column(&self.x);
        c.extend(one_form_row(&self.alpha));
        c
    }
}

/// `<(X, a), (Y, b)> = a(Y) + b(X)`.
pub fn section_pairing(s1: &GeneralizedSection, s2: &GeneralizedSection) -> Result<Scalar, PresymplecticError> {
    s1.x.check_chart(s2.dim())?;
    let a = contract(&s2.x, &s1.alpha)?;
    let b = contract(&s1.x, &s2.alpha)?;
    Ok(a.coeff(Blade::EMPTY).add_ref(&b.coeff(Blade::EMPTY)))
}

/// `[[ (X, a), (Y, b) ]] = ([X, Y], L_X b - i_Y d a)`.
pub fn dorfman(s1: &GeneralizedSection, s2: &GeneralizedSection) -> Result<GeneralizedSection, PresymplecticError> {
    s1.x.check_chart(s2.dim())?;
    let x = commutator(&s1.x, &s2.x)?;
    let lie = lie_derivative_vector(&s1.x, &s2.alpha)?;
    let alpha = &lie - &contract(&s2.x, &de_rham(&s1.alpha))?;
    Ok(GeneralizedSection { x, alpha })
}

/// A frame of vector fields spanning a distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionFrame {
    dim: usize,
    sections: Vec<MultivectorField>,
}

impl DistributionFrame {
    /// Accepts the frame if its sections are independent at `point`.
    pub fn new(dim: usize, sections: Vec<MultivectorField>, point: &[Q]) -> Result<Self, PresymplecticError> {
        for s in &sections {
            s.check_chart(dim)?;
            if !s.is_homogeneous_of(1) {
                return Err(PresymplecticError::BadComplement("frame sections must be vector fields".into()));
            }
        }
        let frame = DistributionFrame { dim, sections };
        let at = frame.evaluate(point)?;
        let got = at.rank();
        if got != frame.rank() {
            return Err(PresymplecticError::NotASubbundle { want: frame.rank(), got });
        }
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.sections.len()
    }

    pub fn sections(&self) -> &[MultivectorField] {
        &self.sections
    }

    /// The `n x r` coefficient matrix.
    pub fn matrix(&self) -> Matrix<Scalar> {
        if self.sections.is_empty() {
            return Matrix::zeros(self.dim, 0);
        }
        Matrix::from_columns(&self.sections.iter().map(column).collect::<Vec<_>>())
    }

    pub fn evaluate(&self, point: &[Q]) -> Result<Matrix<Q>, PresymplecticError> {
        let m = self.matrix();
        Ok(m.try_map(|s| s.eval(point).ok_or(crate::error::ExteriorError::PoleAtPoint))?)
    }

    /// Whether `v` lies in the span of the frame over rational functions.
    pub fn contains(&self, v: &MultivectorField) -> bool {
        let m = self.matrix().hcat(&Matrix::from_columns(&[column(v)]));
        m.rank() == self.rank()
    }

    pub fn is_involutive(&self) -> bool {
        self.involutivity_witness().is_none()
    }

    /// A pair of frame indices whose commutator leaves the span.
    pub fn involutivity_witness(&self) -> Option<(usize, usize)> {
        for a in 0..self.rank() {
            for b in a + 1..self.rank() {
                let c = commutator(&self.sections[a], &self.sections[b]).expect("same chart");
                if !self.contains(&c) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// A frame of the annihilator, as 1-forms.
    pub fn annihilator(&self) -> Vec<DifferentialForm> {
        if self.rank() == 0 {
            return (0..self.dim).map(|i| DifferentialForm::basis(self.dim, &[i])).collect();
        }
        self.matrix().transpose().nullspace().iter().map(|row| one_form(row)).collect()
    }
}

/// Rule used to accept a witness Pfaffian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CertificationRule {
    /// The witness must be a nonzero constant.
    #[default]
    Strict,
    /// Also accept `c + sum of positive even-power monomials` (up to sign).
    Relaxed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub rank: usize,
    /// 0-based indices of the principal submatrix whose Pfaffian is the witness.
    pub witness: Vec<usize>,
    pub pfaffian: Scalar,
}

/// Component matrix `C[i][j] = eta(d_i, d_j)`.
fn components(eta: &DifferentialForm) -> Matrix<Scalar> {
    let n = eta.dim();
    let mut m = Matrix::zeros(n, n);
    for (b, c) in eta.terms() {
        let idx = b.indices();
        m[(idx[0], idx[1])] = c.clone();
        m[(idx[1], idx[0])] = c.neg_ref();
    }
    m
}

/// Pfaffian of the principal submatrix on `idx` (even length).
pub fn pfaffian<F: Field>(m: &Matrix<F>, idx: &[usize]) -> F {
    if idx.is_empty() {
        return F::one();
    }
    let first = idx[0];
    let mut acc = F::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let a = &m[(first, j)];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != j).collect();
        let term = a.mul(&pfaffian(m, &rest));
        acc = if pos % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << n) {
        if bits.count_ones() as usize == k {
            out.push((0..n).filter(|i| bits >> i & 1 == 1).collect());
        }
    }
    out
}

/// Certify that `eta` has constant rank on the whole chart.
///
/// The rank `k` is the largest size of a principal sub-Pfaffian that is not
/// identically zero (so all `(k+2)`-Pfaffians vanish); some `k`-Pfaffian must
/// be nowhere zero under `rule`.
pub fn certify_constant_rank(eta: &DifferentialForm, rule: CertificationRule) -> Result<RankCertificate, PresymplecticError> {
    if !eta.is_homogeneous_of(2) {
        return Err(KoszulError::WrongDegree { want: 2, got: eta.degree().unwrap_or(0) }.into());
    }
    let n = eta.dim();
    let c = components(eta);
    let mut k = n - n % 2;
    loop {
        let pfs: Vec<(Vec<usize>, Scalar)> = subsets(n, k).into_iter().map(|s| {
            let p = pfaffian(&c, &s);
            (s, p)
        }).collect();
        if k == 0 || pfs.iter().any(|(_, p)| !p.is_zero()) {
            let relaxed = rule == CertificationRule::Relaxed;
            // prefer constant witnesses even under the relaxed rule
            let best = pfs
                .iter()
                .find(|(_, p)| p.is_constant() && !p.is_zero())
                .or_else(|| pfs.iter().find(|(_, p)| !p.is_zero() && scalar_nowhere_vanishing(p, relaxed)));
            return match best {
                Some((s, p)) => Ok(RankCertificate { rank: k, witness: s.clone(), pfaffian: p.clone() }),
                None => Err(PresymplecticError::CannotCertify(format!(
                    "no nowhere-vanishing {k}x{k} Pfaffian (rank may drop)"
                ))),
            };
        }
        k -= 2;
    }
}

/// Kernel frame of `eta`: one section `d_j - sum_{i in I} c_i d_i` per index
/// `j` outside the witness set `I`.
pub fn kernel_distribution(
    eta: &DifferentialForm,
    cert: &RankCertificate,
    point: &[Q],
) -> Result<DistributionFrame, PresymplecticError> {
    let n = eta.dim();
    let c = components(eta);
    let w = &cert.witness;
    let sub = c.submatrix(w, w);
    let inv = sub.inverse().ok_or_else(|| PresymplecticError::CannotCertify("witness block is singular".into()))?;
    let mut sections = Vec::new();
    for j in (0..n).filter(|j| !w.contains(j)) {
        let rhs = Matrix::from_fn(w.len(), 1, |a, _| c[(w[a], j)].clone());
        let sol = inv.mul(&rhs);
        let mut col = vec![Scalar::zero(); n];
        col[j] = Scalar::one();
        for (a, &i) in w.iter().enumerate() {
            col[i] = sol[(a, 0)].neg_ref();
        }
        if !col.iter().all(|s| scalar_pole_free(s, true)) {
            return Err(PresymplecticError::SingularFrame);
        }
        sections.push(vector_field(&col));
    }
    for v in &sections {
        if !contract(v, eta)?.is_zero() {
            return Err(PresymplecticError::CannotCertify("kernel frame does not annihilate the form".into()));
        }
    }
    DistributionFrame::new(n, sections, point)
}

/// Whether every full contraction of `alpha` with frame sections vanishes.
pub fn is_horizontal(alpha: &DifferentialForm, k: &DistributionFrame) -> bool {
    horizontality_witness(alpha, k).is_none()
}

/// The first tuple of frame indices whose contraction with `alpha` is nonzero.
pub fn horizontality_witness(alpha: &DifferentialForm, k: &DistributionFrame) -> Option<Vec<usize>> {
    let n = alpha.dim();
    for d in alpha.degrees() {
        if d > k.rank() {
            continue;
        }
        let part = alpha.homogeneous_part(d);
        for s in subsets(k.rank(), d) {
            let mut w = MultivectorField::function(n, Scalar::one());
            for &i in &s {
                w = w.wedge(&k.sections[i]).expect("same chart");
            }
            if !contract(&w, &part).expect("same chart").is_zero() {
                return Some(s);
            }
        }
    }
    None
}

/// Dirac test for the span of `frame` in `TM + T*M`.
pub fn is_dirac(frame: &[GeneralizedSection], point: &[Q]) -> Result<bool, PresymplecticError> {
    let n = frame.first().map(|s| s.dim()).unwrap_or(0);
    if frame.len() != n || n == 0 {
        return Err(PresymplecticError::NotASubbundle { want: n, got: frame.len() });
    }
    let cols: Vec<Vec<Scalar>> = frame.iter().map(|s| s.column()).collect();
    let m = Matrix::from_columns(&cols);
    let at = m.try_map(|s| s.eval(point).ok_or(crate::error::ExteriorError::PoleAtPoint))?;
    let got = at.rank();
    if got != n {
        return Err(PresymplecticError::NotASubbundle { want: n, got });
    }
    for i in 0..n {
        for j in i..n {
            if !section_pairing(&frame[i], &frame[j])?.is_zero() {
                return Ok(false);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let b = dorfman(&frame[i], &frame[j])?;
            let ext = m.hcat(&Matrix::from_columns(&[b.column()]));
            if ext.rank() != n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Frame `(d_i, i_{d_i} eta)` of `graph(eta)`.
pub fn graph_frame_form(eta: &DifferentialForm) -> Vec<GeneralizedSection> {
    let n = eta.dim();
    (0..n)
        .map(|i| {
            let v = MultivectorField::basis(n, &[i]);
            let a = contract(&v, eta).expect("same chart");
            GeneralizedSection { x: v, alpha: a }
        })
        .collect()
}

/// Frame `(Z# dx_i, dx_i)` of `graph(Z)`.
pub fn graph_frame_bivector(z: &MultivectorField) -> Vec<GeneralizedSection> {
    let n = z.dim();
    (0..n)
        .map(|i| {
            let a = DifferentialForm::basis(n, &[i]);
            GeneralizedSection { x: crate::exterior::sharp(z, &a).expect("1-form"), alpha: a }
        })
        .collect()
}

/// Frame `(d_i + Z#(i_{d_i} b), i_{d_i} b)` of `Phi_Z(b)`.
pub fn phi_z_frame(beta: &DifferentialForm, z: &MultivectorField) -> Vec<GeneralizedSection> {
    let n = beta.dim();
    (0..n)
        .map(|i| {
            let v = MultivectorField::basis(n, &[i]);
            let a = contract(&v, beta).expect("same chart");
            let x = &v + &crate::exterior::sharp(z, &a).expect("1-form");
            GeneralizedSection { x, alpha: a }
        })
        .collect()
}

/// The two conditions under which the brackets preserve horizontal forms:
/// involutivity of `K`, and `<[[x1, x2]], K + K°> = 0` for `x_i` in `K°`
/// embedded in `graph(Z)` as `(Z# x, x)`.
pub fn horizontal_preservation_conditions(k: &DistributionFrame, ctx: &KoszulContext) -> (bool, bool) {
    let involutive = k.is_involutive();
    let z = ctx.z();
    let ann = k.annihilator();
    let embedded: Vec<GeneralizedSection> = ann
        .iter()
        .map(|xi| GeneralizedSection { x: crate::exterior::sharp(z, xi).expect("1-form"), alpha: xi.clone() })
        .collect();
    let mut tests: Vec<GeneralizedSection> = k.sections().iter().cloned().map(GeneralizedSection::vector).collect();
    tests.extend(embedded.iter().cloned());
    let mut pairing_ok = true;
    'outer: for a in 0..embedded.len() {
        for b in 0..embedded.len() {
            let br = dorfman(&embedded[a], &embedded[b]).expect("same chart");
            for w in &tests {
                if !section_pairing(&br, w).expect("same chart").is_zero() {
                    pairing_ok = false;
                    break 'outer;
                }
            }
        }
    }
    (involutive, pairing_ok)
}

/// Random horizontal form of degree `d`: `sum_a theta_a ^ w_a` over the annihilator frame.
pub fn random_horizontal_form(
    rng: &mut impl Rng,
    annihilator: &[DifferentialForm],
    n: usize,
    degree: usize,
    p: &GenParams,
) -> DifferentialForm {
    let mut out = DifferentialForm::zero(n);
    if degree == 0 {
        return out;
    }
    for theta in annihilator {
        if rng.gen_range(0..100) >= p.density.max(30) {
            continue;
        }
        let w = gen::form(rng, n, degree - 1, p);
        out = &out + &theta.wedge(&w).expect("same chart");
    }
    out
}

/// Validated pre-symplectic data on `R^n`.
#[derive(Clone, Debug)]
pub struct PreSymplecticData {
    eta: DifferentialForm,
    certificate: RankCertificate,
    kernel: DistributionFrame,
    complement: DistributionFrame,
    z: MultivectorField,
    ref_point: Vec<Q>,
}

/// Options for building [`PreSymplecticData`].
#[derive(Clone, Debug, Default)]
pub struct DataOptions {
    pub complement: Option<Vec<MultivectorField>>,
    pub ref_point: Option<Vec<Q>>,
    pub rule: CertificationRule,
    pub degree_cap: Option<u32>,
}

impl PreSymplecticData {
    pub fn new(eta: DifferentialForm, opts: DataOptions) -> Result<Self, PresymplecticError> {
        let n = eta.dim();
        let point = opts.ref_point.clone().unwrap_or_else(|| vec![q0(); n]);
        if point.len() != n {
            return Err(crate::error::ExteriorError::PointDimension { got: point.len(), want: n }.into());
        }
        if !de_rham(&eta).is_zero() {
            return Err(PresymplecticError::NotClosed);
        }
        let certificate = certify_constant_rank(&eta, opts.rule)?;
        let kernel = kernel_distribution(&eta, &certificate, &point)?;
        let k = certificate.rank;
        let complement = match opts.complement {
            Some(sections) => {
                if sections.len() != k {
                    return Err(PresymplecticError::BadComplement(format!("expected {k} sections, got {}", sections.len())));
                }
                DistributionFrame::new(n, sections, &point)?
            }
            None => default_complement(&kernel, &point)?,
        };
        let both = complement.matrix().hcat(&kernel.matrix());
        if !scalar_nowhere_vanishing(&both.det(), opts.rule == CertificationRule::Relaxed) {
            return Err(PresymplecticError::BadComplement("G + K is not a direct sum on the whole chart".into()));
        }
        let eta_sharp = SkewBilinear::from_form(&eta)?;
        let z_sharp = dirac::z_from_frame(&eta_sharp, &complement.matrix())?;
        let cap = opts.degree_cap.unwrap_or(koszul::DEFAULT_DEGREE_CAP);
        for e in z_sharp.sharp().entries() {
            if e.degree() > cap {
                return Err(crate::error::LinearError::DegreeCap { degree: e.degree(), cap }.into());
            }
            if !scalar_pole_free(e, true) {
                return Err(PresymplecticError::BadComplement("bivector has a pole on the chart".into()));
            }
        }
        let z = z_sharp.to_field();
        Ok(PreSymplecticData { eta, certificate, kernel, complement, z, ref_point: point })
    }

    pub fn eta(&self) -> &DifferentialForm {
        &self.eta
    }

    pub fn rank(&self) -> usize {
        self.certificate.rank
    }

    pub fn certificate(&self) -> &RankCertificate {
        &self.certificate
    }

    pub fn kernel(&self) -> &DistributionFrame {
        &self.kernel
    }

    pub fn complement(&self) -> &DistributionFrame {
        &self.complement
    }

    pub fn z(&self) -> &MultivectorField {
        &self.z
    }

    pub fn ref_point(&self) -> &[Q] {
        &self.ref_point
    }

    pub fn context(&self) -> KoszulContext {
        KoszulContext::new(self.z.clone()).expect("bivector")
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    /// Checks `Z# eta# g = -g` on the complement frame and `Z# = 0` on `G°`.
    pub fn z_is_inverse_on_complement(&self) -> bool {
        let eta = SkewBilinear::from_form(&self.eta).expect("2-form");
        let z = Bivector::from_field(&self.z).expect("bivector");
        let g = self.complement.matrix();
        let lhs = z.sharp().mul(eta.sharp()).mul(&g);
        if lhs != g.neg() {
            return false;
        }
        self.complement
            .annihilator()
            .iter()
            .all(|xi| z.sharp().mul_vec(&one_form_row(xi)).iter().all(|s| s.is_zero()))
    }
}

fn default_complement(kernel: &DistributionFrame, point: &[Q]) -> Result<DistributionFrame, PresymplecticError> {
    let n = kernel.dim();
    let at = kernel.evaluate(point)?;
    let vecs = if kernel.rank() == 0 { Matrix::<Q>::identity(n).columns() } else { at.transpose().nullspace() };
    let sections = vecs
        .iter()
        .map(|v| vector_field(&v.iter().map(|q| Scalar::constant(q.clone())).collect::<Vec<_>>()))
        .collect();
    DistributionFrame::new(n, sections, point)
}

/// Outcome of testing horizontality preservation on sampled inputs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PreservationReport {
    pub checks: usize,
    /// `(bracket arity, inputs, output)` for each non-horizontal output.
    pub failures: Vec<(usize, Vec<DifferentialForm>, DifferentialForm)>,
    /// Whether some sampled `l3` output was nonzero.
    pub nonzero_l3: bool,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_brackets(
    inputs: &[ShiftedForm],
    kernel: &DistributionFrame,
    ctx: &KoszulContext,
    report: &mut PreservationReport,
    stop_at_first: bool,
) {
    for k in 1..=3usize {
        if inputs.len() < k {
            continue;
        }
        let args = &inputs[..k];
        let out = koszul::lambda(k, args, ctx).expect("valid arity");
        report.checks += 1;
        if k == 3 && !out.is_zero() {
            report.nonzero_l3 = true;
        }
        if !is_horizontal(out.form(), kernel) {
            report.failures.push((k, args.iter().map(|x| x.form().clone()).collect(), out.into_form()));
            if stop_at_first {
                return;
            }
        }
    }
}

/// Sample horizontal inputs of degrees 1..=3 and check that `l1, l2, l3` keep them horizontal.
pub fn koszul_preserves_horizontal(
    kernel: &DistributionFrame,
    ctx: &KoszulContext,
    rng: &mut impl Rng,
    trials: usize,
    p: &GenParams,
) -> PreservationReport {
    let n = kernel.dim();
    let ann = kernel.annihilator();
    let mut report = PreservationReport::default();
    for _ in 0..trials {
        let inputs: Vec<ShiftedForm> = (0..3)
            .map(|_| {
                let d = rng.gen_range(1..=3usize.min(n));
                let f = random_horizontal_form(rng, &ann, n, d, p);
                ShiftedForm::with_degree(f, d).expect("homogeneous")
            })
            .collect();
        check_brackets(&inputs, kernel, ctx, &mut report, false);
    }
    report
}

/// Search a fixed family for a horizontal input mapped to a non-horizontal output:
/// annihilator 1-forms times coordinate monomials of degree at most 2, and
/// their products with coordinate 1-forms.
pub fn find_non_preservation_witness(
    kernel: &DistributionFrame,
    ctx: &KoszulContext,
) -> Option<(usize, Vec<DifferentialForm>, DifferentialForm)> {
    let n = kernel.dim();
    let ann = kernel.annihilator();
    let mut monomials = vec![Poly::one()];
    for i in 0..n {
        monomials.push(Poly::var(i));
        for j in i..n {
            monomials.push(Poly::var(i).mul(&Poly::var(j)));
        }
    }
    let mut family: Vec<ShiftedForm> = Vec::new();
    for theta in &ann {
        for m in &monomials {
            family.push(ShiftedForm::with_degree(theta.scale(&Scalar::from_poly(m.clone())), 1).expect("1-form"));
        }
    }
    for theta in &ann {
        for j in 0..n {
            let f = theta.wedge(&DifferentialForm::basis(n, &[j])).expect("same chart");
            if let Ok(x) = ShiftedForm::with_degree(f, 2) {
                family.push(x);
            }
        }
    }
    let mut report = PreservationReport::default();
    for a in &family {
        check_brackets(std::slice::from_ref(a), kernel, ctx, &mut report, true);
        if let Some(w) = report.failures.pop() {
            return Some(w);
        }
    }
    let small: Vec<&ShiftedForm> = family.iter().take(3 * ann.len().max(1)).collect();
    for a in &small {
        for b in &small {
            let out = koszul::lambda(2, &[(*a).clone(), (*b).clone()], ctx).expect("arity 2");
            if !is_horizontal(out.form(), kernel) {
                return Some((2, vec![a.form().clone(), b.form().clone()], out.into_form()));
            }
            for c in &small {
                let out = koszul::lambda(3, &[(*a).clone(), (*b).clone(), (*c).clone()], ctx).expect("arity 3");
                if !is_horizontal(out.form(), kernel) {
                    return Some((3, vec![a.form().clone(), b.form().clone(), c.form().clone()], out.into_form()));
                }
            }
        }
    }
    None
}

/// Result of the deformation pipeline for one `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformReport {
    pub is_mc: bool,
    pub closed: bool,
    pub rank_preserved: bool,
    pub kernel_transverse_to_g: bool,
    /// Whether the `1/6 l3(b, b, b)` summand of the residual is nonzero.
    pub lambda3_contributes: bool,
    pub residual: DifferentialForm,
    pub exp_eta: DifferentialForm,
    pub equivalence: McEquivalence,
}

impl DeformReport {
    /// MC holds iff `exp_eta(beta)` is closed of the same rank.
    pub fn biconditional_holds(&self) -> bool {
        self.is_mc == (self.closed && self.rank_preserved) && self.equivalence.holds()
    }
}

/// Run `beta` through the residual and the Dirac exponential.
pub fn deform(data: &PreSymplecticData, beta: &DifferentialForm, grid: &[Vec<Q>]) -> Result<DeformReport, PresymplecticError> {
    beta.check_chart(data.dim())?;
    if !beta.is_homogeneous_of(2) {
        return Err(KoszulError::WrongDegree { want: 2, got: beta.degree().unwrap_or(0) }.into());
    }
    if !is_horizontal(beta, &data.kernel) {
        return Err(PresymplecticError::NotHorizontal);
    }
    let ctx = data.context();
    let f = match koszul::f_symbolic(beta, &ctx) {
        Ok(f) => f,
        Err(KoszulError::GenericallySingular) => return Err(PresymplecticError::NotInIZ),
        Err(e) => return Err(e.into()),
    };
    let exp_eta = &data.eta + &f.to_form();
    let parts = koszul::mc_residual_parts(beta, &ctx);
    let residual = &(&parts[0] + &parts[1]) + &parts[2];
    let exp_sharp = SkewBilinear::from_form(&exp_eta)?;
    let rank_preserved = exp_sharp.sharp().rank() == data.rank();
    let kernel = exp_sharp.sharp().nullspace();
    let kernel_transverse_to_g = if kernel.is_empty() {
        data.rank() == data.dim()
    } else {
        data.complement.matrix().hcat(&Matrix::from_columns(&kernel)).rank() == data.dim()
    };
    let equivalence = koszul::mc_equivalence(beta, &ctx, grid)?;
    Ok(DeformReport {
        is_mc: residual.is_zero(),
        closed: de_rham(&exp_eta).is_zero(),
        rank_preserved,
        kernel_transverse_to_g,
        lambda3_contributes: !parts[2].is_zero(),
        residual,
        exp_eta,
        equivalence,
    })
}

/// `beta = F_{-Z}(eta' - eta)`: the horizontal form with `exp_eta(beta) = eta'`.
pub fn preimage_of(data: &PreSymplecticData, target: &DifferentialForm) -> Result<DifferentialForm, PresymplecticError> {
    let gamma = target - &data.eta;
    let minus_z = KoszulContext::new(data.z.neg())?;
    Ok(koszul::f_symbolic(&gamma, &minus_z)?.to_form())
}

/// Pullback of `eta` under the unipotent shear `x_i -> x_i + p_i(x_{i+1}, ..)`.
pub fn shear_pullback(eta: &DifferentialForm, shear: &[Poly]) -> Result<DifferentialForm, PresymplecticError> {
    let n = eta.dim();
    let map: Vec<Poly> = (0..n).map(|i| Poly::var(i).add(&shear[i])).collect();
    Ok(pullback(eta, &map)?)
}

/// Random unipotent shear: `p_i` is a polynomial in `x_{i+1}, .., x_n` without constant term.
pub fn random_shear(rng: &mut impl Rng, n: usize, degree: u32, bound: i64) -> Vec<Poly> {
    (0..n)
        .map(|i| {
            if i + 1 >= n || degree == 0 || rng.gen_range(0..3) == 0 {
                return Poly::zero();
            }
            let mut p = Poly::zero();
            for _ in 0..2 {
                let var = rng.gen_range(i + 1..n);
                let e = rng.gen_range(1..=degree) as u16;
                let c = Q::from_integer(rng.gen_range(-bound..=bound).into());
                p = p.add(&Poly::term(c, crate::poly::Monomial::var_pow(var, e)));
            }
            p
        })
        .collect()
}

/// A bundled test family.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: &'static str,
    pub data: PreSymplecticData,
    /// `(label, beta)` pairs; all horizontal and in `I_Z`.
    pub instances: Vec<(String, DifferentialForm)>,
}

fn s(x: &str) -> Scalar {
    x.parse().expect("literal")
}

/// F1: `R^4`, `eta = dx1 ^ dx2`, `G = span(d1, d2)`.
pub fn family_f1() -> Family {
    let n = 4;
    let eta = DifferentialForm::basis(n, &[0, 1]);
    let g = vec![MultivectorField::basis(n, &[0]), MultivectorField::basis(n, &[1])];
    let data = PreSymplecticData::new(eta, DataOptions { complement: Some(g), ..Default::default() }).expect("F1 data");
    let mut instances = vec![
        ("zero".to_string(), DifferentialForm::zero(n)),
        ("constant c dx3^dx1".to_string(), DifferentialForm::basis(n, &[0, 2]).scale(&s("-3/2"))),
        ("x4 dx1^dx3".to_string(), DifferentialForm::basis(n, &[0, 2]).scale(&s("x4"))),
        ("x3 dx2^dx4".to_string(), DifferentialForm::basis(n, &[1, 3]).scale(&s("x3"))),
        ("x1 dx1^dx2".to_string(), DifferentialForm::basis(n, &[0, 1]).scale(&s("x1"))),
    ];
    let shears: Vec<Vec<Poly>> = vec![
        vec![Poly::var(2), Poly::zero(), Poly::zero(), Poly::zero()],
        vec!["x3*x4".parse().unwrap(), "2*x3".parse().unwrap(), Poly::zero(), Poly::zero()],
        vec!["x4^2".parse().unwrap(), "x3-x4".parse().unwrap(), "x4".parse().unwrap(), Poly::zero()],
    ];
    for (i, sh) in shears.iter().enumerate() {
        let target = shear_pullback(data.eta(), sh).expect("pullback");
        if let Ok(beta) = preimage_of(&data, &target) {
            instances.push((format!("shear {i}"), beta));
        }
    }
    Family { name: "F1", data, instances }
}

/// F2: `R^5`, `eta = dx1 ^ dx2 + dx3 ^ dx4`, `G = span(d1, d2, d3, d4 + x1 d5)`.
pub fn family_f2() -> Family {
    let n = 5;
    let eta = &DifferentialForm::basis(n, &[0, 1]) + &DifferentialForm::basis(n, &[2, 3]);
    let g = vec![
        MultivectorField::basis(n, &[0]),
        MultivectorField::basis(n, &[1]),
        MultivectorField::basis(n, &[2]),
        &MultivectorField::basis(n, &[3]) + &MultivectorField::basis(n, &[4]).scale(&s("x1")),
    ];
    let data = PreSymplecticData::new(eta, DataOptions { complement: Some(g), ..Default::default() }).expect("F2 data");
    let mut instances = vec![
        ("zero".to_string(), DifferentialForm::zero(n)),
        ("x5 dx1^dx3".to_string(), DifferentialForm::basis(n, &[0, 2]).scale(&s("x5"))),
        ("dx2^dx5".to_string(), DifferentialForm::basis(n, &[1, 4])),
        ("x2 dx1^dx5".to_string(), DifferentialForm::basis(n, &[0, 4]).scale(&s("x2"))),
    ];
    let shears: Vec<Vec<Poly>> = vec![
        vec![Poly::var(4), Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero()],
        vec![Poly::zero(), Poly::zero(), "x5".parse().unwrap(), Poly::zero(), Poly::zero()],
        vec!["x3".parse().unwrap(), Poly::zero(), "x5^2".parse().unwrap(), "x5".parse().unwrap(), Poly::zero()],
        vec![Poly::zero(), "x3*x5".parse().unwrap(), Poly::zero(), "2*x5".parse().unwrap(), Poly::zero()],
    ];
    for (i, sh) in shears.iter().enumerate() {
        let target = shear_pullback(data.eta(), sh).expect("pullback");
        if let Ok(beta) = preimage_of(&data, &target) {
            instances.push((format!("shear {i}"), beta));
        }
    }
    Family { name: "F2", data, instances }
}

/// `R^4` with the non-involutive frame `K = (d3, d4 + x3 d1)` and `Z = d1 ^ d2`.
pub fn non_involutive_kernel_case() -> (DistributionFrame, KoszulContext) {
    let n = 4;
    let k = DistributionFrame::new(
        n,
        vec![
            MultivectorField::basis(n, &[2]),
            &MultivectorField::basis(n, &[3]) + &MultivectorField::basis(n, &[0]).scale(&s("x3")),
        ],
        &[q0(), q0(), q0(), q0()],
    )
    .expect("independent frame");
    (k, KoszulContext::new(MultivectorField::basis(n, &[0, 1])).expect("bivector"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin(n: usize) -> Vec<Q> {
        vec![q0(); n]
    }

    #[test]
    fn certify_examples() {
        let eta = DifferentialForm::basis(4, &[0, 1]);
        let c = certify_constant_rank(&eta, CertificationRule::Strict).unwrap();
        assert_eq!((c.rank, c.witness.clone(), c.pfaffian.clone()), (2, vec![0, 1], Scalar::one()));
        let eta = DifferentialForm::basis(4, &[0, 1]).scale(&s("1+x1^2"));
        assert!(certify_constant_rank(&eta, CertificationRule::Strict).is_err());
        assert_eq!(certify_constant_rank(&eta, CertificationRule::Relaxed).unwrap().rank, 2);
        let eta = DifferentialForm::basis(4, &[0, 1]).scale(&s("x1"));
        assert!(certify_constant_rank(&eta, CertificationRule::Relaxed).is_err());
        assert_eq!(certify_constant_rank(&DifferentialForm::zero(3), CertificationRule::Strict).unwrap().rank, 0);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let eta = &(&DifferentialForm::basis(4, &[0, 1]).scale(&s("x3")) + &DifferentialForm::basis(4, &[2, 3]))
            + &DifferentialForm::basis(4, &[0, 2]).scale(&s("2"));
        let c = components(&eta);
        let pf = pfaffian(&c, &[0, 1, 2, 3]);
        assert_eq!(pf.mul_ref(&pf), c.det());
    }

    #[test]
    fn kernel_examples() {
        let eta = DifferentialForm::basis(4, &[0, 1]);
        let cert = certify_constant_rank(&eta, CertificationRule::Strict).unwrap();
        let k = kernel_distribution(&eta, &cert, &origin(4)).unwrap();
        assert_eq!(k.sections(), &[MultivectorField::basis(4, &[2]), MultivectorField::basis(4, &[3])]);
        let eta = &(&DifferentialForm::basis(5, &[0, 1]) + &DifferentialForm::basis(5, &[2, 3]))
            + &DifferentialForm::basis(5, &[0, 2]).scale(&s("x1"));
        let cert = certify_constant_rank(&eta, CertificationRule::Strict).unwrap();
        let k = kernel_distribution(&eta, &cert, &origin(5)).unwrap();
        assert_eq!(k.sections(), &[MultivectorField::basis(5, &[4])]);
    }

    #[test]
    fn horizontal_examples() {
        let data = family_f1().data;
        let k = data.kernel();
        assert!(is_horizontal(&DifferentialForm::basis(4, &[0, 1]), k));
        assert!(!is_horizontal(&DifferentialForm::basis(4, &[2, 3]), k));
        assert!(is_horizontal(&DifferentialForm::basis(4, &[0, 2]).scale(&s("-x4")), k));
        assert!(!is_horizontal(&DifferentialForm::function(4, s("1")), k));
    }

    #[test]
    fn dorfman_examples() {
        let n = 2;
        let e1 = GeneralizedSection::vector(MultivectorField::basis(n, &[0]));
        let e2 = GeneralizedSection::vector(MultivectorField::basis(n, &[1]));
        let zero = dorfman(&e1, &e2).unwrap();
        assert!(zero.x.is_zero() && zero.alpha.is_zero());
        let a = GeneralizedSection::covector(DifferentialForm::basis(n, &[1]).scale(&s("x1")));
        let out = dorfman(&e1, &a).unwrap();
        assert!(out.x.is_zero());
        assert_eq!(out.alpha, DifferentialForm::basis(n, &[1]));
        let b = GeneralizedSection::covector(DifferentialForm::basis(n, &[0]).scale(&s("x2")));
        let out = dorfman(&a, &b).unwrap();
        assert!(out.x.is_zero() && out.alpha.is_zero());
    }

    #[test]
    fn dirac_examples() {
        let tm: Vec<_> = (0..3).map(|i| GeneralizedSection::vector(MultivectorField::basis(3, &[i]))).collect();
        assert!(is_dirac(&tm, &origin(3)).unwrap());
        let eta = DifferentialForm::basis(2, &[0, 1]).scale(&s("x1"));
        assert!(is_dirac(&graph_frame_form(&eta), &origin(2)).unwrap());
        let eta = DifferentialForm::basis(3, &[0, 2]).scale(&s("x2"));
        assert!(!is_dirac(&graph_frame_form(&eta), &origin(3)).unwrap());
        assert!(is_dirac(&tm[..2], &origin(3)).is_err());
    }

    #[test]
    fn preservation_conditions_examples() {
        let f1 = family_f1();
        let ctx = f1.data.context();
        assert_eq!(horizontal_preservation_conditions(f1.data.kernel(), &ctx), (true, true));
        let (k, ctx) = non_involutive_kernel_case();
        assert!(!horizontal_preservation_conditions(&k, &ctx).0);
        assert!(find_non_preservation_witness(&k, &ctx).is_some());
        let zero = KoszulContext::new(MultivectorField::zero(4)).unwrap();
        assert!(horizontal_preservation_conditions(f1.data.kernel(), &zero).1);
    }

    #[test]
    fn bundled_data_invariants() {
        for fam in [family_f1(), family_f2()] {
            let d = &fam.data;
            assert!(de_rham(d.eta()).is_zero());
            for v in d.kernel().sections() {
                assert!(contract(v, d.eta()).unwrap().is_zero());
            }
            assert!(d.kernel().is_involutive());
            assert!(d.z_is_inverse_on_complement(), "{}", fam.name);
        }
        let f2 = family_f2();
        assert!(!f2.data.complement().is_involutive());
        assert!(!f2.data.context().is_poisson());
    }

    #[test]
    fn deform_examples() {
        let f1 = family_f1();
        let grid = koszul::default_grid(4);
        let r = deform(&f1.data, &DifferentialForm::zero(4), &grid).unwrap();
        assert!(r.is_mc && r.closed && r.rank_preserved && r.biconditional_holds());
        assert_eq!(&r.exp_eta, f1.data.eta());
        let r = deform(&f1.data, &DifferentialForm::basis(4, &[0, 2]).scale(&s("5")), &grid).unwrap();
        assert!(r.is_mc && r.biconditional_holds());
        let r = deform(&f1.data, &DifferentialForm::basis(4, &[0, 2]).scale(&s("x4")), &grid).unwrap();
        assert!(!r.is_mc && !r.closed && r.biconditional_holds());
        assert_eq!(
            deform(&f1.data, &DifferentialForm::basis(4, &[2, 3]), &grid).unwrap_err(),
            PresymplecticError::NotHorizontal
        );
    }
}
