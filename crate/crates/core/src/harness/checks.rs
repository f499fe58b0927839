//! Named checks over [`Instance`] payloads.
//!
//! Suites build random instances and call [`execute`]; a failing instance is
//! stored verbatim in the report, so replaying it through `run` re-executes
//! exactly the same code.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::instance::Instance;
use crate::dirac::{self, Bivector, CheckStatus, SkewBilinear, Subspace};
use crate::error::ParseError;
use crate::exterior::{contract, de_rham, schouten, DifferentialForm, MultivectorField};
use crate::koszul::{self, KoszulContext, ShiftedForm};
use crate::presymplectic::{self, CertificationRule, DataOptions, DistributionFrame, PreSymplecticData};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub detail: Option<String>,
    /// Optional form-valued output (e.g. `F(beta)` or a non-horizontal image).
    pub witness: Option<DifferentialForm>,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail: None, witness: None }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn with_witness(mut self, w: DifferentialForm) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Outcome { status: Status::Skipped, detail: Some(reason.into()), witness: None }
    }
}

/// Why a check could not produce a verdict.
#[derive(Debug)]
pub enum CheckError {
    /// The payload does not parse against the schema.
    Schema(ParseError),
    /// The payload is well-formed but outside the check's hypotheses.
    Precondition(String),
}

impl From<ParseError> for CheckError {
    fn from(e: ParseError) -> Self {
        CheckError::Schema(e)
    }
}

fn pre(e: impl std::fmt::Display) -> CheckError {
    CheckError::Precondition(e.to_string())
}

type CheckResult = Result<Outcome, CheckError>;

/// Every check name accepted in the `check` field of an instance.
pub const CHECKS: &[&str] = &[
    "d_squared",
    "leibniz",
    "schouten_symmetry",
    "derived_bracket",
    "koszul_one_form_formula",
    "lambda2_via_bracket",
    "lambda_symmetry",
    "intertwiner",
    "jacobi",
    "parametrization",
    "linear_lemmas",
    "mc_equivalence",
    "f_map",
    "dirac_graph",
    "dirac_phi_z",
    "data_invariants",
    "deform",
    "preservation",
    "horizontal_d_closed",
    "preservation_conditions",
    "horizontal",
];

/// Run the check named in `inst.check`.
pub fn execute(inst: &Instance) -> CheckResult {
    let name = inst.check.as_deref().ok_or_else(|| ParseError::Schema("missing check name".into()))?;
    execute_named(name, inst)
}

pub fn execute_named(name: &str, inst: &Instance) -> CheckResult {
    match name {
        "d_squared" => d_squared(inst),
        "leibniz" => leibniz(inst),
        "schouten_symmetry" => schouten_symmetry(inst),
        "derived_bracket" => derived_bracket(inst),
        "koszul_one_form_formula" => koszul_one_form_formula(inst),
        "lambda2_via_bracket" => lambda2_via_bracket(inst),
        "lambda_symmetry" => lambda_symmetry(inst),
        "intertwiner" => intertwiner(inst),
        "jacobi" => jacobi(inst),
        "parametrization" => parametrization(inst),
        "linear_lemmas" => linear_lemmas(inst),
        "mc_equivalence" => mc_equivalence(inst),
        "f_map" => f_map(inst),
        "dirac_graph" => dirac_graph(inst),
        "dirac_phi_z" => dirac_phi_z(inst),
        "data_invariants" => data_invariants(inst),
        "deform" => deform(inst),
        "preservation" => preservation(inst),
        "horizontal_d_closed" => horizontal_d_closed(inst),
        "preservation_conditions" => preservation_conditions(inst),
        "horizontal" => horizontal(inst),
        other => Err(ParseError::Schema(format!("unknown check {other:?}")).into()),
    }
}

// ---------- payload accessors ----------

fn need<T>(x: Option<T>, what: &str) -> Result<T, CheckError> {
    x.ok_or_else(|| ParseError::Schema(format!("missing field {what}")).into())
}

fn forms_n(inst: &Instance, k: usize) -> Result<Vec<(usize, DifferentialForm)>, CheckError> {
    let f = inst.forms()?;
    if f.len() < k {
        return Err(ParseError::Schema(format!("need {k} forms, got {}", f.len())).into());
    }
    Ok(f)
}

fn multivectors_n(inst: &Instance, k: usize) -> Result<Vec<MultivectorField>, CheckError> {
    let m = inst.multivectors()?;
    if m.len() < k {
        return Err(ParseError::Schema(format!("need {k} multivectors, got {}", m.len())).into());
    }
    Ok(m)
}

fn ctx_of(inst: &Instance) -> Result<KoszulContext, CheckError> {
    KoszulContext::new(need(inst.z()?, "Z")?).map_err(pre)
}

fn shifted(forms: &[(usize, DifferentialForm)]) -> Result<Vec<ShiftedForm>, CheckError> {
    forms.iter().map(|(d, f)| ShiftedForm::with_degree(f.clone(), *d).map_err(pre)).collect()
}

fn point_of(inst: &Instance) -> Result<Vec<Q>, CheckError> {
    Ok(inst.ref_point()?.unwrap_or_else(|| vec![Q::zero(); inst.chart]))
}

fn data_of(inst: &Instance) -> Result<PreSymplecticData, CheckError> {
    let eta = need(inst.eta()?, "eta")?;
    if !eta.is_homogeneous_of(2) && !eta.is_zero() {
        return Err(ParseError::Schema("eta must be a 2-form".into()).into());
    }
    let opts = DataOptions {
        complement: inst.g()?,
        ref_point: inst.ref_point()?,
        rule: if inst.relaxed { CertificationRule::Relaxed } else { CertificationRule::Strict },
        degree_cap: None,
    };
    PreSymplecticData::new(eta, opts).map_err(pre)
}

fn two_form(inst: &Instance, beta: Option<DifferentialForm>, what: &str) -> Result<DifferentialForm, CheckError> {
    let b = need(beta, what)?;
    if !b.is_zero() && !b.is_homogeneous_of(2) {
        return Err(ParseError::Schema(format!("{what} must be a 2-form")).into());
    }
    b.check_chart(inst.chart).map_err(pre)?;
    Ok(b)
}

fn constant_skew(f: &DifferentialForm, what: &str) -> Result<SkewBilinear<Q>, CheckError> {
    let s = SkewBilinear::from_form(f).map_err(pre)?;
    s.try_map(|c| c.constant_value().ok_or(()))
        .map_err(|_| CheckError::Precondition(format!("{what} is not constant")))
}

fn constant_columns(fields: &[MultivectorField], what: &str) -> Result<Vec<Vec<Q>>, CheckError> {
    fields
        .iter()
        .map(|v| {
            (0..v.dim())
                .map(|i| v.coeff_of(&[i]).constant_value())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CheckError::Precondition(format!("{what} is not a constant frame")))
        })
        .collect()
}

fn odd(k: usize) -> bool {
    k % 2 == 1
}

fn signed(neg: bool, f: DifferentialForm) -> DifferentialForm {
    if neg {
        f.neg()
    } else {
        f
    }
}

fn homogeneous_degree_mv(m: &MultivectorField, what: &str) -> Result<usize, CheckError> {
    m.degree().ok_or_else(|| ParseError::Schema(format!("{what} must be homogeneous and nonzero")).into())
}

// ---------- exterior calculus ----------

fn d_squared(inst: &Instance) -> CheckResult {
    let (_, a) = forms_n(inst, 1)?.swap_remove(0);
    let dd = de_rham(&de_rham(&a));
    let ok = dd.is_zero();
    Ok(if ok { Outcome::from_bool(true) } else { Outcome::from_bool(false).with_witness(dd) })
}

fn leibniz(inst: &Instance) -> CheckResult {
    let f = forms_n(inst, 2)?;
    let ((p, a), (_, b)) = (&f[0], &f[1]);
    let lhs = de_rham(&a.wedge(b).map_err(pre)?);
    let left = de_rham(a).wedge(b).map_err(pre)?;
    let right = signed(odd(*p), a.wedge(&de_rham(b)).map_err(pre)?);
    Ok(Outcome::from_bool(lhs == &left + &right))
}

fn schouten_symmetry(inst: &Instance) -> CheckResult {
    let m = multivectors_n(inst, 2)?;
    let (p, q) = (homogeneous_degree_mv(&m[0], "P")?, homogeneous_degree_mv(&m[1], "Q")?);
    let pq = schouten(&m[0], &m[1]).map_err(pre)?;
    let qp = schouten(&m[1], &m[0]).map_err(pre)?;
    // [P, Q] = -(-1)^((p-1)(q-1)) [Q, P]
    let expected = if odd((p + 1) * (q + 1)) { qp } else { qp.neg() };
    Ok(Outcome::from_bool(pq == expected))
}

/// `i_[P,Q] = [[i_P, d], i_Q]` with graded commutators; `i_P` has degree `-p`.
fn derived_bracket(inst: &Instance) -> CheckResult {
    let m = multivectors_n(inst, 2)?;
    let (_, alpha) = forms_n(inst, 1)?.swap_remove(0);
    let (p, q) = (homogeneous_degree_mv(&m[0], "P")?, homogeneous_degree_mv(&m[1], "Q")?);
    let (pm, qm) = (&m[0], &m[1]);
    let d_op = |x: &DifferentialForm| -> Result<DifferentialForm, CheckError> {
        let a = contract(pm, &de_rham(x)).map_err(pre)?;
        let b = de_rham(&contract(pm, x).map_err(pre)?);
        Ok(&a - &signed(odd(p), b))
    };
    let lhs = contract(&schouten(pm, qm).map_err(pre)?, &alpha).map_err(pre)?;
    let first = d_op(&contract(qm, &alpha).map_err(pre)?)?;
    let second = contract(qm, &d_op(&alpha)?).map_err(pre)?;
    let rhs = &first - &signed(odd((1 + p) * q), second);
    Ok(Outcome::from_bool(lhs == rhs))
}

// ---------- Koszul brackets ----------

fn koszul_one_form_formula(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let f = forms_n(inst, 2)?;
    let a = koszul::koszul_bracket(&f[0].1, &f[1].1, &ctx).map_err(pre)?;
    let b = koszul::koszul_bracket_one_forms(&f[0].1, &f[1].1, &ctx).map_err(pre)?;
    Ok(Outcome::from_bool(a == b).with_witness(a))
}

fn lambda2_via_bracket(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let x = shifted(&forms_n(inst, 2)?)?;
    let a = koszul::lambda(2, &x[..2], &ctx).map_err(pre)?;
    let b = koszul::lambda2_via_bracket(&x[0], &x[1], &ctx).map_err(pre)?;
    Ok(Outcome::from_bool(a == b))
}

/// Graded symmetry of `l2` and `l3` under adjacent swaps.
fn lambda_symmetry(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let x = shifted(&forms_n(inst, 3)?)?;
    let l2 = koszul::lambda(2, &[x[0].clone(), x[1].clone()], &ctx).map_err(pre)?;
    let l2s = koszul::lambda(2, &[x[1].clone(), x[0].clone()], &ctx).map_err(pre)?;
    let ok2 = l2.form() == &l2s.form().scale_rational(&koszul::swap_sign(&x[0], &x[1]));
    let l3 = koszul::lambda(3, &x[..3], &ctx).map_err(pre)?;
    let l3s = koszul::lambda(3, &[x[0].clone(), x[2].clone(), x[1].clone()], &ctx).map_err(pre)?;
    let ok3 = l3.form() == &l3s.form().scale_rational(&koszul::swap_sign(&x[1], &x[2]));
    let mut out = Outcome::from_bool(ok2 && ok3);
    if !ok2 {
        out = out.with_detail("l2 symmetry");
    } else if !ok3 {
        out = out.with_detail("l3 symmetry");
    }
    Ok(out)
}

/// `-id` intertwines the two bracket families: `l_k = (-1)^(k+1) m_k`.
fn intertwiner(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let x = shifted(&forms_n(inst, 3)?)?;
    let mut bad = Vec::new();
    for k in 1..=3 {
        let l = koszul::lambda(k, &x[..k], &ctx).map_err(pre)?;
        let m = koszul::mu(k, &x[..k], &ctx).map_err(pre)?;
        let expected = if odd(k + 1) { m.neg() } else { m };
        if l != expected {
            bad.push(k.to_string());
        }
    }
    let out = Outcome::from_bool(bad.is_empty());
    Ok(if bad.is_empty() { out } else { out.with_detail(format!("arities {}", bad.join(","))) })
}

fn jacobi(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let x = shifted(&inst.forms()?)?;
    if !(1..=5).contains(&x.len()) {
        return Err(ParseError::Schema("jacobi needs 1 to 5 forms".into()).into());
    }
    let j = koszul::jacobiator(&x, &ctx).map_err(pre)?;
    let ok = j.is_zero();
    let out = Outcome::from_bool(ok).with_detail(format!("arity {}", x.len()));
    Ok(if ok { out } else { out.with_witness(j) })
}

// ---------- linear Dirac geometry ----------

struct LinearInput {
    eta: SkewBilinear<Q>,
    g: Subspace<Q>,
    beta: SkewBilinear<Q>,
}

fn linear_input(inst: &Instance) -> Result<LinearInput, CheckError> {
    let eta = constant_skew(&two_form(inst, inst.eta()?, "eta")?, "eta")?;
    let beta = constant_skew(&two_form(inst, inst.beta()?, "beta")?, "beta")?;
    let g_fields = need(inst.g()?, "G")?;
    let g = Subspace::span(inst.chart, &constant_columns(&g_fields, "G")?);
    Ok(LinearInput { eta, g, beta })
}

/// The constant-rank parametrization: rank biconditional, kernel graph,
/// restriction to `G`, and injectivity via the inverse `F_{-Z}`.
fn parametrization(inst: &Instance) -> CheckResult {
    let LinearInput { eta, g, beta } = linear_input(inst)?;
    let n = eta.dim();
    let (k, kernel) = dirac::rank_and_kernel(&eta);
    let z = dirac::z_from_eta_g(&eta, &g).map_err(pre)?;
    if !dirac::in_i_z(&beta, &z) {
        return Ok(Outcome::skipped("beta is not in I_Z"));
    }
    let exp = eta.add(&dirac::f_map(&beta, &z).map_err(pre)?);
    let (rank_exp, kernel_exp) = dirac::rank_and_kernel(&exp);
    let horizontal = dirac::is_horizontal_linear(&beta, &kernel);
    let mut bad: Vec<&str> = Vec::new();
    if (rank_exp == k) != horizontal {
        bad.push("rank");
    }
    if horizontal {
        // kernel(exp) = {v + Z# i_v beta : v in K}
        let graph: Vec<Vec<Q>> = kernel
            .basis()
            .iter()
            .map(|v| {
                let w = z.sharp().mul_vec(&beta.sharp().mul_vec(v));
                v.iter().zip(&w).map(|(a, b)| a + b).collect()
            })
            .collect();
        if kernel_exp != Subspace::span(n, &graph) {
            bad.push("kernel_graph");
        }
        // exp|_G = (eta + F(sigma))|_G
        let dec = dirac::decompose_horizontal(&beta, &kernel, &g).map_err(pre)?;
        let sigma = dec.sigma_on_v();
        match dirac::f_map(&sigma, &z) {
            Ok(fs) => {
                let gm = g.spanning_matrix();
                let restrict = |b: &SkewBilinear<Q>| gm.transpose().mul(b.sharp()).mul(&gm);
                if restrict(&exp) != restrict(&eta.add(&fs)) {
                    bad.push("restriction_to_g");
                }
            }
            Err(_) => bad.push("sigma_in_i_z"),
        }
        if !kernel_exp.is_complement_of(&g) {
            bad.push("kernel_transverse_to_g");
        }
        // injectivity: F_{-Z}(exp - eta) recovers beta
        match dirac::f_map(&exp.sub(&eta), &z.neg()) {
            Ok(back) if back == beta => {}
            _ => bad.push("inverse"),
        }
        // distinct horizontal inputs give distinct outputs
        for (_, other) in inst.forms()? {
            let other = constant_skew(&other, "comparison form")?;
            if other == beta || !dirac::in_i_z(&other, &z) || !dirac::is_horizontal_linear(&other, &kernel) {
                continue;
            }
            if eta.add(&dirac::f_map(&other, &z).map_err(pre)?) == exp {
                bad.push("injective");
            }
        }
    }
    let out = Outcome::from_bool(bad.is_empty()).with_detail(format!(
        "rank(eta)={k} rank(exp)={rank_exp} horizontal={horizontal}{}",
        if bad.is_empty() { String::new() } else { format!(" failed: {}", bad.join(",")) }
    ));
    Ok(out.with_witness(skew_to_form(&exp)))
}

fn skew_to_form(b: &SkewBilinear<Q>) -> DifferentialForm {
    b.map(|c| crate::scalar::Scalar::constant(c.clone())).to_form()
}

fn linear_lemmas(inst: &Instance) -> CheckResult {
    let LinearInput { eta, g, beta } = linear_input(inst)?;
    let report = dirac::verify_linear_lemmas(&eta, &g, &beta).map_err(pre)?;
    let skipped: Vec<&str> = report.checks.iter().filter(|c| c.status == CheckStatus::Skipped).map(|c| c.name).collect();
    let failures = report.failures();
    let mut detail = String::new();
    if !failures.is_empty() {
        detail = format!("failed: {}", failures.join(","));
    } else if !skipped.is_empty() {
        detail = format!("skipped: {}", skipped.join(","));
    }
    let out = Outcome::from_bool(report.all_pass());
    Ok(if detail.is_empty() { out } else { out.with_detail(detail) })
}

// ---------- Maurer-Cartan ----------

fn grid_of(inst: &Instance) -> Result<Vec<Vec<Q>>, CheckError> {
    Ok(inst.grid_points()?)
}

fn mc_equivalence(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let beta = two_form(inst, inst.beta()?, "beta")?;
    let eq = match koszul::mc_equivalence(&beta, &ctx, &grid_of(inst)?) {
        Ok(eq) => eq,
        Err(e) => return Ok(Outcome::skipped(e.to_string())),
    };
    Ok(Outcome::from_bool(eq.holds()).with_detail(format!(
        "mc={} dF_closed={} det_constant={} grid={}/{}",
        eq.is_mc, eq.f_closed, eq.determinant_constant, eq.grid_agreements, eq.grid_points
    )))
}

/// Reports `F(beta)` as the witness; fails only if `beta` is generically outside `I_Z`.
fn f_map(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let beta = two_form(inst, inst.beta()?, "beta")?;
    match koszul::f_symbolic(&beta, &ctx) {
        Ok(f) => Ok(Outcome::from_bool(true).with_witness(f.to_form())),
        Err(e) => Ok(Outcome::skipped(e.to_string())),
    }
}

fn dirac_graph(inst: &Instance) -> CheckResult {
    let eta = two_form(inst, inst.eta()?, "eta")?;
    let point = point_of(inst)?;
    let dirac = presymplectic::is_dirac(&presymplectic::graph_frame_form(&eta), &point).map_err(pre)?;
    let closed = de_rham(&eta).is_zero();
    Ok(Outcome::from_bool(dirac == closed).with_detail(format!("dirac={dirac} closed={closed}")))
}

fn dirac_phi_z(inst: &Instance) -> CheckResult {
    let ctx = ctx_of(inst)?;
    let beta = two_form(inst, inst.beta()?, "beta")?;
    let point = point_of(inst)?;
    let dirac = presymplectic::is_dirac(&presymplectic::phi_z_frame(&beta, ctx.z()), &point).map_err(pre)?;
    let mc = koszul::mc_residual(&beta, &ctx).map_err(pre)?.is_zero();
    Ok(Outcome::from_bool(dirac == mc).with_detail(format!("dirac={dirac} mc={mc}")))
}

// ---------- pre-symplectic pipeline ----------

fn data_invariants(inst: &Instance) -> CheckResult {
    let data = data_of(inst)?;
    let mut bad = Vec::new();
    if !de_rham(data.eta()).is_zero() {
        bad.push("closed");
    }
    for v in data.kernel().sections() {
        if !contract(v, data.eta()).map_err(pre)?.is_zero() {
            bad.push("kernel_annihilates");
            break;
        }
    }
    if !data.kernel().is_involutive() {
        bad.push("kernel_involutive");
    }
    if !data.z_is_inverse_on_complement() {
        bad.push("z_inverse");
    }
    if data.kernel().rank() + data.rank() != data.dim() {
        bad.push("rank_count");
    }
    let out = Outcome::from_bool(bad.is_empty()).with_detail(format!(
        "rank={} witness={:?}{}",
        data.rank(),
        data.certificate().witness.iter().map(|i| i + 1).collect::<Vec<_>>(),
        if bad.is_empty() { String::new() } else { format!(" failed: {}", bad.join(",")) }
    ));
    Ok(out)
}

fn deform(inst: &Instance) -> CheckResult {
    let data = data_of(inst)?;
    let beta = two_form(inst, inst.beta()?, "beta")?;
    let r = presymplectic::deform(&data, &beta, &grid_of(inst)?).map_err(pre)?;
    let out = Outcome::from_bool(r.biconditional_holds()).with_detail(format!(
        "mc={} closed={} rank_preserved={} kernel_transverse_to_g={} l3_contributes={} grid={}/{}",
        r.is_mc,
        r.closed,
        r.rank_preserved,
        r.kernel_transverse_to_g,
        r.lambda3_contributes,
        r.equivalence.grid_agreements,
        r.equivalence.grid_points
    ));
    Ok(out.with_witness(r.exp_eta))
}

/// Kernel frame and bracket context: from `eta` (and `G`) when present, else `frame` and `Z`.
fn kernel_and_ctx(inst: &Instance) -> Result<(DistributionFrame, KoszulContext), CheckError> {
    if inst.eta.is_some() {
        let data = data_of(inst)?;
        return Ok((data.kernel().clone(), data.context()));
    }
    let frame = need(inst.frame()?, "frame")?;
    let point = point_of(inst)?;
    let k = DistributionFrame::new(inst.chart, frame, &point).map_err(pre)?;
    Ok((k, ctx_of(inst)?))
}

/// `l1(x0)`, `l2(x0, x1)`, `l3(x0, x1, x2)` of horizontal inputs are horizontal.
fn preservation(inst: &Instance) -> CheckResult {
    let (kernel, ctx) = kernel_and_ctx(inst)?;
    let forms = inst.forms()?;
    if forms.is_empty() || forms.len() > 3 {
        return Err(ParseError::Schema("preservation needs 1 to 3 forms".into()).into());
    }
    if forms.iter().any(|(_, f)| !presymplectic::is_horizontal(f, &kernel)) {
        return Err(CheckError::Precondition("input is not horizontal".into()));
    }
    let x = shifted(&forms)?;
    let mut l3_nonzero = false;
    for k in 1..=x.len() {
        let out = koszul::lambda(k, &x[..k], &ctx).map_err(pre)?;
        if k == 3 && !out.is_zero() {
            l3_nonzero = true;
        }
        if !presymplectic::is_horizontal(out.form(), &kernel) {
            return Ok(Outcome::from_bool(false).with_detail(format!("l{k} output not horizontal")).with_witness(out.into_form()));
        }
    }
    Ok(Outcome::from_bool(true).with_detail(format!("l3_nonzero={l3_nonzero}")))
}

fn horizontal_d_closed(inst: &Instance) -> CheckResult {
    let (kernel, _) = kernel_and_ctx(inst)?;
    let (_, a) = forms_n(inst, 1)?.swap_remove(0);
    if !presymplectic::is_horizontal(&a, &kernel) {
        return Err(CheckError::Precondition("input is not horizontal".into()));
    }
    let da = de_rham(&a);
    let ok = presymplectic::is_horizontal(&da, &kernel);
    Ok(if ok { Outcome::from_bool(true) } else { Outcome::from_bool(false).with_witness(da) })
}

/// Both condition flags hold iff no element of the fixed witness family
/// is mapped to a non-horizontal form.
fn preservation_conditions(inst: &Instance) -> CheckResult {
    let (kernel, ctx) = kernel_and_ctx(inst)?;
    let (involutive, pairing_ok) = presymplectic::horizontal_preservation_conditions(&kernel, &ctx);
    let witness = presymplectic::find_non_preservation_witness(&kernel, &ctx);
    let out = Outcome::from_bool((involutive && pairing_ok) == witness.is_none()).with_detail(format!(
        "involutive={involutive} pairing={pairing_ok} witness={}",
        match &witness {
            Some((k, _, _)) => format!("l{k}"),
            None => "none".into(),
        }
    ));
    Ok(match witness {
        Some((_, _, w)) => out.with_witness(w),
        None => out,
    })
}

fn horizontal(inst: &Instance) -> CheckResult {
    let (kernel, _) = match kernel_and_ctx(inst) {
        Ok(x) => x,
        Err(CheckError::Schema(_)) if inst.frame.is_some() => {
            let k = DistributionFrame::new(inst.chart, need(inst.frame()?, "frame")?, &point_of(inst)?).map_err(pre)?;
            (k, KoszulContext::new(MultivectorField::zero(inst.chart)).map_err(pre)?)
        }
        Err(e) => return Err(e),
    };
    let forms = inst.forms()?;
    let bad = forms.iter().position(|(_, f)| !presymplectic::is_horizontal(f, &kernel));
    Ok(match bad {
        None => Outcome::from_bool(true),
        Some(i) => Outcome::from_bool(false).with_detail(format!("form {i} is not horizontal")),
    })
}

/// Checks applicable to a payload without an explicit `check` field.
pub fn applicable_checks(inst: &Instance) -> Vec<&'static str> {
    let has_beta = inst.beta.is_some();
    let mut out = Vec::new();
    if inst.eta.is_some() {
        out.push("data_invariants");
        out.push("dirac_graph");
        if has_beta {
            out.push("deform");
            if is_linear_payload(inst) {
                out.push("parametrization");
                out.push("linear_lemmas");
            }
        }
        if !inst.forms.is_empty() {
            out.push("horizontal");
        }
    } else if inst.z.is_some() {
        if has_beta {
            out.push("f_map");
            out.push("mc_equivalence");
            out.push("dirac_phi_z");
        }
        if inst.frame.is_some() {
            out.push("preservation_conditions");
        }
    } else if inst.frame.is_some() && !inst.forms.is_empty() {
        out.push("horizontal");
    }
    out
}

fn is_linear_payload(inst: &Instance) -> bool {
    let constant = |f: Result<Option<DifferentialForm>, ParseError>| matches!(f, Ok(Some(f)) if f.is_constant());
    let g_constant = match inst.g() {
        Ok(Some(g)) => g.iter().all(|v| v.is_constant()),
        _ => false,
    };
    constant(inst.eta()) && constant(inst.beta()) && g_constant
}

/// Build `theta_1 ^ w_1 + ...` as a constant skew form.
pub fn wedge_pairs(n: usize, pairs: &[(Vec<Q>, Vec<Q>)]) -> SkewBilinear<Q> {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut c = Q::zero();
            for (t, w) in pairs {
                c += &t[i] * &w[j] - &t[j] * &w[i];
            }
            entries.push((i, j, c));
        }
    }
    SkewBilinear::from_pairs(n, &entries)
}

/// Unit vector `e_i` in `Q^n`.
pub fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// A constant bivector field from its sharp matrix.
pub fn bivector_field(b: &Bivector<Q>) -> MultivectorField {
    b.map(|c| crate::scalar::Scalar::constant(c.clone())).to_field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn run(inst: &Instance) -> Outcome {
        execute(inst).unwrap_or_else(|e| panic!("{:?}", e))
    }

    #[test]
    fn every_listed_check_dispatches() {
        let empty = Instance::new(2, "x");
        for name in CHECKS {
            match execute_named(name, &empty) {
                Err(CheckError::Schema(ParseError::Schema(msg))) => assert!(!msg.contains("unknown check"), "{name}"),
                _ => {}
            }
        }
        assert!(matches!(execute_named("nope", &empty), Err(CheckError::Schema(_))));
    }

    #[test]
    fn exterior_checks_on_fixed_inputs() {
        let c = Chart::new(3).unwrap();
        let a = c.dx(0).scale(&"x2*x3".parse().unwrap());
        let b = c.dx(1).scale(&"x1^2".parse().unwrap());
        assert_eq!(run(&Instance::new(3, "d_squared").with_forms(&[(1, a.clone())])).status, Status::Pass);
        assert_eq!(run(&Instance::new(3, "leibniz").with_forms(&[(1, a.clone()), (1, b)])).status, Status::Pass);
        let p = c.partial(0).scale(&"x3".parse().unwrap());
        let q = c.partial(1).wedge(&c.partial(2)).unwrap().scale(&"x1".parse().unwrap());
        let inst = Instance::new(3, "derived_bracket").with_multivectors(&[p.clone(), q.clone()]).with_forms(&[(2, a.wedge(&c.dx(2)).unwrap())]);
        assert_eq!(run(&inst).status, Status::Pass);
        assert_eq!(run(&Instance::new(3, "schouten_symmetry").with_multivectors(&[p, q])).status, Status::Pass);
    }

    #[test]
    fn worked_koszul_value() {
        // [dx1, dx2]_{x1 d1 ^ d2} = dx1 on R^2
        let c = Chart::new(2).unwrap();
        let z = c.partial(0).wedge(&c.partial(1)).unwrap().scale(&"x1".parse().unwrap());
        let inst = Instance::new(2, "koszul_one_form_formula").with_z(&z).with_forms(&[(1, c.dx(0)), (1, c.dx(1))]);
        let out = run(&inst);
        assert_eq!(out.status, Status::Pass);
        assert_eq!(out.witness.unwrap(), c.dx(0));
    }

    #[test]
    fn parametrization_worked_examples() {
        let n = 4;
        let c = Chart::new(n).unwrap();
        let eta = c.dx(0).wedge(&c.dx(1)).unwrap();
        let g = vec![c.partial(0), c.partial(1)];
        let s = Q::from_integer(5.into());
        let beta = c.dx(2).wedge(&c.dx(0)).unwrap().scale_rational(&s);
        let inst = Instance::new(n, "parametrization").with_eta(&eta).with_g(&g).with_beta(&beta);
        let out = run(&inst);
        assert_eq!(out.status, Status::Pass, "{:?}", out.detail);
        let exp = constant_skew(&out.witness.unwrap(), "exp").unwrap();
        let (rank, kernel) = dirac::rank_and_kernel(&exp);
        assert_eq!(rank, 2);
        let mut v = unit(n, 2);
        v[1] = s;
        assert_eq!(kernel, Subspace::span(n, &[v, unit(n, 3)]));
        // non-horizontal input: rank jumps to 4 and the biconditional still holds
        let wild = c.dx(2).wedge(&c.dx(3)).unwrap();
        let out = run(&Instance::new(n, "parametrization").with_eta(&eta).with_g(&g).with_beta(&wild));
        assert_eq!(out.status, Status::Pass);
        assert!(out.detail.unwrap().contains("rank(exp)=4"));
        let lemmas = Instance::new(n, "linear_lemmas").with_eta(&eta).with_g(&g).with_beta(&beta);
        assert_eq!(run(&lemmas).status, Status::Pass);
    }

    #[test]
    fn f_map_two_by_two_closed_form() {
        let c = Chart::new(2).unwrap();
        let z = c.partial(0).wedge(&c.partial(1)).unwrap();
        let t = Q::new(3.into(), 7.into());
        let beta = c.dx(0).wedge(&c.dx(1)).unwrap().scale_rational(&t);
        let out = run(&Instance::new(2, "f_map").with_z(&z).with_beta(&beta));
        let expected = c.dx(0).wedge(&c.dx(1)).unwrap().scale_rational(&(&t / (Q::one() - &t)));
        assert_eq!(out.witness.unwrap(), expected);
    }

    #[test]
    fn dirac_graph_detects_closedness() {
        let c = Chart::new(3).unwrap();
        let closed = c.dx(0).wedge(&c.dx(1)).unwrap().scale(&"x1".parse().unwrap());
        let open = c.dx(0).wedge(&c.dx(2)).unwrap().scale(&"x2".parse().unwrap());
        for eta in [closed, open] {
            assert_eq!(run(&Instance::new(3, "dirac_graph").with_eta(&eta)).status, Status::Pass);
        }
    }

    #[test]
    fn uncertifiable_eta_is_a_precondition_failure() {
        let c = Chart::new(4).unwrap();
        let eta = c.dx(0).wedge(&c.dx(1)).unwrap().scale(&"x1".parse().unwrap());
        assert!(matches!(execute(&Instance::new(4, "data_invariants").with_eta(&eta)), Err(CheckError::Precondition(_))));
    }

    #[test]
    fn engineered_kernel_has_witness() {
        let (k, ctx) = presymplectic::non_involutive_kernel_case();
        let inst = Instance::new(4, "preservation_conditions").with_frame(k.sections()).with_z(ctx.z());
        let out = run(&inst);
        assert_eq!(out.status, Status::Pass);
        assert!(out.witness.is_some());
        assert!(out.detail.unwrap().contains("involutive=false"));
    }
}
