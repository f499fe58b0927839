//! Random instance streams for each suite.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::checks::{bivector_field, unit, wedge_pairs};
use super::gen::{self, GenParams, TrialRng};
use super::instance::Instance;
use super::ResolvedConfig;
use crate::dirac::SkewBilinear;
use crate::exterior::{de_rham, Chart, DifferentialForm, MultivectorField};
use crate::koszul::{self, KoszulContext};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::presymplectic::{self, DataOptions, PreSymplecticData};
use crate::scalar::Scalar;

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Exterior,
    Koszul,
    LinfJacobi,
    Linalg,
    Mc,
    Dirac,
    Presymplectic,
    All,
}

/// Per-suite defaults: `(dim, max form degree, max coefficient degree, trials)`.
pub struct Defaults {
    pub dim: usize,
    pub max_form_degree: usize,
    pub max_coef_degree: u32,
    pub trials: usize,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Exterior, Suite::Koszul, Suite::LinfJacobi, Suite::Linalg, Suite::Mc, Suite::Dirac, Suite::Presymplectic];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exterior => "exterior",
            Suite::Koszul => "koszul",
            Suite::LinfJacobi => "linf-jacobi",
            Suite::Linalg => "linalg",
            Suite::Mc => "mc",
            Suite::Dirac => "dirac",
            Suite::Presymplectic => "presymplectic",
            Suite::All => "all",
        }
    }

    pub fn defaults(self) -> Defaults {
        let (dim, max_form_degree, max_coef_degree, trials) = match self {
            Suite::Exterior => (4, 3, 2, 25),
            Suite::Koszul => (3, 3, 2, 25),
            Suite::LinfJacobi => (4, 3, 2, 10),
            Suite::Linalg => (4, 2, 0, 50),
            Suite::Mc => (3, 2, 1, 20),
            Suite::Dirac => (3, 2, 1, 20),
            Suite::Presymplectic | Suite::All => (4, 3, 1, 6),
        };
        Defaults { dim, max_form_degree, max_coef_degree, trials }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

fn params(cfg: &ResolvedConfig) -> GenParams {
    GenParams { coef_bound: cfg.coef_bound, coef_degree: cfg.max_coef_degree, ..GenParams::default() }
}

fn tag(inst: Instance, id: String) -> Instance {
    Instance { id: Some(id), ..inst }
}

fn rand_degree(rng: &mut TrialRng, cfg: &ResolvedConfig) -> usize {
    rng.gen_range(0..=cfg.max_form_degree.min(cfg.dim))
}

fn nonzero_multivector(rng: &mut TrialRng, n: usize, p: &GenParams) -> MultivectorField {
    loop {
        let d = rng.gen_range(1..=3usize.min(n));
        let m = gen::multivector(rng, n, d, p);
        if !m.is_zero() {
            return m;
        }
    }
}

fn nonzero_bivector_field(rng: &mut TrialRng, n: usize, p: &GenParams) -> MultivectorField {
    loop {
        let z = gen::bivector_field(rng, n, p);
        if !z.is_zero() || n < 2 {
            return z;
        }
    }
}

/// Instances generated for one trial.
pub fn trial_instances(suite: Suite, cfg: &ResolvedConfig, trial: u64) -> Vec<Instance> {
    let mut rng = gen::rng_for(cfg.seed, trial);
    let out = match suite {
        Suite::Exterior => exterior(&mut rng, cfg),
        Suite::Koszul => koszul_trial(&mut rng, cfg),
        Suite::LinfJacobi => jacobi_trial(&mut rng, cfg, trial),
        Suite::Linalg => linalg_trial(&mut rng, cfg),
        Suite::Mc => mc_trial(&mut rng, cfg),
        Suite::Dirac => dirac_trial(&mut rng, cfg, trial),
        Suite::Presymplectic => presymplectic_trial(&mut rng, cfg, trial),
        Suite::All => Vec::new(),
    };
    out.into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let inst = Instance { grid: cfg.grid_override(), ..inst };
            tag(inst, format!("{} seed {} trial {trial} #{i}", suite.name(), cfg.seed))
        })
        .collect()
}

/// Trial-independent instances (worked examples and bundled families).
pub fn fixed_instances(suite: Suite, cfg: &ResolvedConfig) -> Vec<Instance> {
    let out = match suite {
        Suite::Koszul => koszul_fixed(),
        Suite::Linalg => linalg_fixed(),
        Suite::Mc => mc_fixed(),
        Suite::Dirac => dirac_fixed(),
        Suite::Presymplectic => presymplectic_fixed(),
        _ => Vec::new(),
    };
    out.into_iter()
        .map(|inst| {
            let id = inst.id.clone().unwrap_or_default();
            Instance { grid: cfg.grid_override(), ..tag(inst, format!("{} fixed {id}", suite.name())) }
        })
        .collect()
}

// ---------- exterior ----------

fn exterior(rng: &mut TrialRng, cfg: &ResolvedConfig) -> Vec<Instance> {
    let n = cfg.dim;
    let p = params(cfg);
    let form = |rng: &mut TrialRng| {
        let d = rand_degree(rng, cfg);
        (d, gen::nonzero_form(rng, n, d, &p))
    };
    let a = form(rng);
    let b = form(rng);
    let c = form(rng);
    let alpha = {
        let d = rng.gen_range(0..=n);
        (d, gen::nonzero_form(rng, n, d, &p))
    };
    let (pm, qm) = (nonzero_multivector(rng, n, &p), nonzero_multivector(rng, n, &p));
    let (rm, sm) = (nonzero_multivector(rng, n, &p), nonzero_multivector(rng, n, &p));
    vec![
        Instance::new(n, "d_squared").with_forms(&[a.clone()]),
        Instance::new(n, "leibniz").with_forms(&[b, c]),
        Instance::new(n, "schouten_symmetry").with_multivectors(&[pm, qm]),
        Instance::new(n, "derived_bracket").with_multivectors(&[rm, sm]).with_forms(&[alpha]),
    ]
}

// ---------- koszul ----------

fn koszul_trial(rng: &mut TrialRng, cfg: &ResolvedConfig) -> Vec<Instance> {
    let n = cfg.dim;
    let p = params(cfg);
    let z = nonzero_bivector_field(rng, n, &p);
    let one_forms = [(1, gen::nonzero_form(rng, n, 1, &p)), (1, gen::nonzero_form(rng, n, 1, &p))];
    let mut three = Vec::new();
    for _ in 0..3 {
        let d = rand_degree(rng, cfg);
        three.push((d, gen::nonzero_form(rng, n, d, &p)));
    }
    vec![
        Instance::new(n, "koszul_one_form_formula").with_z(&z).with_forms(&one_forms),
        Instance::new(n, "lambda2_via_bracket").with_z(&z).with_forms(&three[..2]),
        Instance::new(n, "lambda_symmetry").with_z(&z).with_forms(&three),
        Instance::new(n, "intertwiner").with_z(&z).with_forms(&three),
    ]
}

fn koszul_fixed() -> Vec<Instance> {
    let c = Chart::new(2).expect("dim 2");
    let z = c.partial(0).wedge(&c.partial(1)).expect("chart").scale(&Scalar::var(0));
    vec![tag(
        Instance::new(2, "koszul_one_form_formula").with_z(&z).with_forms(&[(1, c.dx(0)), (1, c.dx(1))]),
        "worked value on R^2".into(),
    )]
}

// ---------- L-infinity ----------

fn jacobi_trial(rng: &mut TrialRng, cfg: &ResolvedConfig, trial: u64) -> Vec<Instance> {
    let n = cfg.dim;
    let p = GenParams { max_terms: 2, density: 50, ..params(cfg) };
    // trial 0 always draws a bivector field that is not Poisson
    let z = if trial == 0 && n >= 3 { gen::non_poisson_bivector_field(rng, n, &p) } else { nonzero_bivector_field(rng, n, &p) };
    (1..=5)
        .map(|arity| {
            let forms: Vec<(usize, DifferentialForm)> = (0..arity)
                .map(|_| {
                    let d = rand_degree(rng, cfg);
                    (d, gen::nonzero_form(rng, n, d, &p))
                })
                .collect();
            Instance::new(n, "jacobi").with_z(&z).with_forms(&forms)
        })
        .collect()
}

// ---------- linear ----------

/// Rank used by the linear suite: the largest even number below `n`.
pub fn linalg_rank(n: usize) -> usize {
    2 * ((n.max(1) - 1) / 2)
}

fn constant_form(b: &SkewBilinear<Q>) -> DifferentialForm {
    b.map(|c| Scalar::constant(c.clone())).to_form()
}

fn constant_vector(v: &[Q]) -> MultivectorField {
    let n = v.len();
    let mut out = MultivectorField::zero(n);
    for (i, c) in v.iter().enumerate() {
        out = &out + &MultivectorField::basis(n, &[i]).scale_rational(c);
    }
    out
}

fn random_horizontal_skew(rng: &mut TrialRng, annihilator: &[Vec<Q>], n: usize, bound: i64) -> SkewBilinear<Q> {
    let pairs: Vec<(Vec<Q>, Vec<Q>)> =
        annihilator.iter().map(|t| (t.clone(), (0..n).map(|_| gen::rational(rng, bound)).collect())).collect();
    wedge_pairs(n, &pairs)
}

fn linalg_trial(rng: &mut TrialRng, cfg: &ResolvedConfig) -> Vec<Instance> {
    let n = cfg.dim;
    let k = linalg_rank(n);
    let bound = cfg.coef_bound;
    let (eta, kernel, g) = gen::constant_rank_instance(rng, n, k, bound);
    let ann = kernel.spanning_matrix().transpose().nullspace();
    let beta = if rng.gen_bool(0.5) { random_horizontal_skew(rng, &ann, n, bound) } else { gen::skew_form(rng, n, bound) };
    let other = random_horizontal_skew(rng, &ann, n, bound);
    let g_fields: Vec<MultivectorField> = g.basis().iter().map(|v| constant_vector(v)).collect();
    let base = Instance::new(n, "parametrization")
        .with_eta(&constant_form(&eta))
        .with_g(&g_fields)
        .with_beta(&constant_form(&beta));
    vec![
        base.clone().with_forms(&[(2, constant_form(&other))]),
        Instance { check: Some("linear_lemmas".into()), ..base },
    ]
}

fn linalg_fixed() -> Vec<Instance> {
    let n = 4;
    let c = Chart::new(n).expect("dim 4");
    let eta = c.dx(0).wedge(&c.dx(1)).expect("chart");
    let g = vec![c.partial(0), c.partial(1)];
    let s = Q::from_integer(3.into());
    let beta = c.dx(2).wedge(&c.dx(0)).expect("chart").scale_rational(&s);
    let wild = c.dx(2).wedge(&c.dx(3)).expect("chart");
    let base = Instance::new(n, "parametrization").with_eta(&eta).with_g(&g);
    vec![
        tag(base.clone().with_beta(&beta), "kernel example s=3".into()),
        tag(base.clone().with_beta(&wild), "rank jump for non-horizontal beta".into()),
        tag(Instance { check: Some("linear_lemmas".into()), ..base.with_beta(&beta) }, "standard instance".into()),
    ]
}

// ---------- Maurer-Cartan ----------

/// `beta = F_{-Z}(d theta)`: then `F_Z(beta) = d theta` is closed, so `beta` is MC.
fn mc_positive(rng: &mut TrialRng, z: &MultivectorField, n: usize, p: &GenParams) -> Option<DifferentialForm> {
    let theta = gen::form(rng, n, 1, p);
    let gamma = de_rham(&theta);
    let minus = KoszulContext::new(z.neg()).ok()?;
    koszul::f_symbolic(&gamma, &minus).ok().map(|f| f.to_form())
}

fn mc_trial(rng: &mut TrialRng, cfg: &ResolvedConfig) -> Vec<Instance> {
    let n = cfg.dim;
    let p = GenParams { max_terms: 2, ..params(cfg) };
    let constant = GenParams { coef_degree: 0, ..p };
    let z = nonzero_bivector_field(rng, n, &p);
    let beta = gen::form(rng, n, 2, &constant);
    let mut out = vec![Instance::new(n, "mc_equivalence").with_z(&z).with_beta(&beta)];
    let z_const = bivector_field(&gen::bivector(rng, n, 5));
    let beta_poly = gen::form(rng, n, 2, &p);
    out.push(Instance::new(n, "mc_equivalence").with_z(&z_const).with_beta(&beta_poly));
    if let Some(b) = mc_positive(rng, &z_const, n, &p) {
        out.push(Instance::new(n, "mc_equivalence").with_z(&z_const).with_beta(&b));
    }
    out
}

fn family_instances(check: &str, with_data: bool) -> Vec<Instance> {
    let mut out = Vec::new();
    for fam in [presymplectic::family_f1(), presymplectic::family_f2()] {
        let n = fam.data.dim();
        for (label, beta) in &fam.instances {
            let inst = if with_data {
                Instance::new(n, check).with_eta(fam.data.eta()).with_g(fam.data.complement().sections())
            } else {
                Instance::new(n, check).with_z(fam.data.z())
            };
            out.push(tag(inst.with_beta(beta), format!("{} {label}", fam.name)));
        }
    }
    out
}

fn mc_fixed() -> Vec<Instance> {
    family_instances("mc_equivalence", false)
}

// ---------- Dirac ----------

fn dirac_trial(rng: &mut TrialRng, cfg: &ResolvedConfig, trial: u64) -> Vec<Instance> {
    let n = cfg.dim;
    let p = GenParams { max_terms: 2, ..params(cfg) };
    let closed_case = trial % 2 == 0;
    let eta = if closed_case { de_rham(&gen::form(rng, n, 1, &p)) } else { gen::form(rng, n, 2, &p) };
    let z = bivector_field(&gen::bivector(rng, n, 5));
    let beta = if closed_case { mc_positive(rng, &z, n, &p) } else { None };
    let beta = beta.unwrap_or_else(|| gen::form(rng, n, 2, &p));
    vec![
        Instance::new(n, "dirac_graph").with_eta(&eta),
        Instance::new(n, "dirac_phi_z").with_z(&z).with_beta(&beta),
    ]
}

fn dirac_fixed() -> Vec<Instance> {
    let c2 = Chart::new(2).expect("dim 2");
    let c3 = Chart::new(3).expect("dim 3");
    let closed = c2.dx(0).wedge(&c2.dx(1)).expect("chart").scale(&Scalar::var(0));
    let open = c3.dx(0).wedge(&c3.dx(2)).expect("chart").scale(&Scalar::var(1));
    let mut out = vec![
        tag(Instance::new(2, "dirac_graph").with_eta(&closed), "graph of x1 dx1^dx2".into()),
        tag(Instance::new(3, "dirac_graph").with_eta(&open), "graph of x2 dx1^dx3".into()),
    ];
    out.extend(family_instances("dirac_phi_z", false));
    out
}

// ---------- pre-symplectic ----------

fn presymplectic_fixed() -> Vec<Instance> {
    let mut out = Vec::new();
    for fam in [presymplectic::family_f1(), presymplectic::family_f2()] {
        let n = fam.data.dim();
        let base = Instance::new(n, "data_invariants").with_eta(fam.data.eta()).with_g(fam.data.complement().sections());
        out.push(tag(base, format!("{} data", fam.name)));
        out.push(tag(
            Instance::new(n, "preservation_conditions").with_frame(fam.data.kernel().sections()).with_z(fam.data.z()),
            format!("{} conditions", fam.name),
        ));
    }
    out.extend(family_instances("deform", true));
    let (k, ctx) = presymplectic::non_involutive_kernel_case();
    out.push(tag(
        Instance::new(k.dim(), "preservation_conditions").with_frame(k.sections()).with_z(ctx.z()),
        "non-involutive kernel".into(),
    ));
    out
}

fn presymplectic_trial(rng: &mut TrialRng, cfg: &ResolvedConfig, trial: u64) -> Vec<Instance> {
    let p = GenParams { max_terms: 2, ..params(cfg) };
    let fam = if trial % 2 == 0 { presymplectic::family_f1() } else { presymplectic::family_f2() };
    let n = fam.data.dim();
    let ann = fam.data.kernel().annihilator();
    let forms: Vec<(usize, DifferentialForm)> = (0..3)
        .map(|_| {
            let d = rng.gen_range(1..=3usize);
            (d, presymplectic::random_horizontal_form(rng, &ann, n, d, &p))
        })
        .collect();
    let with_data = |check: &str| Instance::new(n, check).with_eta(fam.data.eta()).with_g(fam.data.complement().sections());
    let mut out = vec![
        with_data("preservation").with_forms(&forms),
        with_data("horizontal_d_closed").with_forms(&forms[..1]),
    ];
    out.extend(generated_instance_checks(rng, cfg));
    out
}

/// A sheared normal form, its invariants, and two deformations (one MC by construction).
fn generated_instance_checks(rng: &mut TrialRng, cfg: &ResolvedConfig) -> Vec<Instance> {
    let n = cfg.dim;
    let shear_degree = cfg.max_coef_degree.min(2);
    let inst = presymplectic_instance(rng, n, shear_degree);
    let base = Instance { check: Some("data_invariants".into()), ..inst.clone() };
    let mut out = vec![base];
    let (Ok(Some(eta)), Ok(g)) = (inst.eta(), inst.g()) else { return out };
    let Ok(data) = PreSymplecticData::new(eta, DataOptions { complement: g, ..Default::default() }) else { return out };
    let deform = |beta: &DifferentialForm| Instance { check: Some("deform".into()), ..inst.clone() }.with_beta(beta);
    let shear = presymplectic::random_shear(rng, n, shear_degree.max(1), 2);
    if let Ok(target) = presymplectic::shear_pullback(data.eta(), &shear) {
        if let Ok(beta) = presymplectic::preimage_of(&data, &target) {
            if presymplectic::is_horizontal(&beta, data.kernel()) {
                out.push(deform(&beta));
            }
        }
    }
    let p = GenParams { max_terms: 2, coef_degree: 1, ..params(cfg) };
    let beta = presymplectic::random_horizontal_form(rng, &data.kernel().annihilator(), n, 2, &p);
    out.push(deform(&beta));
    out
}

/// Pullback of `sum dx_(2i-1) ^ dx_(2i)` (rank `2 floor((n-1)/2)`) under a random
/// unipotent shear of the given degree, with the complement transported along.
pub fn presymplectic_instance(rng: &mut TrialRng, n: usize, shear_degree: u32) -> Instance {
    let k = linalg_rank(n);
    let mut eta0 = DifferentialForm::zero(n);
    for i in 0..k / 2 {
        eta0 = &eta0 + &DifferentialForm::basis(n, &[2 * i, 2 * i + 1]);
    }
    let shear = presymplectic::random_shear(rng, n, shear_degree, 3);
    let eta = presymplectic::shear_pullback(&eta0, &shear).expect("polynomial shear");
    // G = J^-1 span(e_1..e_k); J is unipotent so J^-1 is polynomial
    let images: Vec<Poly> = (0..n).map(|i| Poly::var(i).add(&shear[i])).collect();
    let jac = Matrix::from_fn(n, n, |i, j| Scalar::from_poly(images[i].derivative(j)));
    let jinv = jac.inverse().expect("unipotent Jacobian");
    let g: Vec<MultivectorField> = (0..k)
        .map(|j| {
            let mut v = MultivectorField::zero(n);
            for i in 0..n {
                v = &v + &MultivectorField::basis(n, &[i]).scale(&jinv[(i, j)]);
            }
            v
        })
        .collect();
    let mut inst = Instance { chart: n, eta: Some(eta.to_json()), ..Default::default() }.with_g(&g);
    inst.ref_point = Some(vec!["0".to_string(); n]);
    inst
}

/// A random horizontal 2-form for the kernel of `eta` (or the given frame).
pub fn horizontal_form(rng: &mut TrialRng, frame: &[MultivectorField], n: usize, degree: usize, p: &GenParams) -> Option<DifferentialForm> {
    let point = vec![Q::zero(); n];
    let k = presymplectic::DistributionFrame::new(n, frame.to_vec(), &point).ok()?;
    Some(presymplectic::random_horizontal_form(rng, &k.annihilator(), n, degree, p))
}

/// Unit-coordinate frame `(d_(k+1), .., d_n)` of the normal-form kernel.
pub fn normal_kernel(n: usize) -> Vec<MultivectorField> {
    (linalg_rank(n)..n).map(|i| constant_vector(&unit(n, i))).collect()
}
