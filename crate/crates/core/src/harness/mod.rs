//! Deterministic randomized suites, instance execution and report emission.
//!
//! Every trial draws from its own sub-seed, so serial and parallel runs
//! produce identical reports. Wall times live in a separate `timing` object
//! that [`Report::to_json`] omits unless asked.

pub mod checks;
pub mod gen;
pub mod instance;
pub mod suites;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::ParseError;
use crate::exterior::json::GradedJson;
use checks::{CheckError, Outcome, Status};
pub use instance::Instance;
pub use suites::Suite;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid kind: {0}")]
    InvalidKind(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl HarnessError {
    /// Process exit code: usage, parse and io errors are all `2`.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// User-facing suite options; unset fields take the suite's defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dim: Option<usize>,
    pub max_form_degree: Option<usize>,
    pub max_coef_degree: Option<u32>,
    pub trials: Option<usize>,
    pub seed: u64,
    /// Grid coordinate values; `None` means `{0, 1/2, -1/3}`.
    pub grid: Option<Vec<String>>,
    pub coef_bound: i64,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            dim: None,
            max_form_degree: None,
            max_coef_degree: None,
            trials: None,
            seed: 0,
            grid: None,
            coef_bound: gen::GenParams::default().coef_bound,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn degrees(mut self, form: usize, coef: u32) -> Self {
        self.max_form_degree = Some(form);
        self.max_coef_degree = Some(coef);
        self
    }

    /// Concrete settings for one (non-`all`) suite.
    pub fn resolve(&self, suite: Suite) -> Result<ResolvedConfig, HarnessError> {
        let d = suite.defaults();
        let cfg = ResolvedConfig {
            suite: suite.name().to_string(),
            dim: self.dim.unwrap_or(d.dim),
            max_form_degree: self.max_form_degree.unwrap_or(d.max_form_degree),
            max_coef_degree: self.max_coef_degree.unwrap_or(d.max_coef_degree),
            trials: self.trials.unwrap_or(d.trials),
            seed: self.seed,
            coef_bound: self.coef_bound,
            grid: self.grid.clone().unwrap_or_else(|| vec!["0".into(), "1/2".into(), "-1/3".into()]),
            custom_grid: self.grid.is_some(),
        };
        if cfg.dim == 0 || cfg.dim > 8 {
            return Err(HarnessError::InvalidConfig(format!("dimension must be in 1..=8, got {}", cfg.dim)));
        }
        if suite == Suite::Linalg && cfg.dim < 2 {
            return Err(HarnessError::InvalidConfig("the linalg suite needs dimension at least 2".into()));
        }
        if cfg.trials == 0 {
            return Err(HarnessError::InvalidConfig("trials must be at least 1".into()));
        }
        if cfg.coef_bound < 1 {
            return Err(HarnessError::InvalidConfig("coefficient bound must be positive".into()));
        }
        if cfg.grid.is_empty() || cfg.grid.iter().any(|v| v.trim().parse::<num_rational::BigRational>().is_err()) {
            return Err(HarnessError::InvalidConfig(format!("bad grid values {:?}", cfg.grid)));
        }
        Ok(cfg)
    }
}

/// The configuration actually used, echoed into reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub suite: String,
    pub dim: usize,
    pub max_form_degree: usize,
    pub max_coef_degree: u32,
    pub trials: usize,
    pub seed: u64,
    pub coef_bound: i64,
    pub grid: Vec<String>,
    #[serde(skip)]
    custom_grid: bool,
}

impl ResolvedConfig {
    fn grid_override(&self) -> Option<Vec<String>> {
        self.custom_grid.then(|| self.grid.clone())
    }
}

/// One executed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GradedJson>,
    /// The full input, present on failures; feed it to `run` to replay.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Instance>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// Wall times, kept apart from the deterministic part of the report.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    /// Parallel to `Report::checks`.
    pub checks_ms: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub config: Vec<ResolvedConfig>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timing: Timing,
}

impl Report {
    fn new(suite: Option<String>, instance: Option<String>, config: Vec<ResolvedConfig>, timed: Vec<(CheckRecord, f64)>, start: Instant) -> Self {
        let mut summary = Summary::default();
        for (r, _) in &timed {
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        let (checks, checks_ms): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
        Report {
            suite,
            instance,
            config,
            checks,
            summary,
            timing: Timing { total_ms: start.elapsed().as_secs_f64() * 1e3, checks_ms },
        }
    }

    /// Pretty JSON; `timing` is included only when requested.
    pub fn to_json(&self, include_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        if !include_timing {
            v.as_object_mut().expect("object").remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// `0` when nothing failed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Counts of `(passed, failed, skipped)` for one check name.
    pub fn counts(&self, name: &str) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for r in self.checks.iter().filter(|r| r.name == name) {
            match r.status {
                Status::Pass => c.0 += 1,
                Status::Fail => c.1 += 1,
                Status::Skipped => c.2 += 1,
            }
        }
        c
    }
}

fn record(suite: &str, name: &str, trial: Option<u64>, inst: &Instance, result: Result<Outcome, CheckError>) -> Result<CheckRecord, HarnessError> {
    let outcome = match result {
        Ok(o) => o,
        Err(CheckError::Precondition(msg)) => Outcome::skipped(msg),
        Err(CheckError::Schema(e)) => return Err(e.into()),
    };
    let counterexample = (outcome.status == Status::Fail).then(|| Instance { check: Some(name.to_string()), ..inst.clone() });
    Ok(CheckRecord {
        suite: suite.to_string(),
        name: name.to_string(),
        trial,
        id: inst.id.clone(),
        status: outcome.status,
        detail: outcome.detail,
        witness: outcome.witness.map(|w| w.to_json()),
        counterexample,
    })
}

fn timed_execute(suite: &str, trial: Option<u64>, inst: &Instance) -> (CheckRecord, f64) {
    let t = Instant::now();
    let name = inst.check.clone().unwrap_or_default();
    let rec = record(suite, &name, trial, inst, checks::execute(inst)).unwrap_or_else(|e| CheckRecord {
        // generated payloads always parse; reaching this is a harness bug
        suite: suite.to_string(),
        name: name.clone(),
        trial,
        id: inst.id.clone(),
        status: Status::Fail,
        detail: Some(format!("harness error: {e}")),
        witness: None,
        counterexample: Some(inst.clone()),
    });
    (rec, t.elapsed().as_secs_f64() * 1e3)
}

fn run_one(suite: Suite, cfg: &ResolvedConfig) -> Vec<(CheckRecord, f64)> {
    let name = suite.name();
    let fixed = suites::fixed_instances(suite, cfg);
    let mut out: Vec<(CheckRecord, f64)> = fixed.par_iter().map(|inst| timed_execute(name, None, inst)).collect();
    let trials: Vec<Vec<(CheckRecord, f64)>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            suites::trial_instances(suite, cfg, t).iter().map(|inst| timed_execute(name, Some(t), inst)).collect()
        })
        .collect();
    out.extend(trials.into_iter().flatten());
    out
}

/// Run a suite (or all of them) and assemble the report.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let list: Vec<Suite> = if config.suite == Suite::All { Suite::ALL.to_vec() } else { vec![config.suite] };
    let resolved = list.iter().map(|s| config.resolve(*s)).collect::<Result<Vec<_>, _>>()?;
    let mut timed = Vec::new();
    for (s, cfg) in list.iter().zip(&resolved) {
        timed.extend(run_one(*s, cfg));
    }
    Ok(Report::new(Some(config.suite.name().to_string()), None, resolved, timed, start))
}

/// Execute an instance payload: its named check, or every applicable one.
pub fn run_instance(inst: &Instance) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let names: Vec<String> = match &inst.check {
        Some(c) => vec![c.clone()],
        None => checks::applicable_checks(inst).into_iter().map(String::from).collect(),
    };
    if names.is_empty() {
        return Err(ParseError::Schema("payload supports no checks (need eta, or Z with beta, or frame with forms)".into()).into());
    }
    let mut timed = Vec::new();
    for name in &names {
        let t = Instant::now();
        let rec = record("instance", name, None, inst, checks::execute_named(name, inst))?;
        timed.push((rec, t.elapsed().as_secs_f64() * 1e3));
    }
    let id = inst.id.clone().unwrap_or_else(|| "unnamed".into());
    Ok(Report::new(None, Some(id), Vec::new(), timed, start))
}

/// Parse and run an instance file.
pub fn run_instance_file(path: &std::path::Path) -> Result<Report, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    run_instance(&Instance::from_json_str(&text)?)
}

/// Kinds accepted by [`generate`].
pub const KINDS: &[&str] = &["skew-form", "bivector-field", "horizontal-form", "presymplectic-instance"];

/// Options for [`generate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerateConfig {
    pub seed: u64,
    pub dim: usize,
    /// Coefficient degree for fields, shear degree for instances.
    pub degree: u32,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig { seed: 0, dim: 4, degree: 1 }
    }
}

/// A random object of the given kind, serialized as pretty JSON.
pub fn generate(kind: &str, cfg: &GenerateConfig) -> Result<String, HarnessError> {
    let n = cfg.dim;
    if n == 0 || n > 8 {
        return Err(HarnessError::InvalidConfig(format!("dimension must be in 1..=8, got {n}")));
    }
    let mut rng = gen::rng_for(cfg.seed, 0);
    let p = gen::GenParams { coef_degree: cfg.degree, ..Default::default() };
    let value = match kind {
        "skew-form" => {
            let b = gen::skew_form(&mut rng, n, p.coef_bound);
            serde_json::to_value(b.map(|c| crate::scalar::Scalar::constant(c.clone())).to_form().to_json())
        }
        "bivector-field" => serde_json::to_value(gen::bivector_field(&mut rng, n, &p).to_json()),
        "horizontal-form" => {
            let frame = suites::normal_kernel(n);
            let beta = suites::horizontal_form(&mut rng, &frame, n, 2, &p).expect("normal frame is independent");
            let inst = Instance { chart: n, id: Some(format!("horizontal-form seed {}", cfg.seed)), ..Default::default() }
                .with_frame(&frame)
                .with_forms(&[(2, beta)]);
            serde_json::to_value(inst)
        }
        "presymplectic-instance" => {
            let mut inst = suites::presymplectic_instance(&mut rng, n, cfg.degree);
            inst.id = Some(format!("presymplectic-instance seed {} degree {}", cfg.seed, cfg.degree));
            serde_json::to_value(inst)
        }
        other => return Err(HarnessError::InvalidKind(format!("{other:?}; expected one of {}", KINDS.join(", ")))),
    }
    .expect("serializable");
    Ok(serde_json::to_string_pretty(&value).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::new(Suite::Exterior).dim(0).resolve(Suite::Exterior).is_err());
        assert!(SuiteConfig::new(Suite::Exterior).trials(0).resolve(Suite::Exterior).is_err());
        let mut bad_grid = SuiteConfig::new(Suite::Mc);
        bad_grid.grid = Some(vec!["x".into()]);
        assert!(bad_grid.resolve(Suite::Mc).is_err());
        let cfg = SuiteConfig::new(Suite::Linalg).resolve(Suite::Linalg).unwrap();
        assert_eq!((cfg.dim, cfg.trials), (4, 50));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL.iter().chain(std::iter::once(&Suite::All)) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = SuiteConfig::new(Suite::Exterior).seed(11).trials(3).dim(3).degrees(2, 1);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert!(a.all_passed());
        assert_eq!(a.to_json(false), b.to_json(false));
        assert!(!a.to_json(false).contains("total_ms"));
        assert!(a.to_json(true).contains("total_ms"));
    }

    #[test]
    fn instance_without_supported_fields_is_a_schema_error() {
        let inst = Instance { chart: 2, ..Default::default() };
        assert!(matches!(run_instance(&inst), Err(HarnessError::Parse(_))));
    }

    #[test]
    fn uncertifiable_instance_is_skipped() {
        let text = r#"{"chart": 4, "eta": {"chart": 4, "terms": [{"degree": 2, "indices": [1, 2], "num": "x1"}]}}"#;
        let inst = Instance::from_json_str(text).unwrap();
        let r = run_instance(&inst).unwrap();
        let rec = r.checks.iter().find(|c| c.name == "data_invariants").unwrap();
        assert_eq!(rec.status, Status::Skipped);
        assert!(rec.detail.as_deref().unwrap().contains("cannot certify"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn generate_kinds() {
        for kind in KINDS {
            let s = generate(kind, &GenerateConfig::default()).unwrap();
            assert!(s.contains("chart"));
        }
        assert!(matches!(generate("cube", &GenerateConfig::default()), Err(HarnessError::InvalidKind(_))));
    }

    #[test]
    fn generated_normal_form_at_degree_zero() {
        let s = generate("presymplectic-instance", &GenerateConfig { seed: 3, dim: 5, degree: 0 }).unwrap();
        let inst = Instance::from_json_str(&s).unwrap();
        let eta = inst.eta().unwrap().unwrap();
        let expected = &crate::DifferentialForm::basis(5, &[0, 1]) + &crate::DifferentialForm::basis(5, &[2, 3]);
        assert_eq!(eta, expected);
        let r = run_instance(&inst).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.counts("data_invariants"), (1, 0, 0));
    }

    #[test]
    fn generated_instances_certify() {
        for seed in 0..6 {
            let s = generate("presymplectic-instance", &GenerateConfig { seed, dim: 4, degree: 2 }).unwrap();
            let inst = Instance::from_json_str(&s).unwrap();
            let r = run_instance(&inst).unwrap();
            assert_eq!(r.counts("data_invariants"), (1, 0, 0), "seed {seed}: {:?}", r.checks);
        }
    }

    #[test]
    fn generated_horizontal_forms_are_horizontal() {
        for seed in 0..5 {
            let s = generate("horizontal-form", &GenerateConfig { seed, dim: 5, degree: 1 }).unwrap();
            let r = run_instance(&Instance::from_json_str(&s).unwrap()).unwrap();
            assert_eq!(r.counts("horizontal"), (1, 0, 0));
        }
    }
}
