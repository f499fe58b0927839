//! Reports: determinism, failure replay and generator snapshots.

use presym::harness::checks::Status;
use presym::harness::instance::Instance;
use presym::harness::{self, GenerateConfig, Suite, SuiteConfig};
use presym::Chart;

fn small(suite: Suite, seed: u64) -> SuiteConfig {
    SuiteConfig::new(suite).seed(seed).trials(3)
}

#[test]
fn same_seed_same_report() {
    for suite in [Suite::Exterior, Suite::Koszul, Suite::Linalg, Suite::Mc, Suite::Dirac] {
        let a = harness::run_suite(&small(suite, 11)).unwrap().to_json(false);
        let b = harness::run_suite(&small(suite, 11)).unwrap().to_json(false);
        assert_eq!(a, b, "{}", suite.name());
        let c = harness::run_suite(&small(suite, 12)).unwrap().to_json(false);
        assert_ne!(a, c, "{}", suite.name());
    }
}

#[test]
fn report_does_not_depend_on_thread_count() {
    let cfg = small(Suite::Koszul, 5);
    let parallel = harness::run_suite(&cfg).unwrap().to_json(false);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| harness::run_suite(&cfg).unwrap().to_json(false));
    assert_eq!(parallel, serial);
}

#[test]
fn timing_is_segregated() {
    let r = harness::run_suite(&small(Suite::Exterior, 0)).unwrap();
    let with: serde_json::Value = serde_json::from_str(&r.to_json(true)).unwrap();
    let without: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
    assert!(with.get("timing").is_some());
    assert!(without.get("timing").is_none());
}

#[test]
fn failure_carries_a_replayable_counterexample() {
    let c = Chart::new(4).unwrap();
    let form = c.dx(2).wedge(&c.dx(3)).unwrap();
    let inst = Instance::new(4, "horizontal").with_frame(&[c.partial(2), c.partial(3)]).with_forms(&[(2, form)]);
    let report = harness::run_instance(&inst).unwrap();
    assert_eq!(report.exit_code(), 1);
    let failure = report.failures().next().expect("a failure");
    let replay_json = serde_json::to_string(failure.counterexample.as_ref().unwrap()).unwrap();
    let replay = Instance::from_json_str(&replay_json).unwrap();
    let again = harness::run_instance(&replay).unwrap();
    assert_eq!(again.summary.failed, 1);
    assert_eq!(again.checks[0].detail, failure.detail);
    // the same frame with a horizontal form passes
    let ok = Instance::new(4, "horizontal").with_frame(&[c.partial(2), c.partial(3)]).with_forms(&[(2, c.dx(0).wedge(&c.dx(3)).unwrap())]);
    assert_eq!(harness::run_instance(&ok).unwrap().checks[0].status, Status::Pass);
}

#[test]
fn skew_form_snapshot() {
    let text = harness::generate("skew-form", &GenerateConfig { seed: 1, dim: 4, degree: 1 }).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["chart"], 4);
    let terms = v["terms"].as_array().unwrap();
    let got: Vec<(Vec<u64>, String)> = terms
        .iter()
        .map(|t| (t["indices"].as_array().unwrap().iter().map(|i| i.as_u64().unwrap()).collect(), t["num"].as_str().unwrap().to_string()))
        .collect();
    let want = [
        (vec![1, 2], "45/11"),
        (vec![1, 3], "10"),
        (vec![1, 4], "33/56"),
        (vec![2, 3], "-31/47"),
        (vec![2, 4], "-28/45"),
        (vec![3, 4], "87/17"),
    ];
    assert_eq!(got.len(), want.len(), "{text}");
    for ((gi, gn), (wi, wn)) in got.iter().zip(want.iter()) {
        assert_eq!(gi, wi);
        assert_eq!(gn, wn);
    }
}

#[test]
fn generated_instances_run_clean() {
    for seed in 0..3 {
        let text = harness::generate("presymplectic-instance", &GenerateConfig { seed, dim: 5, degree: 1 }).unwrap();
        let inst = Instance::from_json_str(&text).unwrap();
        let report = harness::run_instance(&inst).unwrap();
        assert!(report.all_passed(), "{}", report.to_json(false));
        assert!(report.summary.passed > 0);
    }
}
