use std::sync::Arc;

use cauchyden::harness::{broken_self_duality, default_properties, run_properties, GenConfig};
use cauchyden::json::FunctorJson;
use cauchyden::prof::{is_cauchy_dense, is_fully_faithful};

#[test]
fn reports_are_reproducible() {
    let cfg = GenConfig {
        seed: 7,
        ..GenConfig::default()
    };
    let props = default_properties();
    let a = run_properties(&cfg, &props, 20).unwrap();
    let b = run_properties(&cfg, &props, 20).unwrap();
    assert!(a.ok(), "{}", a.summary_table(false));
    assert_eq!(a.to_jsonl(false), b.to_jsonl(false));
    let other = run_properties(&GenConfig::default(), &props, 20).unwrap();
    assert_ne!(a.to_jsonl(false), other.to_jsonl(false));
}

#[test]
fn empty_property_set() {
    let r = run_properties(&GenConfig::default(), &[], 10).unwrap();
    assert!(r.ok());
    assert_eq!(r.to_jsonl(false), "");
    assert!(r.summary_table(false).contains("0 properties, 0 failures: PASS"));
}

#[test]
fn infeasible_configuration() {
    let cfg = GenConfig {
        max_objects: 5,
        max_morphisms: 3,
        ..GenConfig::default()
    };
    assert!(run_properties(&cfg, &default_properties(), 1).is_err());
}

#[test]
fn injected_fault_is_reported_and_shrunk() {
    let r = run_properties(&GenConfig::default(), &[broken_self_duality()], 100).unwrap();
    assert!(!r.ok());
    let report = &r.properties[0];
    assert!(!report.failures.is_empty());
    assert!(report.failures.iter().any(|f| f.shrink_steps > 0));
    for f in &report.failures {
        let json: FunctorJson = serde_json::from_value(f.witness.clone()).unwrap();
        let (a, b) = json.to_parts().unwrap();
        let g = json.to_functor(Arc::new(a), Arc::new(b)).unwrap();
        g.validate().unwrap();
        // the shrunk witness still shows the fault
        assert_ne!(is_cauchy_dense(&g), is_fully_faithful(&g.opposite()));
    }
}
