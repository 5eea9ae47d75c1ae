mod common;

use prodsurf::classifier::{catalog_fixtures, Property};
use prodsurf::json::to_report_json;
use prodsurf::{classify, verify_catalog, SampleBox, SampleGrid, TolerancePolicy};

#[test]
fn verdict_level_implications_hold_on_every_fixture() {
    let tol = TolerancePolicy::default();
    for fx in catalog_fixtures() {
        let v = classify(&fx.spec, &fx.grid, &tol).unwrap();
        if v.holds(Property::Flat) {
            assert!(v.holds(Property::VanishingSectional), "{}: flat without vanishing sectional", fx.name);
        }
        if v.holds(Property::RiemannVanishes) {
            assert!(v.holds(Property::Flat), "{}", fx.name);
        }
        if v.holds(Property::ProportionalMrs) {
            assert!(!v.holds(Property::Minimal), "{}: proportional MRS and minimal", fx.name);
        }
        for pv in &v.properties {
            assert_eq!(pv.holds, pv.worst_value <= pv.threshold_used, "{} {}", fx.name, pv.property);
            assert_eq!(pv.worst_point.len(), fx.spec.n(), "{} {}", fx.name, pv.property);
        }
    }
}

#[test]
fn verdicts_and_reports_are_bit_identical_across_runs() {
    let tol = TolerancePolicy::default();
    for fx in catalog_fixtures().into_iter().step_by(5) {
        let a = to_report_json(&classify(&fx.spec, &fx.grid, &tol).unwrap());
        let b = to_report_json(&classify(&fx.spec, &fx.grid, &tol).unwrap());
        assert_eq!(a, b, "{}", fx.name);
    }
    assert_eq!(to_report_json(&verify_catalog(&tol)), to_report_json(&verify_catalog(&tol)));
}

#[test]
fn catalog_report_passes_on_defaults() {
    let report = verify_catalog(&TolerancePolicy::default());
    assert!(report.all_passed, "{:#?}", report.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
    assert_eq!(report.passed, report.entries.len());
}

#[test]
fn tighter_thresholds_do_not_flip_robust_failures() {
    let tight = TolerancePolicy::new(1e-12, 1e-12, 1e-9).unwrap();
    let loose = TolerancePolicy::default();
    for fx in catalog_fixtures() {
        let a = classify(&fx.spec, &fx.grid, &loose).unwrap();
        let b = classify(&fx.spec, &fx.grid, &tight).unwrap();
        for (pa, pb) in a.properties.iter().zip(&b.properties) {
            if !pa.holds {
                assert!(!pb.holds, "{} {}", fx.name, pa.property);
            }
        }
    }
}

#[test]
fn grid_dimension_must_match() {
    let fx = &catalog_fixtures()[0];
    let grid = SampleGrid::new(SampleBox::cube(fx.spec.n() + 1, 0.5, 2.0).unwrap(), 3, 0).unwrap();
    assert!(classify(&fx.spec, &grid, &TolerancePolicy::default()).is_err());
}
