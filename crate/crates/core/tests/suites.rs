use cframe_core::suite::{run_suite, SuiteKind};
use cframe_core::FrameError;

fn show(report: &cframe_core::suite::SuiteReport) {
    for p in &report.properties {
        println!(
            "{:<10} {:<32} {:>4}/{:<4} worst {:e} {}",
            p.suite,
            p.name,
            p.passed,
            p.total,
            p.worst_residual,
            p.first_failure.as_deref().unwrap_or("")
        );
    }
}

#[test]
fn every_suite_passes_on_a_fixed_seed() {
    let report = run_suite(SuiteKind::All, 3, 36).unwrap();
    show(&report);
    assert!(report.all_pass());
}

#[test]
fn suites_are_deterministic_in_the_seed() {
    let a = run_suite(SuiteKind::Axioms, 11, 9).unwrap();
    let b = run_suite(SuiteKind::Axioms, 11, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn duals_suite_includes_a_non_riesz_construction() {
    let report = run_suite(SuiteKind::Duals, 7, 4).unwrap();
    show(&report);
    let riesz = report.property("riesz_dichotomy").unwrap();
    assert!(riesz.total >= 4);
    assert!(report.all_pass());
}

#[test]
fn zero_cases_is_a_parameter_error() {
    assert!(matches!(run_suite(SuiteKind::All, 1, 0), Err(FrameError::Parameter(_))));
    assert!("bogus".parse::<SuiteKind>().is_err());
}
