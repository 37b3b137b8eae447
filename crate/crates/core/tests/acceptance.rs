//! One test per acceptance criterion. Each prints its PASS/FAIL line.

use std::io::Write;

use rmdirac::validate::{run_criterion, ValidationConfig, CRITERIA};

fn check(id: u8) {
    let report = run_criterion(id, &ValidationConfig::default()).expect("known criterion");
    // straight to the handle so the line shows for passing tests too
    let _ = writeln!(std::io::stderr(), "{report}");
    assert!(report.passed, "criterion {id} failed");
}

#[test]
fn criterion_list_is_complete() {
    assert_eq!(CRITERIA.len(), 11);
    assert!(run_criterion(0, &ValidationConfig::default()).is_none());
}

#[test]
fn c01_exact_case_agreement() {
    check(1);
}

#[test]
fn c02_approximate_case_agreement() {
    check(2);
}

#[test]
fn c03_pseudospin_map() {
    check(3);
}

#[test]
fn c04_wavefunction_correctness() {
    check(4);
}

#[test]
fn c05_normalization() {
    check(5);
}

#[test]
fn c06_nu_engine() {
    check(6);
}

#[test]
fn c07_pekeris_contact_identities() {
    check(7);
}

#[test]
fn c08_nonrelativistic_limit() {
    check(8);
}

#[test]
fn c09_oracle_self_tests() {
    check(9);
}

#[test]
fn c10_special_functions() {
    check(10);
}

#[test]
fn c11_pt_case() {
    check(11);
}
