//! Acceptance battery: one test per criterion, each printing its pass/fail line.

use gskit_repro::{criterion, DEFAULT_SEED};

fn run(id: u8) {
    let report = criterion(id, DEFAULT_SEED);
    println!("{}", report.line());
    print!("{}", report.details());
    assert!(report.passed(), "{}", report.line());
}

#[test]
fn criterion_01_exact_checkpoints() {
    run(1);
}

#[test]
fn criterion_02_closed_form_consistency() {
    run(2);
}

#[test]
fn criterion_03_hopf_detection() {
    run(3);
}

#[test]
fn criterion_04_lyapunov_sign_law() {
    run(4);
}

#[test]
fn criterion_05_continuation_vs_closed_form() {
    run(5);
}

#[test]
fn criterion_06_two_coexisting_cycles() {
    run(6);
}

#[test]
fn criterion_07_lpc_tangency() {
    run(7);
}

#[test]
fn criterion_08_homoclinic_curve() {
    run(8);
}

#[test]
fn criterion_09_integrator_quality() {
    run(9);
}

#[test]
fn criterion_10_global_map() {
    run(10);
}
