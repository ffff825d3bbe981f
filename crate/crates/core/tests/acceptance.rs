//! Acceptance suite: one PASS/FAIL line per criterion with timing.

use qcurve::certify::{certify, CRITERIA};
use qcurve::curve::SpectralCurve;

#[test]
fn acceptance_criteria() {
    let reports = certify(&SpectralCurve::catalan());
    assert_eq!(reports.len(), CRITERIA);
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<usize> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    println!("{} / {} criteria pass", CRITERIA - failed.len(), CRITERIA);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
