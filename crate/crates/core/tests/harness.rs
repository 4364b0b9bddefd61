use vega_core::harness::{
    bounds_suite, nonpositive_transfer_survey, pigou_dalton_suite, population_invariance_suite,
    scale_invariance_suite,
};

#[test]
fn bounds_hold_on_seeded_samples() {
    let outcome = bounds_suite(500, 11);
    assert!(outcome.passed(), "{outcome:?}");
}

#[test]
fn pigou_dalton_with_a_zero_minority() {
    let outcome = pigou_dalton_suite(500, 12, true);
    assert!(outcome.passed(), "{outcome:?}");
}

#[test]
fn suites_are_reproducible() {
    assert_eq!(scale_invariance_suite(50, 3), scale_invariance_suite(50, 3));
    assert_eq!(population_invariance_suite(50, 4), population_invariance_suite(50, 4));
}

// Negative incomes sit outside the regime where the transfer principle is
// guaranteed; the survey only counts what happens there.
#[test]
fn nonpositive_survey_runs() {
    let survey = nonpositive_transfer_survey(300, 13);
    assert!(survey.negative_minority_cases > 0);
    assert!(survey.negative_minority_violations <= survey.negative_minority_cases);
    assert!(survey.nonpositive_majority_violations <= survey.nonpositive_majority_cases);
    println!("{survey:?}");
}
