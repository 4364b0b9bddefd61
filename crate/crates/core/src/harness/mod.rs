//! Executable checks of the index's normative properties: synthetic data,
//! progressive transfers, a brute-force oracle, and seeded property suites.

mod generate;
mod oracle;
mod suites;
mod transfer;

pub use generate::{generate, Family, GeneratorSpec};
pub use oracle::{oracle, ORACLE_MAX_N};
pub use suites::{
    angular_mean_witness, bounds_suite, decomposition_suite, diminishing_transfer_check, diminishing_transfer_grid,
    dominance_suite, nonpositive_transfer_survey, pigou_dalton_suite, population_invariance_suite,
    regression_anchors, scale_invariance_suite, Anchor, DiminishingTransferReport, SuiteOutcome, TransferSurvey,
    WitnessReport,
};
pub use transfer::{apply_transfer, Transfer, TransferOutcome};
