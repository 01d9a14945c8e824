//! Seeded Monte Carlo experiments with exact references.
//!
//! Every experiment returns a [`StatReport`] whose pass flags are pure
//! functions of the stored numbers, and is a pure function of its
//! parameters and [`RngConfig`].

pub mod expectations;
pub mod experiments;
pub mod meeting;
pub mod report;
pub mod rng;
pub mod sampling;

pub use expectations::{expectations, Expectations, MeetingExpectations};
pub use experiments::{
    birkhoff_experiment, chebyshev_experiment, drift_law_experiment, reference_tail,
    sample_experiment, variance_experiment, BirkhoffMode,
};
pub use meeting::{meeting_experiment, MeetingStats, PairRecord};
pub use report::{format_sig, Estimate, Series, StatReport, Tolerance, REPORT_SCHEMA};
pub use rng::RngConfig;
pub use sampling::{sample_column, sample_path, step_column};
