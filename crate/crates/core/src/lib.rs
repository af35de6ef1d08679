//! Find the entries common to several unstructured databases with an
//! amplified quantum search, and predict its behaviour in closed form.
//!
//! The crate has three layers:
//!
//! * [`statevector`]: a dense state-vector register with the small gate
//!   set the search needs (Hadamard layers, conditional bit/sign flips,
//!   seeded measurement sampling).
//! * [`oracle`] and [`amplify`]: the composed membership oracle that
//!   marks common entries on a flag qubit, and the partial-diffusion
//!   amplification loop that boosts them (plus a standard inversion-about-
//!   the-mean baseline for comparison).
//! * [`analytics`] and [`classical`]: closed-form schedules, success
//!   probabilities and oracle-call accounting, and the classical full-scan
//!   baseline used as ground truth.
//!
//! [`report`] ties the layers together into run and sweep reports for the
//! command-line harness.

pub mod amplify;
pub mod analytics;
pub mod classical;
mod error;
pub mod oracle;
pub mod report;
pub mod statevector;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
