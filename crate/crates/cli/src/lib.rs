//! Check-suite runner and report plumbing for the `mcov` binary.
//!
//! The library side exists so integration tests can drive the suite
//! in-process; the binary in `main.rs` is a thin argument layer over
//! [`suite::run_suite`] and the query helpers in `mcov-core`.

pub mod checks;
pub mod report;
pub mod suite;
