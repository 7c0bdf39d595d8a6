//! Solver adapter, two-stage engine, brute-force oracle, file formats and
//! reports for thesis defence scheduling. The model itself lives in
//! `defsched-core`.

pub mod engine;
pub mod io;
pub mod oracle;
pub mod report;
pub mod solver;

pub use defsched_core as core;
