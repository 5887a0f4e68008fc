//! Command-line front end: parameter ranges, JSON documents, interlacing
//! scans, verification suites and plot data.

// `!(a < b)` is deliberate wherever a NaN must count as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod doc;
pub mod plot;
pub mod range;
pub mod scan;
pub mod suites;
