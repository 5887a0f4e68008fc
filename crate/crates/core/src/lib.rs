//! Canonical bases `f_{k,m}` of weakly holomorphic modular forms, their
//! zeros on the arc from `i` to `ρ`, and the bounds behind zero interlacing.

// `!(a < b)` is deliberate wherever a NaN must count as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod qexact;
pub mod poly;
pub mod basis;
pub mod arceval;
pub mod zeros;
pub mod models;
pub mod bounds;
