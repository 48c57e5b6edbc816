//! Experiment description language, report writers and the `hmsim`
//! command-line front end for `hmsim-core`.

pub mod commands;
pub mod edl;
pub mod json;
pub mod parallel;
pub mod report;
