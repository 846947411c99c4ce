//! JSON presentation bundles for `dgcat`, the suites that run on them and
//! the reports they produce.

pub mod bundle;
pub mod cli;
pub mod fixtures;
pub mod format;
pub mod report;
pub mod suites;
