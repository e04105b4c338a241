//! Verification suites, reports and configuration behind the `loopvir` binary.

pub mod config;
pub mod report;
pub mod suites;
