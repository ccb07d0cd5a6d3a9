//! Scenario files, built-in tariffs, synthetic profiles, and report formats
//! for the `bess` command-line driver. The algorithms themselves live in
//! `bess-core`.

pub mod builtins;
pub mod document;
pub mod profile_csv;
pub mod report;
pub mod synth;
