//! Mutation-analysis toolkit over MiniLang.
//!
//! The pipeline is: [`lang`] parses and runs programs, [`mutation`] derives
//! single-change mutants, [`harness`] executes test suites against them to
//! build a kill matrix, [`analysis`] computes scores and disjoint mutant sets,
//! and [`experiment`] reproduces the random test-selection study on top.

pub mod lang;
pub mod mutation;
pub mod harness;
pub mod analysis;
pub mod stats;
pub mod experiment;
